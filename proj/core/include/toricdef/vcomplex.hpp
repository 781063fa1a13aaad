#pragma once

#include "toricdef/fan.hpp"
#include "toricdef/linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toricdef {

using ConeTuple = std::vector<int>;  // strictly increasing maximal-cone indices

// Rays rho' with rho'(u) < 0, except that `ray` itself needs ray(u) < -1.
// With no distinguished ray this is the plain negative set defining V_u.
RaySet negative_rays(const Fan& fan, std::optional<int> ray, const IntVec& u);

// True iff chi^u is a section of O(D_ray) on the cone, i.e. its piece is empty.
bool section_membership(const Fan& fan, const Cone& cone, int ray, const IntVec& u);

struct VComplex {
	std::optional<int> ray;
	IntVec degree;
	std::vector<RaySet> pieces;          // one per maximal cone
	std::map<ConeTuple, RaySet> nerve;   // tuples of length 1..3 with nonempty common piece

	bool empty() const;
	std::vector<ConeTuple> tuples(int level) const;  // level k = tuples of length k + 1
	RaySet piece(const ConeTuple& t) const;          // zero if absent
};

VComplex build_vcomplex(const Fan& fan, std::optional<int> ray, const IntVec& u);

struct CechVector {
	int level = 0;
	std::map<ConeTuple, Rational> entries;

	bool operator==(const CechVector&) const = default;
};

struct Component {
	std::vector<int> cones;  // cones whose piece lies in this component, increasing
	RaySet rays = 0;
	int min_cone = -1;
};

// Connected components of the graph on cones with nonempty piece, with edges
// between cones whose common piece is nonempty. Sorted by min_cone.
std::vector<Component> components(const VComplex& v);

// Alternating differential C^level -> C^{level+1} in the tuple order of tuples().
QMatrix cech_differential(const VComplex& v, int level);

struct CohomologyResult {
	int dim = 0;
	std::vector<CechVector> basis;
};

// k = 0: reduced H^0 with the component indicators minus the min-cone component.
// k = 1: H^1 of the alternating complex, basis of cocycles spanning a complement
// of the coboundaries.
CohomologyResult cech_cohomology(const VComplex& v, int k);

// Dimension only; uses cheap shortcuts before falling back to ranks.
int reduced_cohomology_dim(const VComplex& v, int k);

struct SupportEntry {
	int ray = 0;
	IntVec degree;
	int dim = 0;

	bool operator==(const SupportEntry&) const = default;
};

struct SupportResult {
	std::vector<SupportEntry> entries;  // sorted by ray, then degree
	std::int64_t bound = 0;
	bool shell_warning = false;
};

std::int64_t default_bound(const Fan& fan);

// Pairs with ray(u) = -1, |u_i| <= bound and nonzero reduced H^{k-1}(V_{ray,u}).
SupportResult enumerate_support(const Fan& fan, int k, std::int64_t bound, int jobs = 1);

struct VanishingResult {
	bool vanishes = true;
	bool shell_warning = false;
};
VanishingResult structure_sheaf_vanishing(const Fan& fan, int k, std::int64_t bound);

int tangent_cohomology_dim(const Fan& fan, int k, std::int64_t bound);

}  // namespace toricdef
