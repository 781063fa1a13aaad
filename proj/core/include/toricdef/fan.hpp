#pragma once

#include "toricdef/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace toricdef {

// Bitmask over ray indices; fans are limited to 64 rays.
using RaySet = std::uint64_t;
inline constexpr std::size_t kMaxRays = 64;

inline RaySet ray_bit(int r) { return RaySet{1} << r; }
RaySet mask_of(std::span<const int> rays);
std::vector<int> rays_of(RaySet s);
inline int ray_count(RaySet s) { return __builtin_popcountll(s); }

using Cone = std::vector<int>;  // sorted ray indices

struct Fan {
	int rank = 0;
	std::vector<IntVec> rays;
	std::vector<Cone> max_cones;

	std::size_t num_rays() const { return rays.size(); }
	std::size_t num_cones() const { return max_cones.size(); }
	bool operator==(const Fan&) const = default;
};

struct PrimitiveCollection {
	Cone rays;
	Cone relation_cone;                    // cone containing the generator sum in its relative interior
	std::map<int, Rational> coefficients;  // ray -> c > 0
	Rational degree;                       // |P| - sum c
};

// Empty report iff the fan is well formed. Intersection checks solve a small
// feasibility problem per cone pair and are off by default.
std::vector<std::string> validate_fan(const Fan& fan, bool check_intersections = false);

std::int64_t pairing(const Fan& fan, int ray, const IntVec& u);

bool is_simplicial(const Fan& fan);
bool is_smooth(const Fan& fan);
bool has_torus_factor(const Fan& fan);

// Wall condition plus connectivity; throws std::invalid_argument on a non-pure fan.
bool is_complete(const Fan& fan);

int cone_dimension(const Fan& fan, const Cone& cone);
bool is_cone_simplicial(const Fan& fan, const Cone& cone);
bool is_cone_smooth(const Fan& fan, const Cone& cone);

// Every face of the cone, the empty face and the cone itself included.
std::vector<Cone> cone_faces(const Fan& fan, const Cone& cone);
// Every cone of the fan (all faces of maximal cones), deduplicated and sorted.
std::vector<Cone> all_cones(const Fan& fan);

bool smooth_in_codim(const Fan& fan, int k);
bool qfactorial_in_codim(const Fan& fan, int k);
Fan subfan_with_3cones(const Fan& fan);

// Keep only the listed maximal cones; ray indices are preserved.
Fan restrict_to(const Fan& fan, std::span<const int> cone_indices);
// Reorder maximal cones: new cone i is old cone perm[i].
Fan permute_cones(const Fan& fan, std::span<const int> perm);

std::vector<PrimitiveCollection> primitive_collections(const Fan& fan);

struct RigidityReport {
	bool rigid_certified = false;
	std::vector<PrimitiveCollection> collections;
};
RigidityReport rigidity_check(const Fan& fan);

// Three-dimensional P^1-bundle over a Hirzebruch surface; cones ordered so the
// four cones around the fifth ray come first.
Fan fixture_p1bundle_hirzebruch(int e, int a, int b);
// P(O + O(a_1) + ... + O(a_r)) over P^s.
Fan fixture_projective_bundle(int s, std::span<const int> degrees);
Fan fixture_projective_space(int n);

}  // namespace toricdef
