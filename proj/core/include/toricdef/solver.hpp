#pragma once

#include "toricdef/fan.hpp"
#include "toricdef/lie.hpp"
#include "toricdef/series.hpp"
#include "toricdef/vcomplex.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace toricdef {

// The residual of a solver step is not in the span of the obstruction cocycles,
// or a lower-order term survived. Either means a bug or inconsistent input.
class InconsistencyError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

enum class ThetaPolicy { MinCone, Paper, Explicit };
enum class PairMode { All, Codim1, Explicit };

// One explicit first-order direction: the pair (ray, degree) and a ray lying in
// the component that is kept.
struct ThetaSpec {
	int ray = 0;
	IntVec degree;
	int keep_ray = 0;
};

// "ray:u1,u2,u3@keep;ray:...". Throws std::invalid_argument.
std::vector<ThetaSpec> parse_theta_specs(const std::string& text);

struct SolverOptions {
	int max_order = 8;
	std::int64_t bound = 0;  // 0 picks default_bound
	bool allow_shell_warning = false;
	ThetaPolicy theta_policy = ThetaPolicy::MinCone;
	std::vector<ThetaSpec> explicit_thetas;
	std::optional<std::pair<int, int>> omega_wall;  // preferred pair for omega, original cone indices
	std::vector<int> cone_order;                    // original cone indices, smallest first; empty = file order
	std::vector<int> subfan;                        // original cone indices kept; empty = all
	PairMode pairs = PairMode::All;
	std::vector<ConeTuple> explicit_pairs;  // original cone indices
	bool gamma_filter = false;
	bool prune_irrelevant = false;
	bool trace = false;
	int jobs = 1;
};

struct ThetaDirection {
	int ray = 0;
	IntVec degree;
	std::vector<int> cones;  // working cone indices where the cocycle is 1
};

struct OmegaDirection {
	int ray = 0;
	IntVec degree;
	CechVector cocycle;  // level 1, working cone indices
};

// Everything fixed before the iteration starts.
struct DeformationBasis {
	Fan working;                    // the fan the cochains live on
	std::vector<int> cone_labels;   // working cone -> original cone index
	std::vector<int> cone_rank;     // working cone -> position in the cone order
	std::vector<ThetaDirection> thetas;
	std::vector<OmegaDirection> omegas;
	std::vector<IntVec> phi() const;
};

struct TraceRow {
	int order = 0;
	Exponent w;
	int ray = 0;
	std::map<int, Rational> deformation;       // working cone -> coefficient in alpha
	std::map<ConeTuple, Rational> obstruction;  // working pair -> coefficient in the residual
	std::map<int, Rational> gamma;              // omega index -> coefficient
};

struct Hull {
	std::vector<ThetaDirection> parameters;
	std::vector<OmegaDirection> obstruction_directions;
	std::vector<TruncPoly> obstructions;  // g_l, same order as obstruction_directions
	int order = 0;
	bool exact = false;
	std::optional<IntVec> certificate;  // positivity functional on parameter degrees
	int candidate_degree = 0;           // largest total degree of a possible obstruction monomial
	std::vector<int> cone_labels;
	std::vector<ConeTuple> pair_labels;  // the working pairs of D, in the order requested
	std::vector<TraceRow> trace;

	// Lowest total degree among obstruction monomials, nullopt when all vanish.
	std::optional<int> lowest_obstruction_degree() const;
};

// theta and omega choices for the given options, using supports of the full fan.
DeformationBasis choose_basis(const Fan& fan, const SupportResult& support1, const SupportResult& support2,
                              const SolverOptions& options);

// Contraction psi on one summand: per cone, the sum of residual entries along the
// shortest lex-minimal path to the component's first cone.
CechVector psi(const VComplex& v, const CechVector& eta, const std::vector<int>& cone_rank);
CechVector coboundary(const VComplex& v, const CechVector& beta);

Hull solve(const Fan& fan, const SolverOptions& options = {});

// True iff every piece of every listed V_{ray,u} on the full fan lies in a cone of the subfan.
bool covering_subfan_check(const Fan& fan, const std::vector<int>& subfan,
                           const std::vector<std::pair<int, IntVec>>& relevant);

// Pairs of maximal cones meeting in a common facet.
std::vector<ConeTuple> codim1_pairs(const Fan& fan);
// Closure under {s,k},{t,k} in D with s n t in k => {s,t} in D.
std::set<ConeTuple> d_closure(const std::set<ConeTuple>& pairs, const Fan& fan);
// codim1_pairs after checking every star is connected in codimension one;
// throws std::invalid_argument otherwise.
std::set<ConeTuple> default_D(const Fan& fan);

struct UnobstructednessReport {
	bool certified = false;
	bool inconclusive = false;
	std::vector<SupportEntry> first_order;   // reduced H^0 support
	std::vector<SupportEntry> second_order;  // H^1 support
	std::optional<SupportEntry> witness;     // H^1 pair reachable from first-order data
	int witness_base = -1;                   // index into first_order with the witness ray
	std::vector<int> witness_multiplicities; // over first_order degrees
};

UnobstructednessReport unobstructedness_check(const Fan& fan, std::int64_t bound);

}  // namespace toricdef
