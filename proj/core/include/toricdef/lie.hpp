#pragma once

#include "toricdef/fan.hpp"
#include "toricdef/series.hpp"
#include "toricdef/vcomplex.hpp"

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace toricdef {

// t^w * chi^{phi(w)} * f_ray. The character degree is always phi(w).
struct LieKey {
	int ray = 0;
	Exponent w;
	auto operator<=>(const LieKey&) const = default;
};

class LieElement {
public:
	using Terms = std::map<LieKey, Rational>;

	const Terms& terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	std::size_t size() const { return terms_.size(); }
	Rational coeff(int ray, const Exponent& w) const;
	int min_degree() const;  // -1 for zero

	void add_term(int ray, const Exponent& w, const Rational& c);
	void add_term(const LieKey& k, const Rational& c) { add_term(k.ray, k.w, c); }
	LieElement& operator+=(const LieElement& o);
	LieElement& operator-=(const LieElement& o);
	LieElement& operator*=(const Rational& c);
	LieElement operator-() const;
	LieElement truncated(int truncation) const;

	bool operator==(const LieElement& o) const { return terms_ == o.terms_; }

private:
	Terms terms_;
};

LieElement operator+(LieElement a, const LieElement& b);
LieElement operator-(LieElement a, const LieElement& b);
LieElement operator*(const Rational& c, LieElement a);

// Fixed data for one computation: the fan, the parameter degrees phi(e_l) and
// the truncation order of A = K[t]/m^{T+1}.
class LieContext {
public:
	LieContext(const Fan& fan, std::vector<IntVec> parameter_degrees, int truncation);

	const Fan& fan() const { return *fan_; }
	std::size_t num_parameters() const { return degrees_.size(); }
	const std::vector<IntVec>& parameter_degrees() const { return degrees_; }
	int truncation() const { return truncation_; }
	LieContext with_truncation(int truncation) const;

	IntVec degree(const Exponent& w) const;                  // phi(w)
	std::int64_t pairing(int ray, const Exponent& w) const;  // ray(phi(w))
	RaySet cone_rays(int cone) const { return cone_masks_.at(cone); }
	RaySet common_rays(const ConeTuple& t) const;
	// Rays carrying the piece of V_{ray,phi(w)}; see negative_rays.
	RaySet piece_rays(int ray, const Exponent& w) const;

	LieElement bracket(const LieElement& x, const LieElement& y) const;
	LieElement bch(const LieElement& x, const LieElement& y) const;  // x * y
	LieElement bch(const LieElement& x, const LieElement& y, const LieElement& z) const;

private:
	const Fan* fan_;
	std::vector<IntVec> degrees_;
	int truncation_;
	std::vector<std::vector<std::int64_t>> pairings_;  // [ray][parameter]
	std::vector<RaySet> cone_masks_;
};

// Coefficient of the right-nested bracket [w_1,[w_2,...,w_d]] in Dynkin's
// series for log(e^x e^y). Letters are 'x' and 'y'.
Rational dynkin_coefficient(std::string_view word);

struct LieCochain {
	int level = 0;
	std::map<ConeTuple, LieElement> entries;  // sorted tuples only, zero entries omitted

	const LieElement& at(const ConeTuple& t) const;  // zero if absent
	void set(const ConeTuple& t, LieElement v);
	bool operator==(const LieCochain&) const = default;
};

// Level-1 value on an ordered pair, using (tau, sigma) = -(sigma, tau).
LieElement pair_value(const LieCochain& x, int i, int j);

// o0(a)_{ij} = (-a_i) * a_j on every pair i < j of the context's cones.
LieCochain o0(const LieContext& ctx, const LieCochain& a);
// Same, restricted to the listed pairs (each sorted).
LieCochain o0(const LieContext& ctx, const LieCochain& a, const std::vector<ConeTuple>& pairs);
// o1(x)_{ijk} = x_{jk} * (-x_{ik}) * x_{ij} on every triple i < j < k.
LieCochain o1(const LieContext& ctx, const LieCochain& x);
// (a . x)_{ij} = a_i * x_{ij} * (-a_j).
LieCochain odot(const LieContext& ctx, const LieCochain& a, const LieCochain& x);

// Drop every term that is a section over the common face of its tuple.
LieCochain lambda(const LieContext& ctx, const LieCochain& c);
LieCochain section_s(const LieCochain& q);
// Throws std::invalid_argument unless lambda(c) = 0.
LieCochain iota_pre(const LieContext& ctx, const LieCochain& c);
LieCochain o_sigma(const LieContext& ctx, const LieCochain& a);

// Closed-form bracket combinatorics.
std::vector<std::vector<int>> delta_set(int d, int k);
std::vector<std::vector<Exponent>> nabla_set(const Exponent& w, int d);
int delta_sign(const std::vector<int>& a);

// [z_m [z_{m-1} ... z_1]] for z_i = chi^{v_i} f_{rho_i}, terms listed as
// (rho_1, v_1), ..., (rho_m, v_m). Result is ray -> coefficient of
// chi^{v_1+...+v_m} f_ray.
std::map<int, Rational> iterated_bracket(const Fan& fan, const std::vector<std::pair<int, IntVec>>& terms);

// Coefficient of t^w in o0(s(a))_{ij} from the closed-form sum over
// decompositions of w, ray tuples and Dynkin words. Returns ray -> coefficient.
std::map<int, Rational> obstruction_coefficient(const LieContext& ctx, const Exponent& w, const LieCochain& a,
                                                int i, int j);

std::string term_string(const LieContext& ctx, const LieKey& k);  // "t1*t4 * chi^(-1,-1,0) * f_4"
std::string dump(const LieContext& ctx, const LieCochain& c);

}  // namespace toricdef
