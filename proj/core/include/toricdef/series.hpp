#pragma once

#include "toricdef/rational.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toricdef {

using Exponent = std::vector<int>;  // t^w, one entry per deformation parameter

int total_degree(const Exponent& w);
Exponent operator+(const Exponent& a, const Exponent& b);
bool divides(const Exponent& a, const Exponent& b);
Exponent unit_exponent(std::size_t nvars, std::size_t i);

// Graded lexicographic comparison: total degree first, then lex with t1 > t2 > ...
std::strong_ordering grlex_compare(const Exponent& a, const Exponent& b);

// Leading-term order for normal forms: lower total degree ranks higher (local
// order), ties broken by grlex. As a map comparator it puts the leading
// monomial first.
struct LeadingFirst {
	bool operator()(const Exponent& a, const Exponent& b) const;
};

std::string monomial_string(const Exponent& w);  // "t1^2*t3", "1" for the unit

// Truncated polynomial in t_1..t_p: no stored zero, nothing above the truncation.
class TruncPoly {
public:
	using Terms = std::map<Exponent, Rational, LeadingFirst>;

	TruncPoly() = default;
	TruncPoly(std::size_t nvars, int truncation) : nvars_(nvars), truncation_(truncation) {}

	std::size_t nvars() const { return nvars_; }
	int truncation() const { return truncation_; }
	const Terms& terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	Rational coeff(const Exponent& w) const;
	int min_degree() const;  // -1 for zero

	void add_term(const Exponent& w, const Rational& c);
	TruncPoly& operator+=(const TruncPoly& o);
	TruncPoly& operator-=(const TruncPoly& o);
	TruncPoly& operator*=(const Rational& c);
	TruncPoly times_monomial(const Exponent& m, const Rational& c = 1) const;
	TruncPoly operator*(const TruncPoly& o) const;
	TruncPoly truncated(int truncation) const;

	bool operator==(const TruncPoly& o) const { return terms_ == o.terms_; }

private:
	std::size_t nvars_ = 0;
	int truncation_ = 0;
	Terms terms_;
};

TruncPoly operator+(TruncPoly a, const TruncPoly& b);
TruncPoly operator-(TruncPoly a, const TruncPoly& b);

// Generators g_1..g_q at order r. Echelon data is kept for J_r = <g> + m^{r+1}
// and for m J_r = m<g> + m^{r+2}.
class IdealState {
public:
	enum class Modulus { J, MJ };

	IdealState() = default;
	IdealState(std::size_t nvars, std::vector<TruncPoly> generators, int order);

	std::size_t nvars() const { return nvars_; }
	int order() const { return order_; }
	const std::vector<TruncPoly>& generators() const { return gens_; }

	TruncPoly normal_form(const TruncPoly& f, Modulus mod) const;
	bool is_standard(const Exponent& w, Modulus mod) const;
	std::vector<Exponent> leading_monomials(Modulus mod) const;

	// g_l += gamma_l, order bumped; gamma must be homogeneous of degree new_order
	// and built from standard monomials of m J_r.
	IdealState update(const std::vector<TruncPoly>& gamma, int new_order) const;

private:
	struct Echelon {
		int truncation = 0;  // monomials of higher degree vanish
		std::map<Exponent, TruncPoly::Terms, LeadingFirst> rows;  // leading monomial -> monic row
	};
	static Echelon build(std::size_t nvars, const std::vector<TruncPoly>& gens, int min_mult, int truncation);
	static void reduce(TruncPoly::Terms& f, const Echelon& e);
	const Echelon& echelon(Modulus mod) const { return mod == Modulus::J ? j_ : mj_; }

	std::size_t nvars_ = 0;
	int order_ = 0;
	std::vector<TruncPoly> gens_;
	Echelon j_, mj_;
};

// All exponents in nvars variables with lo <= total degree <= hi, grlex ascending.
std::vector<Exponent> monomials_in_degrees(std::size_t nvars, int lo, int hi);

// Integer l with l . u > 0 for every listed degree, if one exists.
std::optional<IntVec> positivity_functional(const std::vector<IntVec>& degrees);

// Every w >= 0 with sum_i w_i degrees[i] = v; needs a positivity certificate.
std::vector<Exponent> fiber_monomials(const std::vector<IntVec>& degrees, const IntVec& v, const IntVec& cert);

}  // namespace toricdef
