// Acceptance run: one line per criterion, exit status 0 when every criterion
// behaves as expected. `--expect-fail N` marks a criterion known to fail; it
// must then fail for the run to succeed.

#include "properties.hpp"

#include "toricdef/solver.hpp"
#include "toricdef_cli/json_io.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace toricdef;

namespace {

// Every criterion must finish within this many seconds.
constexpr double kTimeLimitSeconds = 60.0;
// Seed for all sampled fixtures.
constexpr unsigned kSeed = 20240611;

struct Verdict {
	bool pass = true;
	std::string detail;

	void require(bool ok, const std::string& what)
	{
		if (!ok && pass) {
			pass = false;
			detail = what;
		}
	}
};

std::string str(const IntVec& v)
{
	std::ostringstream os;
	os << '(';
	for (std::size_t i = 0; i < v.size(); ++i)
		os << (i ? "," : "") << v[i];
	os << ')';
	return os.str();
}

TruncPoly poly(std::size_t nvars, std::initializer_list<std::pair<Exponent, Rational>> terms)
{
	TruncPoly p(nvars, 32);
	for (const auto& [w, c] : terms)
		p.add_term(w, c);
	return p;
}

TruncPoly scaled(TruncPoly p, const Rational& c)
{
	p *= c;
	return p;
}

// Monomial t_i, 1-based.
TruncPoly var(std::size_t nvars, std::size_t i)
{
	Exponent w(nvars, 0);
	w[i - 1] = 1;
	return poly(nvars, {{w, 1}});
}

std::string poly_str(const TruncPoly& p)
{
	std::ostringstream os;
	bool first = true;
	for (const auto& [w, c] : p.terms()) {
		os << (first ? "" : " + ") << to_string(c) << '*' << monomial_string(w);
		first = false;
	}
	return first ? "0" : os.str();
}

SolverOptions explicit_thetas(const std::string& spec, int max_order = 8)
{
	SolverOptions o;
	o.theta_policy = ThetaPolicy::Explicit;
	o.explicit_thetas = parse_theta_specs(spec);
	o.max_order = max_order;
	return o;
}

// The four cones around the fifth ray, with the 4-cycle of walls between them.
SolverOptions table_options(const std::string& spec, int max_order)
{
	SolverOptions o = explicit_thetas(spec, max_order);
	o.subfan = {0, 1, 2, 3};
	o.pairs = PairMode::Explicit;
	o.explicit_pairs = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
	o.trace = true;
	return o;
}

std::string ee3_spec(int e)
{
	std::string s = "4:0,-1,-1@1";
	for (int k = 1; k < e; ++k)
		s += ";1:" + std::to_string(-k) + ",-1,0@2;5:" + std::to_string(-k) + ",0,1@2";
	return s;
}

// ---- table rows -------------------------------------------------------------

// One expected row: deformation on cones 2..4, obstruction on the 4-cycle, gamma.
struct Row {
	Exponent w;
	int ray;
	std::array<Rational, 3> def;
	std::array<Rational, 4> obs;
	Rational gamma;
	bool difference = false;  // listed as f - f', the second ray carries the negation
	int second_ray = -1;
};

Rational q(const char* s) { return parse_rational(s); }

Row row(Exponent w, int ray, std::array<const char*, 3> d, std::array<const char*, 4> o, const char* g = "0")
{
	return {std::move(w), ray, {q(d[0]), q(d[1]), q(d[2])}, {q(o[0]), q(o[1]), q(o[2]), q(o[3])}, q(g)};
}

Row diff(Exponent w, int ray, int second, std::array<const char*, 3> d, std::array<const char*, 4> o,
         const char* g = "0")
{
	Row r = row(std::move(w), ray, d, o, g);
	r.difference = true;
	r.second_ray = second;
	return r;
}

const TraceRow* find_row(const Hull& h, const Exponent& w, int ray)
{
	for (const auto& t : h.trace)
		if (t.w == w && t.ray == ray)
			return &t;
	return nullptr;
}

Rational at(const std::map<int, Rational>& m, int k)
{
	auto it = m.find(k);
	return it == m.end() ? Rational(0) : it->second;
}

Rational at(const std::map<ConeTuple, Rational>& m, const ConeTuple& k)
{
	auto it = m.find(k);
	return it == m.end() ? Rational(0) : it->second;
}

// Compares one ray of an expected row; returns a description of the first mismatch.
std::string compare_row(const Hull& h, const Exponent& w, int ray, const Row& r, int sign)
{
	std::string name = monomial_string(w) + "*f_" + std::to_string(ray);
	const TraceRow* t = find_row(h, w, ray);
	static const std::map<int, Rational> empty_cones;
	static const std::map<ConeTuple, Rational> empty_pairs;
	const auto& def = t ? t->deformation : empty_cones;
	const auto& obs = t ? t->obstruction : empty_pairs;
	for (int c = 0; c < 3; ++c)
		if (at(def, c + 1) != sign * r.def[c])
			return name + " deformation on cone " + std::to_string(c + 1);
	if (at(def, 0) != 0)
		return name + " deformation on cone 0";
	const ConeTuple pairs[4] = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
	for (int p = 0; p < 4; ++p)
		if (at(obs, pairs[p]) != sign * r.obs[p])
			return name + " obstruction on pair " + std::to_string(p);
	Rational g = 0;
	int nonzero = 0;
	if (t)
		for (const auto& [l, c] : t->gamma)
			if (c != 0) {
				g = c;
				++nonzero;
			}
	if (nonzero > 1 || g != sign * r.gamma)
		return name + " gamma";
	return {};
}

Verdict compare_table(const Hull& h, const std::vector<Row>& rows)
{
	Verdict v;
	int entries = 0;
	for (const Row& r : rows) {
		std::string bad = compare_row(h, r.w, r.ray, r, 1);
		if (bad.empty() && r.difference)
			bad = compare_row(h, r.w, r.second_ray, r, -1);
		v.require(bad.empty(), "mismatch at " + bad);
		entries += r.difference ? 2 : 1;
	}
	if (v.pass)
		v.detail = std::to_string(rows.size()) + " rows, " + std::to_string(entries) + " ray entries";
	return v;
}

// ---- criteria ---------------------------------------------------------------

const char* kSpec125 = "4:0,-1,-1@1;4:1,-1,-1@1;4:0,-2,-1@1;5:-1,0,1@2";
const char* kSpec234 = "4:0,-1,-1@1;4:1,-1,-1@1;1:-1,-1,0@2;5:-1,0,1@2;5:-2,0,1@2";
const char* kSpec343 = "4:0,-1,-1@1;4:1,-1,-1@1;5:-1,0,1@2;1:-1,-1,0@2;5:-2,0,1@2;1:-2,-1,0@2;5:-3,0,1@2";

Verdict hull_125()
{
	Verdict v;
	Hull h = solve(fixture_p1bundle_hirzebruch(1, -2, 5), explicit_thetas(kSpec125, 7));
	v.require(h.parameters.size() == 4, "expected 4 parameters");
	v.require(h.obstructions.size() == 1, "expected one generator");
	if (!v.pass)
		return v;
	TruncPoly want = poly(4, {{{0, 0, 2, 1}, 1}, {{1, 1, 1, 2}, -2}, {{2, 2, 0, 3}, 1}});
	v.require(h.obstructions[0] == want, "got " + poly_str(h.obstructions[0]));
	v.require(h.exact, "not exact at order " + std::to_string(h.order));
	if (v.pass)
		v.detail = "g = " + poly_str(h.obstructions[0]) + ", order " + std::to_string(h.order) + ", exact";
	return v;
}

Verdict table_125()
{
	Hull h = solve(fixture_p1bundle_hirzebruch(1, -2, 5), table_options(kSpec125, 7));
	// rays: 4 is the fifth, 5 the sixth
	std::vector<Row> rows{
	    row({1, 0, 0, 0}, 4, {"1", "1", "0"}, {"0", "0", "0", "0"}),
	    row({0, 1, 0, 0}, 4, {"1", "1", "0"}, {"0", "0", "0", "0"}),
	    row({0, 0, 1, 0}, 4, {"1", "1", "0"}, {"0", "0", "0", "0"}),
	    row({0, 0, 0, 1}, 5, {"0", "1", "1"}, {"0", "0", "0", "0"}),

	    diff({1, 0, 0, 1}, 4, 5, {"0", "-1/2", "0"}, {"0", "1/2", "0", "0"}),
	    diff({0, 1, 0, 1}, 4, 5, {"0", "-1/2", "-1"}, {"0", "1/2", "1/2", "0"}),
	    diff({0, 0, 1, 1}, 4, 5, {"0", "-1/2", "-1"}, {"0", "1/2", "1/2", "0"}),

	    row({2, 0, 0, 1}, 4, {"0", "-1/6", "0"}, {"0", "1/6", "0", "0"}),
	    row({1, 1, 0, 1}, 4, {"0", "-1/3", "0"}, {"0", "1/3", "0", "0"}),
	    row({1, 0, 1, 1}, 4, {"0", "-1/3", "0"}, {"0", "1/3", "0", "0"}),
	    row({1, 0, 0, 2}, 5, {"0", "-1/6", "-1"}, {"0", "1/6", "5/6", "0"}),
	    row({0, 2, 0, 1}, 4, {"1", "5/6", "0"}, {"0", "1/6", "5/6", "0"}),
	    row({0, 1, 1, 1}, 4, {"2", "5/3", "0"}, {"0", "1/3", "5/3", "0"}),
	    row({0, 1, 0, 2}, 5, {"0", "-1/6", "0"}, {"0", "1/6", "-1/6", "0"}),
	    row({0, 0, 2, 1}, 4, {"0", "-1/6", "0"}, {"0", "1/6", "5/6", "0"}, "1"),
	    row({0, 0, 1, 2}, 5, {"0", "-1/6", "0"}, {"0", "1/6", "-1/6", "0"}),

	    diff({2, 0, 0, 2}, 4, 5, {"0", "1/12", "0"}, {"0", "-1/12", "0", "0"}),
	    diff({1, 1, 0, 2}, 4, 5, {"0", "1/6", "1"}, {"0", "-1/6", "-5/6", "0"}),
	    diff({1, 0, 1, 2}, 4, 5, {"0", "1/6", "1"}, {"0", "-1/6", "-5/6", "0"}),
	    diff({0, 2, 0, 2}, 4, 5, {"0", "-5/12", "-1/2"}, {"0", "5/12", "1/12", "0"}),
	    diff({0, 1, 1, 2}, 4, 5, {"0", "-5/6", "-1"}, {"0", "5/6", "1/6", "0"}),

	    row({2, 1, 0, 2}, 4, {"0", "1/10", "0"}, {"0", "-1/10", "0", "0"}),
	    row({2, 0, 0, 3}, 5, {"0", "1/30", "1"}, {"0", "-1/30", "-29/30", "0"}),
	    row({1, 2, 0, 2}, 4, {"-1", "-37/30", "0"}, {"0", "7/30", "-37/30", "0"}),
	    row({1, 1, 1, 2}, 4, {"0", "-7/15", "0"}, {"0", "7/15", "-37/15", "0"}, "-2"),
	    row({1, 1, 0, 3}, 5, {"0", "1/15", "0"}, {"0", "-1/15", "1/15", "0"}),
	    row({0, 2, 0, 3}, 5, {"0", "-2/15", "-1/6"}, {"0", "2/15", "1/30", "0"}),

	    diff({2, 1, 0, 3}, 4, 5, {"0", "-1/20", "-1"}, {"0", "1/20", "19/20", "0"}),
	    diff({1, 2, 0, 3}, 4, 5, {"0", "37/60", "1"}, {"0", "-37/60", "-23/60", "0"}),

	    row({2, 2, 0, 3}, 4, {"0", "41/105", "0"}, {"0", "-41/105", "146/105", "0"}, "1"),
	};
	return compare_table(h, rows);
}

Verdict hull_343()
{
	Verdict v;
	Hull h = solve(fixture_p1bundle_hirzebruch(3, -4, 3), explicit_thetas(kSpec343, 4));
	v.require(h.parameters.size() == 7, "expected 7 parameters");
	v.require(h.obstructions.size() == 1, "expected one generator");
	if (!v.pass)
		return v;
	const TruncPoly& g = h.obstructions[0];
	auto c = [&](Exponent w) { return g.coeff(w); };
	v.require(c({1, 0, 0, 1, 0, 0, 0}) == -1, "coefficient of t1*t4");
	v.require(c({0, 1, 0, 0, 0, 1, 0}) == -1, "coefficient of t2*t6");
	Rational a3 = c({2, 0, 1, 0, 0, 0, 0}), a4 = c({0, 2, 0, 0, 0, 0, 1}), a5 = c({1, 1, 0, 0, 1, 0, 0});
	// t4' = -t4 + a3 t1 t3 + a5 t2 t5, t6' = -t6 + a4 t2 t7
	const std::size_t n = 7;
	TruncPoly t4p = scaled(var(n, 1) * var(n, 3), a3) + scaled(var(n, 2) * var(n, 5), a5) - var(n, 4);
	TruncPoly t6p = scaled(var(n, 2) * var(n, 7), a4) - var(n, 6);
	TruncPoly rhs = var(n, 1) * t4p + var(n, 2) * t6p;
	TruncPoly lhs = poly(n, {{{1, 0, 0, 1, 0, 0, 0}, -1},
	                         {{0, 1, 0, 0, 0, 1, 0}, -1},
	                         {{2, 0, 1, 0, 0, 0, 0}, a3},
	                         {{0, 2, 0, 0, 0, 0, 1}, a4},
	                         {{1, 1, 0, 0, 1, 0, 0}, a5}});
	v.require(g == lhs, "generator has further terms: " + poly_str(g));
	v.require(lhs == rhs, "substituted identity fails");

	Hull t = solve(fixture_p1bundle_hirzebruch(3, -4, 3), table_options(kSpec343, 2));
	// rays: 4 is the fifth, 5 the sixth, 1 the second
	std::vector<Row> rows{
	    row({1, 0, 0, 0, 0, 0, 0}, 4, {"1", "1", "0"}, {"0", "0", "0", "0"}),
	    row({0, 1, 0, 0, 0, 0, 0}, 4, {"1", "1", "0"}, {"0", "0", "0", "0"}),
	    row({0, 0, 1, 0, 0, 0, 0}, 5, {"0", "1", "1"}, {"0", "0", "0", "0"}),
	    row({0, 0, 0, 1, 0, 0, 0}, 1, {"0", "1", "1"}, {"0", "0", "0", "0"}),
	    row({0, 0, 0, 0, 1, 0, 0}, 5, {"0", "1", "1"}, {"0", "0", "0", "0"}),
	    row({0, 0, 0, 0, 0, 1, 0}, 1, {"0", "1", "1"}, {"0", "0", "0", "0"}),
	    row({0, 0, 0, 0, 0, 0, 1}, 5, {"0", "1", "1"}, {"0", "0", "0", "0"}),
	    diff({1, 0, 1, 0, 0, 0, 0}, 4, 5, {"0", "-1/2", "-1"}, {"0", "1/2", "1/2", "0"}),
	    row({1, 0, 0, 1, 0, 0, 0}, 4, {"0", "1/2", "0"}, {"0", "-1/2", "-1/2", "0"}, "-1"),
	    diff({1, 0, 0, 0, 1, 0, 0}, 4, 5, {"0", "-1/2", "-1"}, {"0", "1/2", "1/2", "0"}),
	    // the third wall entry is forced to 1/2 by the deformation column and gamma = 0
	    diff({0, 1, 0, 0, 1, 0, 0}, 4, 5, {"0", "-1/2", "-1"}, {"0", "1/2", "1/2", "0"}),
	    row({0, 1, 0, 0, 0, 1, 0}, 4, {"0", "1/2", "0"}, {"0", "-1/2", "-1/2", "0"}, "-1"),
	    diff({0, 1, 0, 0, 0, 0, 1}, 4, 5, {"0", "-1/2", "-1"}, {"0", "1/2", "1/2", "0"}),
	};
	Verdict tv = compare_table(t, rows);
	v.require(tv.pass, "table: " + tv.detail);
	if (v.pass)
		v.detail = "a3=" + to_string(a3) + " a4=" + to_string(a4) + " a5=" + to_string(a5) + ", table " + tv.detail;
	return v;
}

Verdict hull_ee3()
{
	Verdict v;
	std::string coeffs;
	for (int e = 2; e <= 4 && v.pass; ++e) {
		std::string tag = "e=" + std::to_string(e) + ": ";
		Fan fan = fixture_p1bundle_hirzebruch(e, -e, 3);
		Hull h = solve(fan, explicit_thetas(ee3_spec(e), 4));
		const std::size_t n = 2 * e - 1;
		v.require(h.parameters.size() == n, tag + "expected " + std::to_string(n) + " parameters");
		v.require(h.obstructions.size() == static_cast<std::size_t>(e - 1), tag + "expected e-1 generators");
		if (!v.pass)
			break;
		// generators in any order; each must be -t1 t_{2k} + a t1^2 t_{2k+1}
		std::set<int> seen;
		for (const TruncPoly& g : h.obstructions) {
			int k = 0;
			for (int j = 1; j < e; ++j) {
				Exponent w(n, 0);
				w[0] = 1;
				w[2 * j - 1] = 1;
				if (g.coeff(w) == -1)
					k = j;
			}
			v.require(k > 0 && seen.insert(k).second, tag + "no distinct -t1*t_2k term in " + poly_str(g));
			if (k == 0)
				break;
			Exponent sq(n, 0);
			sq[0] = 2;
			sq[2 * k] = 1;
			Rational a = g.coeff(sq);
			Exponent lin(n, 0);
			lin[0] = 1;
			lin[2 * k - 1] = 1;
			TruncPoly want(n, 32);
			want.add_term(lin, -1);
			want.add_term(sq, a);
			v.require(g == want, tag + "generator has further terms: " + poly_str(g));
			coeffs += (coeffs.empty() ? "" : " ") + std::string("a") + std::to_string(2 * k) + "(e=" +
			          std::to_string(e) + ")=" + to_string(a);
		}
		// first- and second-order rows of t1 and t_{2k}
		Hull t = solve(fan, table_options(ee3_spec(e), 2));
		std::vector<Row> rows{row(Exponent(n, 0), 4, {"1", "1", "0"}, {"0", "0", "0", "0"})};
		rows[0].w[0] = 1;
		for (int k = 1; k < e; ++k) {
			Exponent w(n, 0);
			w[2 * k - 1] = 1;
			rows.push_back(row(w, 1, {"0", "1", "1"}, {"0", "0", "0", "0"}));
			w[0] = 1;
			rows.push_back(row(w, 4, {"0", "1/2", "0"}, {"0", "-1/2", "-1/2", "0"}, "-1"));
		}
		Verdict tv = compare_table(t, rows);
		v.require(tv.pass, tag + "table: " + tv.detail);
	}
	if (v.pass)
		v.detail = coeffs;
	return v;
}

Verdict hull_234()
{
	Verdict v;
	Hull h = solve(fixture_p1bundle_hirzebruch(2, -3, 4), explicit_thetas(kSpec234, 8));
	v.require(h.parameters.size() == 5, "expected 5 parameters");
	v.require(h.obstructions.size() == 2, "expected two generators");
	if (!v.pass)
		return v;
	// g1 sits in degree (-1,-3,-1), g2 in (-2,-3,-1)
	int i1 = -1, i2 = -1;
	for (std::size_t l = 0; l < 2; ++l) {
		if (h.obstruction_directions[l].degree == IntVec{-1, -3, -1})
			i1 = static_cast<int>(l);
		if (h.obstruction_directions[l].degree == IntVec{-2, -3, -1})
			i2 = static_cast<int>(l);
	}
	v.require(i1 >= 0 && i2 >= 0, "obstruction degrees differ from (-1,-3,-1), (-2,-3,-1)");
	if (!v.pass)
		return v;
	const TruncPoly& g1 = h.obstructions[i1];
	const TruncPoly& g2 = h.obstructions[i2];
	const std::vector<Exponent> m1{{0, 1, 2, 0, 0}, {1, 1, 1, 1, 0}, {0, 2, 1, 0, 1},
	                               {0, 3, 0, 0, 2}, {2, 1, 0, 2, 0}, {1, 2, 0, 1, 1}};
	const std::vector<Exponent> m2{{1, 0, 2, 0, 0}, {1, 1, 1, 0, 1}, {2, 0, 1, 1, 0},
	                               {3, 0, 0, 2, 0}, {1, 2, 0, 0, 2}, {2, 1, 0, 1, 1}};
	// a1=-b1=a4=-b4=a5=-b5=1, -a2=b2=-a3=b3=a6=-b6=2
	const int a[6] = {1, -2, -2, 1, 1, 2};
	for (int i = 0; i < 6; ++i) {
		v.require(g1.coeff(m1[i]) == a[i], "a" + std::to_string(i + 1) + " = " + to_string(g1.coeff(m1[i])));
		v.require(g2.coeff(m2[i]) == -a[i], "b" + std::to_string(i + 1) + " = " + to_string(g2.coeff(m2[i])));
	}
	const std::size_t n = 5;
	TruncPoly t3p = var(n, 1) * var(n, 4) + var(n, 2) * var(n, 5) - var(n, 3);
	TruncPoly sq = t3p * t3p;
	v.require(var(n, 2) * sq == g1, "t2*t3'^2 != g1: " + poly_str(g1));
	v.require(scaled(var(n, 1) * sq, -1) == g2, "t1*t3'^2 != -g2: " + poly_str(g2));
	if (v.pass)
		v.detail = "order " + std::to_string(h.order) + (h.exact ? ", exact" : ", not exact");
	return v;
}

std::vector<std::vector<int>> random_tuples(std::mt19937& rng, int count)
{
	std::uniform_int_distribution<int> len(1, 4), deg(0, 6);
	std::vector<std::vector<int>> out;
	for (int i = 0; i < count; ++i) {
		std::vector<int> d(len(rng));
		for (int& x : d)
			x = deg(rng);
		std::sort(d.begin(), d.end());
		out.push_back(d);
	}
	return out;
}

std::string tuple_str(const std::vector<int>& d)
{
	std::ostringstream os;
	for (std::size_t i = 0; i < d.size(); ++i)
		os << (i ? "," : "") << d[i];
	return "(" + os.str() + ")";
}

Verdict tangent_dimensions()
{
	Verdict v;
	std::mt19937 rng(kSeed);
	int agree_end = 0;
	std::string first_mismatch;
	for (const auto& d : random_tuples(rng, 20)) {
		Fan fan = fixture_projective_bundle(1, d);
		std::int64_t bound = default_bound(fan);
		int t1 = tangent_cohomology_dim(fan, 1, bound);
		int h2 = tangent_cohomology_dim(fan, 2, bound);
		int formula = 0;
		for (int x : d)
			formula += std::max(x - 1, 0);
		// h^1 of the endomorphisms of O + O(a_1) + ... + O(a_r) on the base line
		std::vector<int> all{0};
		all.insert(all.end(), d.begin(), d.end());
		int endo = 0;
		for (int x : all)
			for (int y : all)
				endo += std::max(x - y - 1, 0);
		agree_end += t1 == endo;
		std::string tag = tuple_str(d) + ": T1=" + std::to_string(t1) + " formula=" + std::to_string(formula) +
		                  " h1(End)=" + std::to_string(endo);
		if (t1 != formula && first_mismatch.empty())
			first_mismatch = tag;
		v.require(t1 == formula, tag);
		v.require(h2 == 0, tuple_str(d) + ": H2=" + std::to_string(h2));
	}
	const std::vector<std::pair<int, std::vector<int>>> higher{{2, {1}}, {2, {0, 2}}, {3, {1}}, {2, {3}}};
	for (const auto& [s, d] : higher) {
		Fan fan = fixture_projective_bundle(s, d);
		int t1 = tangent_cohomology_dim(fan, 1, default_bound(fan));
		v.require(t1 == 0, "s=" + std::to_string(s) + " " + tuple_str(d) + ": T1=" + std::to_string(t1));
	}
	std::string endo_note = "; T1 = h1(End) on " + std::to_string(agree_end) + "/20";
	v.detail = (v.pass ? std::string("20 tuples, s>1 vanishing") : v.detail) + endo_note;
	return v;
}

// Closed-form H^1 and H^2 supports of the P^1-bundle fixture (every dimension 1).
std::set<std::pair<int, IntVec>> region(int e, int a, int b, int k)
{
	std::set<std::pair<int, IntVec>> s;
	if (k == 1) {
		for (int x = -e + 1; x <= -1; ++x)
			s.insert({1, {x, -1, 0}});
		for (int y = 0; y <= b; ++y)
			for (int x = e * y + a + 1; x <= -1; ++x)
				s.insert({5, {x, y, 1}});
		for (int y = -b + 1; y <= -1; ++y)
			for (int x = 0; x <= e * y - a; ++x)
				s.insert({4, {x, y, -1}});
		if (b == 0)
			for (int x = -a + 1; x <= -1; ++x)
				s.insert({4, {x, 0, -1}});
	} else {
		for (int y = -b + 1; y <= -1; ++y)
			for (int x = e * y - a + 1; x <= -1; ++x)
				s.insert({4, {x, y, -1}});
	}
	return s;
}

Verdict degree_regions()
{
	Verdict v;
	std::mt19937 rng(kSeed + 7);
	std::uniform_int_distribution<int> ed(0, 6), bd(0, 6), ad(-8, 8);
	std::size_t total = 0;
	for (int i = 0; i < 20 && v.pass; ++i) {
		int e = ed(rng), a = ad(rng), b = bd(rng);
		Fan fan = fixture_p1bundle_hirzebruch(e, a, b);
		std::int64_t bound = static_cast<std::int64_t>(e) * b + std::abs(a) + 4;
		std::string tag = "(" + std::to_string(e) + "," + std::to_string(a) + "," + std::to_string(b) + ")";
		for (int k = 1; k <= 2; ++k) {
			auto sup = enumerate_support(fan, k, bound);
			v.require(!sup.shell_warning, tag + ": support touches the bound");
			std::set<std::pair<int, IntVec>> got;
			for (const auto& en : sup.entries) {
				v.require(en.dim == 1, tag + ": dimension " + std::to_string(en.dim) + " at " + str(en.degree));
				got.insert({en.ray, en.degree});
			}
			auto want = region(e, a, b, k);
			v.require(got == want, tag + ": H" + std::to_string(k) + " support has " + std::to_string(got.size()) +
			                           " entries, regions give " + std::to_string(want.size()));
			total += got.size();
		}
	}
	if (v.pass)
		v.detail = "20 samples, " + std::to_string(total) + " support entries";
	return v;
}

Verdict unobstructedness(const std::string& data_dir)
{
	Verdict v;
	std::ifstream f(data_dir + "/unobstructed13.json");
	v.require(bool(f), "cannot open unobstructed13.json");
	if (!v.pass)
		return v;
	std::stringstream buf;
	buf << f.rdbuf();
	Fan fan = cli::parse_fan(buf.str());
	const std::int64_t bound = 10;
	std::set<std::pair<int, IntVec>> h1, h2;
	for (const auto& e : enumerate_support(fan, 1, bound).entries)
		h1.insert({e.ray, e.degree});
	for (const auto& e : enumerate_support(fan, 2, bound).entries)
		h2.insert({e.ray, e.degree});
	std::set<std::pair<int, IntVec>> want1{{3, {1, 0, 0}}, {10, {-1, 0, -1}}, {10, {-1, 0, 0}}, {11, {0, 0, 1}}};
	std::set<std::pair<int, IntVec>> want2{{0, {0, 0, -1}}};
	v.require(h1 == want1, "H1 support differs");
	v.require(h2 == want2, "H2 support differs");
	v.require(unobstructedness_check(fan, bound).certified, "13-ray fan not certified");
	v.require(!unobstructedness_check(fixture_p1bundle_hirzebruch(1, -2, 5), bound).certified,
	          "(1,-2,5) certified");
	if (v.pass)
		v.detail = "13-ray fan certified, (1,-2,5) not";
	return v;
}

// Lowest obstruction degree predicted by the classification, 0 for unobstructed.
int predicted_degree(int e, int a, int b)
{
	if (e == 1)
		return a <= -2 && b >= 3 - a ? 3 : 0;
	if (e >= 2 && a <= -e && e * (b - 1) >= 2 - a)
		return ((a - 1) % e + e) % e == 0 ? 3 : 2;
	return 0;
}

Verdict classification()
{
	Verdict v;
	const std::vector<std::array<int, 3>> samples{
	    {0, -2, 3}, {0, 2, 2},                          // e = 0
	    {1, -2, 5}, {1, -3, 6}, {1, -2, 4}, {1, -1, 5}, // e = 1, inside and outside
	    {2, -3, 4}, {3, -5, 4},                         // e >= 2, a = 1 mod e
	    {2, -2, 3}, {3, -3, 3}, {3, -4, 3},             // e >= 2, otherwise
	    {2, -1, 3}, {2, -2, 2},                         // e >= 2, outside
	};
	std::ostringstream os;
	for (const auto& [e, a, b] : samples) {
		std::string tag = "(" + std::to_string(e) + "," + std::to_string(a) + "," + std::to_string(b) + ")";
		Fan fan = fixture_p1bundle_hirzebruch(e, a, b);
		// terms of degree <= 3 are final once order 3 is solved; only a clean
		// result needs the full hull
		SolverOptions low;
		low.max_order = 3;
		Hull h = solve(fan, low);
		if (!h.lowest_obstruction_degree()) {
			h = solve(fan);
			v.require(h.exact, tag + ": hull not exact at order " + std::to_string(h.order));
		}
		int got = h.lowest_obstruction_degree().value_or(0);
		int want = predicted_degree(e, a, b);
		v.require(got == want, tag + ": lowest degree " + std::to_string(got) + ", expected " + std::to_string(want));
		os << tag << '=' << (got ? std::to_string(got) : "none") << ' ';
	}
	if (v.pass)
		v.detail = os.str();
	return v;
}

Verdict properties_and_subfans()
{
	Verdict v;
	auto check = [&](const char* name, const properties::Outcome& o) {
		v.require(o.ok(), std::string(name) + ": " + (o.cases ? o.first_failure : "no cases"));
	};
	check("BCH group laws", properties::bch_group_laws(kSeed, 200));
	check("BCH exponentials", properties::bch_exponential(kSeed, 20));
	check("bracket laws", properties::bracket_laws(kSeed, 100));
	check("obstruction maps", properties::obstruction_maps(kSeed, 30));
	check("psi", properties::psi_coboundary(kSeed));
	check("closed-form coefficients", properties::closed_form_coefficients(kSeed, 50));
	check("iterated brackets", properties::iterated_brackets(kSeed, 60));
	check("Cech vs simplicial", properties::cech_vs_simplicial(3));
	check("normal forms", properties::normal_forms(kSeed, 50));

	// Subfan and pair-set reductions must reproduce the full solve.
	struct Fixture {
		int e, a, b;
		std::string spec;
	};
	const std::vector<Fixture> fixtures{
	    {1, -2, 5, kSpec125}, {2, -3, 4, kSpec234}, {3, -4, 3, kSpec343}, {3, -3, 3, ee3_spec(3)}};
	for (const auto& fx : fixtures) {
		Fan fan = fixture_p1bundle_hirzebruch(fx.e, fx.a, fx.b);
		SolverOptions full = explicit_thetas(fx.spec, 8);
		full.omega_wall = std::pair{1, 2};
		Hull ref = solve(fan, full);
		SolverOptions sub = full;
		sub.subfan = {0, 1, 2, 3};
		SolverOptions walls = full;
		walls.pairs = PairMode::Codim1;
		SolverOptions cycle = sub;
		cycle.pairs = PairMode::Explicit;
		cycle.explicit_pairs = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
		std::string tag = "(" + std::to_string(fx.e) + "," + std::to_string(fx.a) + "," + std::to_string(fx.b) + ") ";
		for (const auto& [name, o] : {std::pair{"subfan", sub}, {"codim-1 pairs", walls}, {"subfan 4-cycle", cycle}}) {
			Hull h = solve(fan, o);
			v.require(h.obstructions == ref.obstructions && h.order == ref.order,
			          tag + name + " solve differs from the full solve");
		}
	}
	if (v.pass)
		v.detail = "9 property suites, 4 fixtures x 3 reduced solves";
	return v;
}

}  // namespace

int main(int argc, char** argv)
{
	std::set<int> expected_failures;
	std::string data_dir = TORICDEF_TEST_DATA;
	for (int i = 1; i < argc; ++i) {
		std::string arg = argv[i];
		if (arg == "--expect-fail" && i + 1 < argc)
			expected_failures.insert(std::stoi(argv[++i]));
		else if (arg == "--data" && i + 1 < argc)
			data_dir = argv[++i];
		else {
			std::cerr << "usage: toricdef_acceptance [--expect-fail N]... [--data DIR]\n";
			return 2;
		}
	}

	const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
	    {"hull of the (1,-2,5) bundle", hull_125},
	    {"(1,-2,5) trace table", table_125},
	    {"hull of the (3,-4,3) bundle", hull_343},
	    {"hulls of the (e,-e,3) bundles, e = 2..4", hull_ee3},
	    {"hull of the (2,-3,4) bundle", hull_234},
	    {"tangent dimensions of projective bundles", tangent_dimensions},
	    {"degree regions of the P^1-bundle supports", degree_regions},
	    {"unobstructedness certificate", [&] { return unobstructedness(data_dir); }},
	    {"obstruction classification", classification},
	    {"property suites and reduced solves", properties_and_subfans},
	};

	bool ok = true;
	for (std::size_t i = 0; i < criteria.size(); ++i) {
		int id = static_cast<int>(i) + 1;
		auto start = std::chrono::steady_clock::now();
		Verdict v;
		try {
			v = criteria[i].second();
		} catch (const std::exception& e) {
			v.pass = false;
			v.detail = std::string("exception: ") + e.what();
		}
		double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		if (secs > kTimeLimitSeconds) {
			v.pass = false;
			v.detail += " (over the time limit)";
		}
		bool expect_fail = expected_failures.count(id) > 0;
		std::string tag = v.pass ? (expect_fail ? "XPASS" : "PASS") : (expect_fail ? "XFAIL" : "FAIL");
		std::ostringstream t;
		t.precision(2);
		t << std::fixed << secs;
		std::cout << '[' << tag << "] " << id << ' ' << criteria[i].first << " (" << v.detail << ") [" << t.str()
		          << " s]" << std::endl;
		ok = ok && v.pass != expect_fail;
	}
	return ok ? 0 : 1;
}
