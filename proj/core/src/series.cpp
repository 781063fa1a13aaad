#include "toricdef/series.hpp"

#include "toricdef/linalg.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace toricdef {

int total_degree(const Exponent& w)
{
	return std::accumulate(w.begin(), w.end(), 0);
}

Exponent operator+(const Exponent& a, const Exponent& b)
{
	if (a.size() != b.size())
		throw std::invalid_argument("exponent size mismatch");
	Exponent c(a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		c[i] = a[i] + b[i];
	return c;
}

bool divides(const Exponent& a, const Exponent& b)
{
	for (std::size_t i = 0; i < a.size(); ++i)
		if (a[i] > b[i])
			return false;
	return true;
}

Exponent unit_exponent(std::size_t nvars, std::size_t i)
{
	Exponent e(nvars, 0);
	e.at(i) = 1;
	return e;
}

std::strong_ordering grlex_compare(const Exponent& a, const Exponent& b)
{
	if (auto c = total_degree(a) <=> total_degree(b); c != 0)
		return c;
	return a <=> b;
}

bool LeadingFirst::operator()(const Exponent& a, const Exponent& b) const
{
	int da = total_degree(a), db = total_degree(b);
	if (da != db)
		return da < db;
	return b < a;
}

std::string monomial_string(const Exponent& w)
{
	std::ostringstream os;
	bool any = false;
	for (std::size_t i = 0; i < w.size(); ++i) {
		if (!w[i])
			continue;
		if (any)
			os << '*';
		os << 't' << (i + 1);
		if (w[i] > 1)
			os << '^' << w[i];
		any = true;
	}
	return any ? os.str() : "1";
}

Rational TruncPoly::coeff(const Exponent& w) const
{
	auto it = terms_.find(w);
	return it == terms_.end() ? Rational(0) : it->second;
}

int TruncPoly::min_degree() const
{
	return terms_.empty() ? -1 : total_degree(terms_.begin()->first);
}

void TruncPoly::add_term(const Exponent& w, const Rational& c)
{
	if (w.size() != nvars_)
		throw std::invalid_argument("TruncPoly: exponent has wrong length");
	if (c == 0 || total_degree(w) > truncation_)
		return;
	auto [it, fresh] = terms_.try_emplace(w, c);
	if (!fresh) {
		it->second += c;
		if (it->second == 0)
			terms_.erase(it);
	}
}

TruncPoly& TruncPoly::operator+=(const TruncPoly& o)
{
	for (const auto& [w, c] : o.terms_)
		add_term(w, c);
	return *this;
}

TruncPoly& TruncPoly::operator-=(const TruncPoly& o)
{
	for (const auto& [w, c] : o.terms_)
		add_term(w, -c);
	return *this;
}

TruncPoly& TruncPoly::operator*=(const Rational& c)
{
	if (c == 0) {
		terms_.clear();
		return *this;
	}
	for (auto& [w, x] : terms_)
		x *= c;
	return *this;
}

TruncPoly TruncPoly::times_monomial(const Exponent& m, const Rational& c) const
{
	TruncPoly out(nvars_, truncation_);
	for (const auto& [w, x] : terms_)
		out.add_term(w + m, x * c);
	return out;
}

TruncPoly TruncPoly::operator*(const TruncPoly& o) const
{
	TruncPoly out(nvars_, std::min(truncation_, o.truncation_));
	for (const auto& [a, x] : terms_)
		for (const auto& [b, y] : o.terms_)
			out.add_term(a + b, x * y);
	return out;
}

TruncPoly TruncPoly::truncated(int truncation) const
{
	TruncPoly out(nvars_, truncation);
	for (const auto& [w, c] : terms_)
		out.add_term(w, c);
	return out;
}

TruncPoly operator+(TruncPoly a, const TruncPoly& b)
{
	a += b;
	return a;
}

TruncPoly operator-(TruncPoly a, const TruncPoly& b)
{
	a -= b;
	return a;
}

std::vector<Exponent> monomials_in_degrees(std::size_t nvars, int lo, int hi)
{
	std::vector<Exponent> out;
	Exponent w(nvars, 0);
	// enumerate by degree, lex descending inside a degree, then sort grlex ascending
	std::vector<Exponent> all;
	auto rec = [&](auto&& self, std::size_t i, int left) -> void {
		if (i + 1 == nvars) {
			w[i] = left;
			all.push_back(w);
			return;
		}
		for (int k = left; k >= 0; --k) {
			w[i] = k;
			self(self, i + 1, left - k);
		}
	};
	if (nvars == 0) {
		if (lo <= 0 && hi >= 0)
			out.push_back({});
		return out;
	}
	for (int d = std::max(lo, 0); d <= hi; ++d) {
		all.clear();
		rec(rec, 0, d);
		for (auto it = all.rbegin(); it != all.rend(); ++it)
			out.push_back(*it);
	}
	return out;
}

IdealState::IdealState(std::size_t nvars, std::vector<TruncPoly> generators, int order)
    : nvars_(nvars), order_(order), gens_(std::move(generators))
{
	for (auto& g : gens_) {
		if (g.nvars() != nvars_)
			throw std::invalid_argument("IdealState: generator in wrong number of variables");
		g = g.truncated(order_);
	}
	j_ = build(nvars_, gens_, 0, order_);
	mj_ = build(nvars_, gens_, 1, order_ + 1);
}

void IdealState::reduce(TruncPoly::Terms& f, const Echelon& e)
{
	for (auto it = f.begin(); it != f.end();) {
		if (total_degree(it->first) > e.truncation) {
			it = f.erase(it);
			continue;
		}
		auto p = e.rows.find(it->first);
		if (p == e.rows.end()) {
			++it;
			continue;
		}
		Exponent w = it->first;
		Rational c = it->second;
		for (const auto& [m, v] : p->second) {
			auto [slot, fresh] = f.try_emplace(m, -c * v);
			if (!fresh) {
				slot->second -= c * v;
				if (slot->second == 0 && m != w)
					f.erase(slot);
			}
		}
		f.erase(w);
		it = f.upper_bound(w);
	}
}

IdealState::Echelon IdealState::build(std::size_t nvars, const std::vector<TruncPoly>& gens, int min_mult,
                                      int truncation)
{
	Echelon e;
	e.truncation = truncation;
	for (const auto& g : gens) {
		if (g.is_zero())
			continue;
		int dg = g.min_degree();
		for (const auto& m : monomials_in_degrees(nvars, min_mult, truncation - dg)) {
			TruncPoly::Terms row;
			for (const auto& [w, c] : g.terms())
				if (total_degree(w) + total_degree(m) <= truncation)
					row.emplace(w + m, c);
			reduce(row, e);
			if (row.empty())
				continue;
			Rational lead = row.begin()->second;
			for (auto& [w, c] : row)
				c /= lead;
			Exponent key = row.begin()->first;
			e.rows.emplace(std::move(key), std::move(row));
		}
	}
	return e;
}

TruncPoly IdealState::normal_form(const TruncPoly& f, Modulus mod) const
{
	const Echelon& e = echelon(mod);
	TruncPoly::Terms t = f.terms();
	reduce(t, e);
	TruncPoly out(f.nvars(), std::min(f.truncation(), e.truncation));
	for (const auto& [w, c] : t)
		out.add_term(w, c);
	return out;
}

bool IdealState::is_standard(const Exponent& w, Modulus mod) const
{
	const Echelon& e = echelon(mod);
	return total_degree(w) <= e.truncation && !e.rows.count(w);
}

std::vector<Exponent> IdealState::leading_monomials(Modulus mod) const
{
	std::vector<Exponent> out;
	for (const auto& [w, row] : echelon(mod).rows)
		out.push_back(w);
	return out;
}

IdealState IdealState::update(const std::vector<TruncPoly>& gamma, int new_order) const
{
	if (gamma.size() != gens_.size())
		throw std::invalid_argument("update_ideal: wrong number of contributions");
	if (new_order < order_)
		throw std::invalid_argument("update_ideal: order cannot decrease");
	std::vector<TruncPoly> next;
	for (std::size_t l = 0; l < gens_.size(); ++l) {
		for (const auto& [w, c] : gamma[l].terms()) {
			if (total_degree(w) != new_order)
				throw std::invalid_argument("update_ideal: contribution " + monomial_string(w) +
				                            " has degree other than the new order");
			if (!is_standard(w, Modulus::MJ))
				throw std::invalid_argument("update_ideal: contribution " + monomial_string(w) +
				                            " is not a standard monomial");
		}
		TruncPoly g = gens_[l].truncated(new_order);
		g += gamma[l].truncated(new_order);
		next.push_back(std::move(g));
	}
	return IdealState(nvars_, std::move(next), new_order);
}

std::optional<IntVec> positivity_functional(const std::vector<IntVec>& degrees)
{
	if (degrees.empty())
		return std::nullopt;
	std::size_t n = degrees[0].size();
	QMatrix g = QMatrix::from_int_rows(degrees, n);
	std::vector<Rational> h(degrees.size(), Rational(1));
	auto x = find_feasible(QMatrix(0, n), {}, g, h);
	if (!x)
		return std::nullopt;
	Integer den = 1;
	for (const auto& q : *x)
		den = lcm(den, Integer(q.get_den()));
	IntVec l(n);
	for (std::size_t i = 0; i < n; ++i) {
		Rational s = (*x)[i] * den;
		l[i] = s.get_num().get_si();
	}
	Integer gg = 0;
	for (auto v : l)
		gg = gcd(gg, Integer(static_cast<long>(v)));
	if (gg > 1)
		for (auto& v : l)
			v /= gg.get_si();
	for (const auto& u : degrees)
		if (dot(l, u) <= 0)
			throw std::logic_error("positivity_functional: certificate check failed");
	return l;
}

std::vector<Exponent> fiber_monomials(const std::vector<IntVec>& degrees, const IntVec& v, const IntVec& cert)
{
	std::vector<std::int64_t> cost;
	for (const auto& u : degrees) {
		std::int64_t c = dot(cert, u);
		if (c <= 0)
			throw std::invalid_argument("fiber_monomials: certificate is not positive on every degree");
		cost.push_back(c);
	}
	std::int64_t budget = dot(cert, v);
	std::vector<Exponent> out;
	if (budget <= 0 || degrees.empty())
		return out;
	std::size_t p = degrees.size();
	Exponent w(p, 0);
	IntVec acc(v.size(), 0);
	auto rec = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
		if (i == p) {
			if (left == 0 && acc == v)
				out.push_back(w);
			return;
		}
		for (std::int64_t k = 0; k * cost[i] <= left; ++k) {
			w[i] = static_cast<int>(k);
			self(self, i + 1, left - k * cost[i]);
			for (std::size_t d = 0; d < acc.size(); ++d)
				acc[d] += degrees[i][d];
		}
		std::int64_t used = 0;
		while (used * cost[i] <= left)
			++used;
		for (std::size_t d = 0; d < acc.size(); ++d)
			acc[d] -= used * degrees[i][d];
		w[i] = 0;
	};
	rec(rec, 0, budget);
	std::sort(out.begin(), out.end(), [](const Exponent& a, const Exponent& b) { return grlex_compare(a, b) < 0; });
	return out;
}

}  // namespace toricdef
