#include "toricdef/lie.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace toricdef {

Rational LieElement::coeff(int ray, const Exponent& w) const
{
	auto it = terms_.find(LieKey{ray, w});
	return it == terms_.end() ? Rational(0) : it->second;
}

int LieElement::min_degree() const
{
	if (terms_.empty())
		return -1;
	int m = total_degree(terms_.begin()->first.w);
	for (const auto& [k, c] : terms_)
		m = std::min(m, total_degree(k.w));
	return m;
}

void LieElement::add_term(int ray, const Exponent& w, const Rational& c)
{
	if (c == 0)
		return;
	auto [it, fresh] = terms_.try_emplace(LieKey{ray, w}, c);
	if (!fresh) {
		it->second += c;
		if (it->second == 0)
			terms_.erase(it);
	}
}

LieElement& LieElement::operator+=(const LieElement& o)
{
	for (const auto& [k, c] : o.terms_)
		add_term(k, c);
	return *this;
}

LieElement& LieElement::operator-=(const LieElement& o)
{
	for (const auto& [k, c] : o.terms_)
		add_term(k, -c);
	return *this;
}

LieElement& LieElement::operator*=(const Rational& c)
{
	if (c == 0)
		terms_.clear();
	for (auto& [k, x] : terms_)
		x *= c;
	return *this;
}

LieElement LieElement::operator-() const
{
	LieElement out = *this;
	for (auto& [k, x] : out.terms_)
		x = -x;
	return out;
}

LieElement LieElement::truncated(int truncation) const
{
	LieElement out;
	for (const auto& [k, c] : terms_)
		if (total_degree(k.w) <= truncation)
			out.terms_.emplace(k, c);
	return out;
}

LieElement operator+(LieElement a, const LieElement& b)
{
	a += b;
	return a;
}

LieElement operator-(LieElement a, const LieElement& b)
{
	a -= b;
	return a;
}

LieElement operator*(const Rational& c, LieElement a)
{
	a *= c;
	return a;
}

LieContext::LieContext(const Fan& fan, std::vector<IntVec> parameter_degrees, int truncation)
    : fan_(&fan), degrees_(std::move(parameter_degrees)), truncation_(truncation)
{
	for (const auto& u : degrees_)
		if (u.size() != static_cast<std::size_t>(fan.rank))
			throw std::invalid_argument("LieContext: parameter degree has wrong dimension");
	pairings_.resize(fan.num_rays());
	for (std::size_t r = 0; r < fan.num_rays(); ++r)
		for (const auto& u : degrees_)
			pairings_[r].push_back(dot(fan.rays[r], u));
	for (const auto& c : fan.max_cones)
		cone_masks_.push_back(mask_of(c));
}

LieContext LieContext::with_truncation(int truncation) const
{
	LieContext c = *this;
	c.truncation_ = truncation;
	return c;
}

IntVec LieContext::degree(const Exponent& w) const
{
	IntVec u(fan_->rank, 0);
	for (std::size_t l = 0; l < w.size(); ++l)
		for (int i = 0; i < fan_->rank; ++i)
			u[i] += w[l] * degrees_[l][i];
	return u;
}

std::int64_t LieContext::pairing(int ray, const Exponent& w) const
{
	const auto& row = pairings_.at(ray);
	std::int64_t s = 0;
	for (std::size_t l = 0; l < w.size(); ++l)
		s += w[l] * row[l];
	return s;
}

RaySet LieContext::common_rays(const ConeTuple& t) const
{
	RaySet s = ~RaySet{0};
	for (int c : t)
		s &= cone_masks_.at(c);
	return s;
}

RaySet LieContext::piece_rays(int ray, const Exponent& w) const
{
	RaySet s = 0;
	for (std::size_t r = 0; r < pairings_.size(); ++r) {
		std::int64_t p = pairing(static_cast<int>(r), w);
		if (p < (static_cast<int>(r) == ray ? -1 : 0))
			s |= ray_bit(static_cast<int>(r));
	}
	return s;
}

LieElement LieContext::bracket(const LieElement& x, const LieElement& y) const
{
	LieElement out;
	for (const auto& [kx, cx] : x.terms()) {
		int dx = total_degree(kx.w);
		for (const auto& [ky, cy] : y.terms()) {
			if (dx + total_degree(ky.w) > truncation_)
				continue;
			Exponent w = kx.w + ky.w;
			Rational c = cx * cy;
			// [chi^u f_a, chi^u' f_b] = a(u') chi^{u+u'} f_b - b(u) chi^{u+u'} f_a
			if (auto p = pairing(kx.ray, ky.w))
				out.add_term(ky.ray, w, c * Rational(p));
			if (auto p = pairing(ky.ray, kx.w))
				out.add_term(kx.ray, w, -c * Rational(p));
		}
	}
	return out;
}

Rational dynkin_coefficient(std::string_view word)
{
	const std::size_t d = word.size();
	if (d == 0)
		return 0;
	// Ways to cut the word into blocks x^r y^s, weighted by 1/(r! s!), per block count.
	std::vector<std::vector<Rational>> ways(d + 1, std::vector<Rational>(d + 1));
	ways[0][0] = 1;
	auto fact = [](unsigned n) {
		Integer f;
		mpz_fac_ui(f.get_mpz_t(), n);
		return f;
	};
	for (std::size_t p = 0; p < d; ++p) {
		unsigned r = 0, s = 0;
		for (std::size_t q = p; q < d; ++q) {
			if (word[q] == 'x') {
				if (s)
					break;
				++r;
			} else {
				++s;
			}
			Rational wgt(Integer(1), fact(r) * fact(s));
			for (std::size_t n = 0; n < d; ++n)
				if (ways[p][n] != 0)
					ways[q + 1][n + 1] += ways[p][n] * wgt;
		}
	}
	Rational b = 0;
	for (std::size_t n = 1; n <= d; ++n) {
		if (ways[d][n] == 0)
			continue;
		Rational term = ways[d][n] / Rational(Integer(static_cast<unsigned long>(n * d)));
		b += (n % 2 ? term : -term);
	}
	return b;
}

LieElement LieContext::bch(const LieElement& x, const LieElement& y) const
{
	if (x.min_degree() == 0 || y.min_degree() == 0)
		throw std::invalid_argument("bch: arguments must lie in m");
	LieElement xt = x.truncated(truncation_), yt = y.truncated(truncation_);
	if (xt.is_zero())
		return yt;
	if (yt.is_zero())
		return xt;
	LieElement out;
	std::string suffix;
	// Walk right-nested brackets by prepending letters; a zero bracket kills all extensions.
	auto visit = [&](auto&& self, const LieElement& value) -> void {
		Rational b = dynkin_coefficient(suffix);
		if (b != 0)
			out += b * value;
		if (static_cast<int>(suffix.size()) >= truncation_)
			return;
		for (char letter : {'x', 'y'}) {
			if (suffix.size() == 1 && suffix[0] == letter)
				continue;
			LieElement next = bracket(letter == 'x' ? xt : yt, value);
			if (next.is_zero())
				continue;
			suffix.insert(suffix.begin(), letter);
			self(self, next);
			suffix.erase(suffix.begin());
		}
	};
	suffix = "x";
	visit(visit, xt);
	suffix = "y";
	visit(visit, yt);
	return out;
}

LieElement LieContext::bch(const LieElement& x, const LieElement& y, const LieElement& z) const
{
	return bch(bch(x, y), z);
}

namespace {

const LieElement kZero;

}  // namespace

const LieElement& LieCochain::at(const ConeTuple& t) const
{
	auto it = entries.find(t);
	return it == entries.end() ? kZero : it->second;
}

void LieCochain::set(const ConeTuple& t, LieElement v)
{
	if (v.is_zero())
		entries.erase(t);
	else
		entries[t] = std::move(v);
}

LieElement pair_value(const LieCochain& x, int i, int j)
{
	if (x.level != 1)
		throw std::invalid_argument("pair_value: level-1 cochain expected");
	if (i < j)
		return x.at({i, j});
	if (i > j)
		return -x.at({j, i});
	return {};
}

LieCochain o0(const LieContext& ctx, const LieCochain& a, const std::vector<ConeTuple>& pairs)
{
	if (a.level != 0)
		throw std::invalid_argument("o0: level-0 cochain expected");
	LieCochain out{1, {}};
	for (const auto& t : pairs) {
		if (t.size() != 2 || t[0] >= t[1])
			throw std::invalid_argument("o0: pairs must be sorted and distinct");
		out.set(t, ctx.bch(-a.at({t[0]}), a.at({t[1]})));
	}
	return out;
}

LieCochain o0(const LieContext& ctx, const LieCochain& a)
{
	std::vector<ConeTuple> pairs;
	int n = static_cast<int>(ctx.fan().num_cones());
	for (int i = 0; i < n; ++i)
		for (int j = i + 1; j < n; ++j)
			pairs.push_back({i, j});
	return o0(ctx, a, pairs);
}

LieCochain o1(const LieContext& ctx, const LieCochain& x)
{
	if (x.level != 1)
		throw std::invalid_argument("o1: level-1 cochain expected");
	LieCochain out{2, {}};
	int n = static_cast<int>(ctx.fan().num_cones());
	for (int i = 0; i < n; ++i)
		for (int j = i + 1; j < n; ++j)
			for (int k = j + 1; k < n; ++k)
				out.set({i, j, k}, ctx.bch(x.at({j, k}), -x.at({i, k}), x.at({i, j})));
	return out;
}

LieCochain odot(const LieContext& ctx, const LieCochain& a, const LieCochain& x)
{
	if (a.level != 0 || x.level != 1)
		throw std::invalid_argument("odot: expects a level-0 and a level-1 cochain");
	LieCochain out{1, {}};
	int n = static_cast<int>(ctx.fan().num_cones());
	for (int i = 0; i < n; ++i)
		for (int j = i + 1; j < n; ++j)
			out.set({i, j}, ctx.bch(a.at({i}), x.at({i, j}), -a.at({j})));
	return out;
}

LieCochain lambda(const LieContext& ctx, const LieCochain& c)
{
	LieCochain out{c.level, {}};
	for (const auto& [t, v] : c.entries) {
		RaySet common = ctx.common_rays(t);
		LieElement kept;
		for (const auto& [k, x] : v.terms())
			if (ctx.piece_rays(k.ray, k.w) & common)
				kept.add_term(k, x);
		out.set(t, std::move(kept));
	}
	return out;
}

LieCochain section_s(const LieCochain& q)
{
	return q;
}

LieCochain iota_pre(const LieContext& ctx, const LieCochain& c)
{
	if (!lambda(ctx, c).entries.empty())
		throw std::invalid_argument("iota_pre: cochain is not in the kernel of lambda");
	return c;
}

LieCochain o_sigma(const LieContext& ctx, const LieCochain& a)
{
	return lambda(ctx, o0(ctx, section_s(a)));
}

std::vector<std::vector<int>> delta_set(int d, int k)
{
	if (k < 1 || k > d)
		throw std::invalid_argument("delta_set: need 1 <= k <= d");
	std::vector<std::vector<int>> out;
	std::vector<int> a(d + 1, 0);  // 1-based
	a[k] = k;
	auto lower = [&](auto&& self, int i) -> void {
		if (i == 0) {
			out.emplace_back(a.begin() + 1, a.end());
			return;
		}
		int val = k;
		for (int j = i + 1; j < k; ++j)
			if (j < a[j])
				val -= a[j] - j;
		std::set<int> choices;
		for (int x = 1; x < i; ++x)
			choices.insert(x);
		if (val >= 1)
			choices.insert(val);
		for (int x : choices) {
			a[i] = x;
			self(self, i - 1);
		}
	};
	auto upper = [&](auto&& self, int i) -> void {
		if (i > d) {
			lower(lower, k - 1);
			return;
		}
		for (int x = 1; x < i; ++x) {
			a[i] = x;
			self(self, i + 1);
		}
	};
	upper(upper, k + 1);
	std::sort(out.begin(), out.end());
	return out;
}

int delta_sign(const std::vector<int>& a)
{
	int n = 0;
	for (std::size_t i = 0; i < a.size(); ++i)
		if (a[i] > static_cast<int>(i) + 1)
			++n;
	return n % 2 ? -1 : 1;
}

std::vector<std::vector<Exponent>> nabla_set(const Exponent& w, int d)
{
	std::vector<std::vector<Exponent>> out;
	if (d < 1 || total_degree(w) < d)
		return out;
	std::vector<Exponent> parts;
	auto rec = [&](auto&& self, const Exponent& rest, int left) -> void {
		if (left == 1) {
			parts.push_back(rest);
			out.push_back(parts);
			parts.pop_back();
			return;
		}
		// every nonzero v <= rest leaving enough degree for the remaining parts
		Exponent v(rest.size(), 0);
		auto pick = [&](auto&& pself, std::size_t i) -> void {
			if (i == rest.size()) {
				int dv = total_degree(v);
				if (dv == 0 || total_degree(rest) - dv < left - 1)
					return;
				Exponent r2 = rest;
				for (std::size_t c = 0; c < r2.size(); ++c)
					r2[c] -= v[c];
				parts.push_back(v);
				self(self, r2, left - 1);
				parts.pop_back();
				return;
			}
			for (int x = 0; x <= rest[i]; ++x) {
				v[i] = x;
				pself(pself, i + 1);
			}
			v[i] = 0;
		};
		pick(pick, 0);
	};
	rec(rec, w, d);
	std::sort(out.begin(), out.end());
	return out;
}

std::map<int, Rational> iterated_bracket(const Fan& fan, const std::vector<std::pair<int, IntVec>>& terms)
{
	const int m = static_cast<int>(terms.size());
	std::map<int, Rational> out;
	for (int k = 1; k <= m; ++k) {
		Rational sum = 0;
		for (const auto& a : delta_set(m, k)) {
			Integer prod = delta_sign(a);
			for (int i = 1; i <= m && prod != 0; ++i)
				if (i != k)
					prod *= static_cast<long>(toricdef::pairing(fan, terms[i - 1].first, terms[a[i - 1] - 1].second));
			sum += prod;
		}
		if (sum != 0)
			out[terms[k - 1].first] += sum;
	}
	for (auto it = out.begin(); it != out.end();)
		it = it->second == 0 ? out.erase(it) : std::next(it);
	return out;
}

std::map<int, Rational> obstruction_coefficient(const LieContext& ctx, const Exponent& w, const LieCochain& a,
                                                int i, int j)
{
	const LieElement& ai = a.at({i});
	const LieElement& aj = a.at({j});
	std::map<int, Rational> out;
	const int deg = total_degree(w);
	for (int d = 1; d <= deg; ++d) {
		// signed Dynkin weight per word, indexed by bitmask (bit p set = letter x at position p)
		std::vector<Rational> weight(std::size_t{1} << d);
		for (std::size_t mask = 0; mask < weight.size(); ++mask) {
			std::string word(d, 'y');
			int nx = 0;
			for (int p = 0; p < d; ++p)
				if (mask >> p & 1) {
					word[p] = 'x';
					++nx;
				}
			Rational b = dynkin_coefficient(word);
			weight[mask] = nx % 2 ? -b : b;
		}
		for (const auto& parts : nabla_set(w, d)) {
			// candidate rays per part: those with a nonzero coefficient on cone i or j
			std::vector<std::vector<int>> cands(d);
			bool dead = false;
			for (int k = 0; k < d; ++k) {
				std::set<int> rs;
				for (const auto* e : {&ai, &aj})
					for (const auto& [key, c] : e->terms())
						if (key.w == parts[k])
							rs.insert(key.ray);
				cands[k].assign(rs.begin(), rs.end());
				dead = dead || rs.empty();
			}
			if (dead)
				continue;
			std::vector<int> rays(d);
			auto rec = [&](auto&& self, int k) -> void {
				if (k == d) {
					Rational s = 0;
					for (std::size_t mask = 0; mask < weight.size(); ++mask) {
						if (weight[mask] == 0)
							continue;
						Rational prod = weight[mask];
						// part k (1-based) sits at word position d-k+1
						for (int kk = 0; kk < d && prod != 0; ++kk) {
							int pos = d - 1 - kk;
							const LieElement& e = (mask >> pos & 1) ? ai : aj;
							prod *= e.coeff(rays[kk], parts[kk]);
						}
						s += prod;
					}
					if (s == 0)
						return;
					std::vector<std::pair<int, IntVec>> terms;
					for (int kk = 0; kk < d; ++kk)
						terms.emplace_back(rays[kk], ctx.degree(parts[kk]));
					for (const auto& [r, c] : iterated_bracket(ctx.fan(), terms))
						out[r] += s * c;
					return;
				}
				for (int r : cands[k]) {
					rays[k] = r;
					self(self, k + 1);
				}
			};
			rec(rec, 0);
		}
	}
	for (auto it = out.begin(); it != out.end();)
		it = it->second == 0 ? out.erase(it) : std::next(it);
	return out;
}

std::string term_string(const LieContext& ctx, const LieKey& k)
{
	std::ostringstream os;
	os << monomial_string(k.w) << " * chi^" << to_string(ctx.degree(k.w)) << " * f_" << k.ray;
	return os.str();
}

std::string dump(const LieContext& ctx, const LieCochain& c)
{
	std::ostringstream os;
	for (const auto& [t, v] : c.entries) {
		os << '[';
		for (std::size_t i = 0; i < t.size(); ++i)
			os << (i ? "," : "") << t[i];
		os << "]\n";
		for (const auto& [k, x] : v.terms())
			os << "  " << term_string(ctx, k) << " : " << to_string(x) << '\n';
	}
	return os.str();
}

}  // namespace toricdef
