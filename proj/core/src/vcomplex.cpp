#include "toricdef/vcomplex.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <unordered_map>

namespace toricdef {

RaySet negative_rays(const Fan& fan, std::optional<int> ray, const IntVec& u)
{
	RaySet s = 0;
	for (std::size_t r = 0; r < fan.rays.size(); ++r) {
		std::int64_t v = dot(fan.rays[r], u);
		bool distinguished = ray && static_cast<std::size_t>(*ray) == r;
		if (distinguished ? v < -1 : v < 0)
			s |= ray_bit(static_cast<int>(r));
	}
	return s;
}

bool section_membership(const Fan& fan, const Cone& cone, int ray, const IntVec& u)
{
	for (int r : cone) {
		std::int64_t v = pairing(fan, r, u);
		if (r == ray ? v < -1 : v < 0)
			return false;
	}
	return true;
}

bool VComplex::empty() const
{
	return std::all_of(pieces.begin(), pieces.end(), [](RaySet s) { return s == 0; });
}

std::vector<ConeTuple> VComplex::tuples(int level) const
{
	std::vector<ConeTuple> out;
	for (const auto& [t, s] : nerve)
		if (static_cast<int>(t.size()) == level + 1)
			out.push_back(t);
	return out;
}

RaySet VComplex::piece(const ConeTuple& t) const
{
	auto it = nerve.find(t);
	return it == nerve.end() ? 0 : it->second;
}

VComplex build_vcomplex(const Fan& fan, std::optional<int> ray, const IntVec& u)
{
	if (u.size() != static_cast<std::size_t>(fan.rank))
		throw std::invalid_argument("build_vcomplex: degree has wrong dimension");
	VComplex v;
	v.ray = ray;
	v.degree = u;
	RaySet neg = negative_rays(fan, ray, u);
	std::size_t m = fan.max_cones.size();
	v.pieces.resize(m);
	for (std::size_t i = 0; i < m; ++i)
		v.pieces[i] = neg & mask_of(fan.max_cones[i]);
	for (std::size_t i = 0; i < m; ++i) {
		if (!v.pieces[i])
			continue;
		int a = static_cast<int>(i);
		v.nerve[{a}] = v.pieces[i];
		for (std::size_t j = i + 1; j < m; ++j) {
			RaySet ij = v.pieces[i] & v.pieces[j];
			if (!ij)
				continue;
			int b = static_cast<int>(j);
			v.nerve[{a, b}] = ij;
			for (std::size_t k = j + 1; k < m; ++k) {
				RaySet ijk = ij & v.pieces[k];
				if (ijk)
					v.nerve[{a, b, static_cast<int>(k)}] = ijk;
			}
		}
	}
	return v;
}

namespace {

std::vector<RaySet> components_of_pieces(const std::vector<RaySet>& pieces)
{
	std::vector<RaySet> comps;
	for (RaySet p : pieces) {
		if (!p)
			continue;
		RaySet merged = p;
		std::vector<RaySet> keep;
		for (RaySet c : comps) {
			if (c & merged)
				merged |= c;
			else
				keep.push_back(c);
		}
		keep.push_back(merged);
		comps = std::move(keep);
	}
	return comps;
}

}  // namespace

std::vector<Component> components(const VComplex& v)
{
	std::vector<Component> out;
	for (RaySet c : components_of_pieces(v.pieces)) {
		Component comp;
		comp.rays = c;
		for (std::size_t i = 0; i < v.pieces.size(); ++i)
			if (v.pieces[i] & c)
				comp.cones.push_back(static_cast<int>(i));
		comp.min_cone = comp.cones.front();
		out.push_back(std::move(comp));
	}
	std::sort(out.begin(), out.end(), [](const Component& a, const Component& b) { return a.min_cone < b.min_cone; });
	return out;
}

QMatrix cech_differential(const VComplex& v, int level)
{
	auto src = v.tuples(level);
	auto dst = v.tuples(level + 1);
	std::map<ConeTuple, std::size_t> col;
	for (std::size_t i = 0; i < src.size(); ++i)
		col[src[i]] = i;
	QMatrix d(dst.size(), src.size());
	for (std::size_t r = 0; r < dst.size(); ++r) {
		const auto& t = dst[r];
		for (std::size_t drop = 0; drop < t.size(); ++drop) {
			ConeTuple face;
			for (std::size_t i = 0; i < t.size(); ++i)
				if (i != drop)
					face.push_back(t[i]);
			d(r, col.at(face)) += (drop % 2 == 0) ? 1 : -1;
		}
	}
	return d;
}

namespace {

CechVector to_cech(const std::vector<ConeTuple>& tuples, const std::vector<Rational>& x, int level)
{
	CechVector c;
	c.level = level;
	for (std::size_t i = 0; i < tuples.size(); ++i)
		if (x[i] != 0)
			c.entries[tuples[i]] = x[i];
	return c;
}

}  // namespace

CohomologyResult cech_cohomology(const VComplex& v, int k)
{
	CohomologyResult res;
	if (k == 0) {
		auto comps = components(v);
		if (comps.size() <= 1)
			return res;
		res.dim = static_cast<int>(comps.size()) - 1;
		for (std::size_t i = 1; i < comps.size(); ++i) {
			CechVector c;
			c.level = 0;
			for (int cone : comps[i].cones)
				c.entries[{cone}] = 1;
			res.basis.push_back(std::move(c));
		}
		return res;
	}
	if (k != 1)
		throw std::invalid_argument("cech_cohomology: only levels 0 and 1 are supported");
	auto c1 = v.tuples(1);
	if (c1.empty())
		return res;
	QMatrix d0 = cech_differential(v, 0);
	QMatrix d1 = cech_differential(v, 1);
	auto z1 = d1.rows() ? nullspace(d1) : std::vector<std::vector<Rational>>{};
	if (!d1.rows())
		for (std::size_t i = 0; i < c1.size(); ++i) {
			std::vector<Rational> e(c1.size());
			e[i] = 1;
			z1.push_back(std::move(e));
		}
	// extend a basis of the coboundaries by cocycles
	std::vector<std::vector<Rational>> span;
	for (std::size_t c = 0; c < d0.cols(); ++c) {
		std::vector<Rational> col(d0.rows());
		for (std::size_t r = 0; r < d0.rows(); ++r)
			col[r] = d0(r, c);
		span.push_back(std::move(col));
	}
	auto rank_of = [&](const std::vector<std::vector<Rational>>& vecs) {
		if (vecs.empty())
			return std::size_t{0};
		QMatrix m(vecs.size(), c1.size());
		for (std::size_t i = 0; i < vecs.size(); ++i)
			for (std::size_t j = 0; j < c1.size(); ++j)
				m(i, j) = vecs[i][j];
		return rank(m);
	};
	std::size_t current = rank_of(span);
	for (const auto& z : z1) {
		span.push_back(z);
		std::size_t r = rank_of(span);
		if (r > current) {
			current = r;
			res.basis.push_back(to_cech(c1, z, 1));
		} else {
			span.pop_back();
		}
	}
	res.dim = static_cast<int>(res.basis.size());
	return res;
}

int reduced_cohomology_dim(const VComplex& v, int k)
{
	if (k == 0) {
		auto comps = components_of_pieces(v.pieces);
		return comps.empty() ? 0 : static_cast<int>(comps.size()) - 1;
	}
	// a cover by at most two distinct simplices has no H^1; neither does one
	// whose piece contains every other
	std::vector<RaySet> distinct;
	RaySet all = 0;
	for (RaySet p : v.pieces)
		if (p) {
			all |= p;
			if (std::find(distinct.begin(), distinct.end(), p) == distinct.end())
				distinct.push_back(p);
		}
	if (distinct.size() <= 2 || ray_count(all) <= 2)
		return 0;
	for (RaySet p : distinct)
		if (p == all)
			return 0;
	auto c1 = v.tuples(1);
	if (c1.empty())
		return 0;
	QMatrix d0 = cech_differential(v, 0);
	QMatrix d1 = cech_differential(v, 1);
	std::size_t r1 = d1.rows() ? rank(d1) : 0;
	return static_cast<int>(c1.size() - r1 - rank(d0));
}

std::int64_t default_bound(const Fan& fan)
{
	std::int64_t m = 0;
	for (const auto& r : fan.rays)
		for (auto x : r)
			m = std::max<std::int64_t>(m, std::llabs(x));
	return 2 * (1 + m);
}

namespace {

bool on_shell(const IntVec& u, std::int64_t bound)
{
	std::int64_t m = 0;
	for (auto x : u)
		m = std::max<std::int64_t>(m, std::llabs(x));
	return m >= bound - 1;
}

// Visit every u in the box with ray(u) = -1.
template <typename F>
void for_each_degree_on_hyperplane(const Fan& fan, int ray, std::int64_t bound, F&& visit)
{
	const IntVec& n = fan.rays[static_cast<std::size_t>(ray)];
	std::size_t dim = n.size();
	std::size_t solve_at = dim;
	for (std::size_t d = 0; d < dim; ++d)
		if (n[d] != 0 && (solve_at == dim || std::llabs(n[d]) < std::llabs(n[solve_at])))
			solve_at = d;
	IntVec u(dim, -bound);
	u[solve_at] = 0;
	while (true) {
		std::int64_t partial = 0;
		for (std::size_t d = 0; d < dim; ++d)
			if (d != solve_at)
				partial += n[d] * u[d];
		std::int64_t rhs = -1 - partial;
		if (rhs % n[solve_at] == 0) {
			std::int64_t x = rhs / n[solve_at];
			if (std::llabs(x) <= bound) {
				u[solve_at] = x;
				visit(u);
				u[solve_at] = 0;
			}
		}
		std::size_t d = 0;
		for (; d < dim; ++d) {
			if (d == solve_at)
				continue;
			if (u[d] < bound) {
				++u[d];
				break;
			}
			u[d] = -bound;
		}
		if (d == dim)
			break;
	}
}

}  // namespace

SupportResult enumerate_support(const Fan& fan, int k, std::int64_t bound, int jobs)
{
	if (k != 1 && k != 2)
		throw std::invalid_argument("enumerate_support: k must be 1 or 2");
	if (bound <= 0)
		bound = default_bound(fan);
	std::vector<RaySet> cone_masks;
	for (const auto& c : fan.max_cones)
		cone_masks.push_back(mask_of(c));

	auto scan_ray = [&](int ray) {
		std::vector<SupportEntry> found;
		bool shell = false;
		std::vector<RaySet> pieces(cone_masks.size());
		// the complex only depends on which rays pair negatively
		std::unordered_map<RaySet, int> seen;
		for_each_degree_on_hyperplane(fan, ray, bound, [&](const IntVec& u) {
			RaySet neg = negative_rays(fan, ray, u);
			if (!neg)
				return;
			auto [it, fresh] = seen.try_emplace(neg, 0);
			if (fresh) {
				if (k == 1) {
					for (std::size_t i = 0; i < cone_masks.size(); ++i)
						pieces[i] = neg & cone_masks[i];
					auto comps = components_of_pieces(pieces);
					it->second = comps.empty() ? 0 : static_cast<int>(comps.size()) - 1;
				} else {
					it->second = reduced_cohomology_dim(build_vcomplex(fan, ray, u), 1);
				}
			}
			int dim = it->second;
			if (dim > 0) {
				found.push_back({ray, u, dim});
				if (on_shell(u, bound))
					shell = true;
			}
		});
		return std::make_pair(found, shell);
	};

	SupportResult res;
	res.bound = bound;
	int nr = static_cast<int>(fan.rays.size());
	if (jobs <= 1) {
		for (int r = 0; r < nr; ++r) {
			auto [f, s] = scan_ray(r);
			res.entries.insert(res.entries.end(), f.begin(), f.end());
			res.shell_warning = res.shell_warning || s;
		}
	} else {
		std::vector<std::future<std::pair<std::vector<SupportEntry>, bool>>> futs;
		for (int r = 0; r < nr; ++r)
			futs.push_back(std::async(std::launch::async, scan_ray, r));
		for (auto& f : futs) {
			auto [e, s] = f.get();
			res.entries.insert(res.entries.end(), e.begin(), e.end());
			res.shell_warning = res.shell_warning || s;
		}
	}
	std::sort(res.entries.begin(), res.entries.end(), [](const SupportEntry& a, const SupportEntry& b) {
		return a.ray != b.ray ? a.ray < b.ray : a.degree < b.degree;
	});
	return res;
}

VanishingResult structure_sheaf_vanishing(const Fan& fan, int k, std::int64_t bound)
{
	if (k != 1 && k != 2)
		throw std::invalid_argument("structure_sheaf_vanishing: k must be 1 or 2");
	if (bound <= 0)
		bound = default_bound(fan);
	VanishingResult res;
	std::size_t dim = static_cast<std::size_t>(fan.rank);
	IntVec u(dim, -bound);
	std::unordered_map<RaySet, int> seen;
	while (true) {
		auto [it, fresh] = seen.try_emplace(negative_rays(fan, std::nullopt, u), 0);
		if (fresh)
			it->second = reduced_cohomology_dim(build_vcomplex(fan, std::nullopt, u), k - 1);
		int h = it->second;
		if (h != 0) {
			res.vanishes = false;
			if (on_shell(u, bound))
				res.shell_warning = true;
		}
		std::size_t d = 0;
		for (; d < dim; ++d) {
			if (u[d] < bound) {
				++u[d];
				break;
			}
			u[d] = -bound;
		}
		if (d == dim)
			break;
	}
	return res;
}

int tangent_cohomology_dim(const Fan& fan, int k, std::int64_t bound)
{
	int total = 0;
	for (const auto& e : enumerate_support(fan, k, bound).entries)
		total += e.dim;
	return total;
}

}  // namespace toricdef
