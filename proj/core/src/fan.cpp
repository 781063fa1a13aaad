#include "toricdef/fan.hpp"

#include "toricdef/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace toricdef {

RaySet mask_of(std::span<const int> rays)
{
	RaySet s = 0;
	for (int r : rays)
		s |= ray_bit(r);
	return s;
}

std::vector<int> rays_of(RaySet s)
{
	std::vector<int> out;
	while (s) {
		out.push_back(__builtin_ctzll(s));
		s &= s - 1;
	}
	return out;
}

namespace {

std::vector<IntVec> generators(const Fan& fan, const Cone& cone)
{
	std::vector<IntVec> g;
	g.reserve(cone.size());
	for (int r : cone)
		g.push_back(fan.rays.at(static_cast<std::size_t>(r)));
	return g;
}

std::size_t int_rank(const std::vector<IntVec>& rows, std::size_t cols)
{
	if (rows.empty())
		return 0;
	return rank(QMatrix::from_int_rows(rows, cols));
}

std::int64_t gcd_entries(const IntVec& v)
{
	std::int64_t g = 0;
	for (auto x : v)
		g = std::gcd(g, x < 0 ? -x : x);
	return g;
}

// Values of a linear functional on the cone's rays that vanishes on `sub`
// (assumed to span a hyperplane inside span(cone)); empty if none separates.
std::vector<Rational> facet_values(const Fan& fan, const Cone& cone, const Cone& sub)
{
	std::size_t n = static_cast<std::size_t>(fan.rank);
	QMatrix m = sub.empty() ? QMatrix(0, n) : QMatrix::from_int_rows(generators(fan, sub), n);
	std::vector<std::vector<Rational>> kernel;
	if (sub.empty()) {
		for (std::size_t i = 0; i < n; ++i) {
			std::vector<Rational> e(n);
			e[i] = 1;
			kernel.push_back(std::move(e));
		}
	} else {
		kernel = nullspace(m);
	}
	for (const auto& k : kernel) {
		std::vector<Rational> vals;
		bool nonzero = false;
		for (int r : cone) {
			Rational v = 0;
			for (std::size_t i = 0; i < n; ++i)
				v += k[i] * static_cast<long>(fan.rays[static_cast<std::size_t>(r)][i]);
			if (v != 0)
				nonzero = true;
			vals.push_back(v);
		}
		if (nonzero)
			return vals;
	}
	return {};
}

void subsets_of_size(const Cone& base, std::size_t k, std::size_t start, Cone& cur, std::vector<Cone>& out)
{
	if (cur.size() == k) {
		out.push_back(cur);
		return;
	}
	for (std::size_t i = start; i < base.size(); ++i) {
		cur.push_back(base[i]);
		subsets_of_size(base, k, i + 1, cur, out);
		cur.pop_back();
	}
}

}  // namespace

std::vector<std::string> validate_fan(const Fan& fan, bool check_intersections)
{
	std::vector<std::string> report;
	if (fan.rank <= 0) {
		report.push_back("rank must be positive");
		return report;
	}
	if (fan.rays.size() > kMaxRays)
		report.push_back("more than 64 rays are not supported");
	bool rays_ok = true;
	for (std::size_t i = 0; i < fan.rays.size(); ++i) {
		const auto& r = fan.rays[i];
		if (r.size() != static_cast<std::size_t>(fan.rank)) {
			report.push_back("ray " + std::to_string(i) + " has wrong dimension");
			rays_ok = false;
			continue;
		}
		std::int64_t g = gcd_entries(r);
		if (g == 0)
			report.push_back("zero ray " + std::to_string(i));
		else if (g != 1)
			report.push_back("non-primitive ray " + std::to_string(i));
	}
	for (std::size_t i = 0; i < fan.rays.size(); ++i)
		for (std::size_t j = i + 1; j < fan.rays.size(); ++j)
			if (fan.rays[i] == fan.rays[j])
				report.push_back("duplicate rays " + std::to_string(i) + " and " + std::to_string(j));
	bool cones_ok = true;
	for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
		const auto& cone = fan.max_cones[c];
		std::string tag = "cone " + std::to_string(c);
		if (cone.empty()) {
			report.push_back(tag + " is empty");
			cones_ok = false;
			continue;
		}
		for (int r : cone)
			if (r < 0 || static_cast<std::size_t>(r) >= fan.rays.size()) {
				report.push_back(tag + " references missing ray " + std::to_string(r));
				cones_ok = false;
			}
		if (!std::is_sorted(cone.begin(), cone.end()) ||
		    std::adjacent_find(cone.begin(), cone.end()) != cone.end()) {
			report.push_back(tag + " is not a sorted set of ray indices");
			cones_ok = false;
		}
	}
	for (std::size_t i = 0; i < fan.max_cones.size(); ++i)
		for (std::size_t j = i + 1; j < fan.max_cones.size(); ++j)
			if (fan.max_cones[i] == fan.max_cones[j])
				report.push_back("duplicate cones " + std::to_string(i) + " and " + std::to_string(j));
	if (!rays_ok || !cones_ok || !check_intersections)
		return report;

	std::size_t n = static_cast<std::size_t>(fan.rank);
	for (std::size_t i = 0; i < fan.max_cones.size(); ++i)
		for (std::size_t j = i + 1; j < fan.max_cones.size(); ++j) {
			const auto& s = fan.max_cones[i];
			const auto& t = fan.max_cones[j];
			Cone common;
			std::set_intersection(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(common));
			// feasible iff some common point needs a ray outside the shared set
			std::size_t nv = s.size() + t.size();
			QMatrix a(n + 1, nv);
			std::vector<Rational> b(n + 1);
			for (std::size_t k = 0; k < s.size(); ++k)
				for (std::size_t d = 0; d < n; ++d)
					a(d, k) = static_cast<long>(fan.rays[static_cast<std::size_t>(s[k])][d]);
			for (std::size_t k = 0; k < t.size(); ++k)
				for (std::size_t d = 0; d < n; ++d)
					a(d, s.size() + k) = -static_cast<long>(fan.rays[static_cast<std::size_t>(t[k])][d]);
			for (std::size_t k = 0; k < s.size(); ++k)
				if (!std::binary_search(common.begin(), common.end(), s[k]))
					a(n, k) = 1;
			for (std::size_t k = 0; k < t.size(); ++k)
				if (!std::binary_search(common.begin(), common.end(), t[k]))
					a(n, s.size() + k) = 1;
			b[n] = 1;
			QMatrix g(nv, nv);
			for (std::size_t k = 0; k < nv; ++k)
				g(k, k) = 1;
			if (find_feasible(a, b, g, std::vector<Rational>(nv)))
				report.push_back("cones " + std::to_string(i) + " and " + std::to_string(j) +
				                 " do not meet in a common face");
		}
	return report;
}

std::int64_t pairing(const Fan& fan, int ray, const IntVec& u)
{
	if (ray < 0 || static_cast<std::size_t>(ray) >= fan.rays.size())
		throw std::out_of_range("pairing: ray index " + std::to_string(ray) + " out of range");
	return dot(fan.rays[static_cast<std::size_t>(ray)], u);
}

int cone_dimension(const Fan& fan, const Cone& cone)
{
	return static_cast<int>(int_rank(generators(fan, cone), static_cast<std::size_t>(fan.rank)));
}

bool is_cone_simplicial(const Fan& fan, const Cone& cone)
{
	return cone_dimension(fan, cone) == static_cast<int>(cone.size());
}

bool is_cone_smooth(const Fan& fan, const Cone& cone)
{
	if (cone.empty())
		return true;
	if (!is_cone_simplicial(fan, cone))
		return false;
	auto inv = smith_invariants(generators(fan, cone));
	if (inv.size() != cone.size())
		return false;
	return std::all_of(inv.begin(), inv.end(), [](const Integer& d) { return d == 1; });
}

bool is_simplicial(const Fan& fan)
{
	return std::all_of(fan.max_cones.begin(), fan.max_cones.end(),
	                   [&](const Cone& c) { return is_cone_simplicial(fan, c); });
}

bool is_smooth(const Fan& fan)
{
	return std::all_of(fan.max_cones.begin(), fan.max_cones.end(),
	                   [&](const Cone& c) { return is_cone_smooth(fan, c); });
}

bool has_torus_factor(const Fan& fan)
{
	return int_rank(fan.rays, static_cast<std::size_t>(fan.rank)) < static_cast<std::size_t>(fan.rank);
}

std::vector<Cone> cone_faces(const Fan& fan, const Cone& cone)
{
	std::vector<Cone> faces;
	if (is_cone_simplicial(fan, cone)) {
		for (std::size_t k = 0; k <= cone.size(); ++k) {
			Cone cur;
			subsets_of_size(cone, k, 0, cur, faces);
		}
		return faces;
	}
	// facets are ray subsets spanning a hyperplane of span(cone) with the
	// remaining rays strictly on one side; faces are intersections of facets
	int d = cone_dimension(fan, cone);
	std::set<Cone> facets;
	std::vector<Cone> cands;
	Cone cur;
	subsets_of_size(cone, static_cast<std::size_t>(d - 1), 0, cur, cands);
	for (const auto& sub : cands) {
		if (cone_dimension(fan, sub) != d - 1)
			continue;
		auto vals = facet_values(fan, cone, sub);
		if (vals.empty())
			continue;
		bool pos = false, neg = false;
		Cone facet;
		for (std::size_t k = 0; k < cone.size(); ++k) {
			if (vals[k] > 0)
				pos = true;
			else if (vals[k] < 0)
				neg = true;
			else
				facet.push_back(cone[k]);
		}
		if (!(pos && neg))
			facets.insert(facet);
	}
	std::set<Cone> all{cone};
	std::vector<Cone> frontier{cone};
	while (!frontier.empty()) {
		std::vector<Cone> next;
		for (const auto& f : frontier)
			for (const auto& fac : facets) {
				Cone meet;
				std::set_intersection(f.begin(), f.end(), fac.begin(), fac.end(), std::back_inserter(meet));
				if (all.insert(meet).second)
					next.push_back(meet);
			}
		frontier = std::move(next);
	}
	faces.assign(all.begin(), all.end());
	return faces;
}

std::vector<Cone> all_cones(const Fan& fan)
{
	std::set<Cone> cones;
	for (const auto& c : fan.max_cones)
		for (auto& f : cone_faces(fan, c))
			cones.insert(std::move(f));
	return {cones.begin(), cones.end()};
}

bool is_complete(const Fan& fan)
{
	for (const auto& c : fan.max_cones)
		if (cone_dimension(fan, c) != fan.rank)
			throw std::invalid_argument("is_complete: fan is not pure of full dimension");
	if (fan.max_cones.empty())
		return false;
	std::map<Cone, std::vector<std::size_t>> walls;
	for (std::size_t i = 0; i < fan.max_cones.size(); ++i)
		for (const auto& f : cone_faces(fan, fan.max_cones[i]))
			if (cone_dimension(fan, f) == fan.rank - 1)
				walls[f].push_back(i);
	std::vector<std::size_t> parent(fan.max_cones.size());
	std::iota(parent.begin(), parent.end(), 0);
	auto find = [&](std::size_t x) {
		while (parent[x] != x)
			x = parent[x] = parent[parent[x]];
		return x;
	};
	for (const auto& [wall, owners] : walls) {
		if (owners.size() != 2)
			return false;
		parent[find(owners[0])] = find(owners[1]);
	}
	for (std::size_t i = 0; i < parent.size(); ++i)
		if (find(i) != find(0))
			return false;
	return true;
}

bool smooth_in_codim(const Fan& fan, int k)
{
	for (const auto& c : all_cones(fan))
		if (cone_dimension(fan, c) <= k && !is_cone_smooth(fan, c))
			return false;
	return true;
}

bool qfactorial_in_codim(const Fan& fan, int k)
{
	for (const auto& c : all_cones(fan))
		if (cone_dimension(fan, c) <= k && !is_cone_simplicial(fan, c))
			return false;
	return true;
}

Fan subfan_with_3cones(const Fan& fan)
{
	std::vector<Cone> simplicial;
	for (const auto& c : all_cones(fan)) {
		bool simp = is_cone_simplicial(fan, c);
		if (!simp && cone_dimension(fan, c) <= 3)
			throw std::invalid_argument("subfan_with_3cones: non-simplicial cone of dimension <= 3");
		if (simp)
			simplicial.push_back(c);
	}
	Fan out{fan.rank, fan.rays, {}};
	for (const auto& c : simplicial) {
		bool maximal = true;
		for (const auto& d : simplicial)
			if (d.size() > c.size() && std::includes(d.begin(), d.end(), c.begin(), c.end())) {
				maximal = false;
				break;
			}
		if (maximal && !c.empty())
			out.max_cones.push_back(c);
	}
	// keep the original order for cones that survive unchanged
	std::vector<Cone> ordered;
	for (const auto& c : fan.max_cones)
		if (std::find(out.max_cones.begin(), out.max_cones.end(), c) != out.max_cones.end())
			ordered.push_back(c);
	for (const auto& c : out.max_cones)
		if (std::find(ordered.begin(), ordered.end(), c) == ordered.end())
			ordered.push_back(c);
	out.max_cones = std::move(ordered);
	return out;
}

Fan restrict_to(const Fan& fan, std::span<const int> cone_indices)
{
	Fan out{fan.rank, fan.rays, {}};
	for (int i : cone_indices) {
		if (i < 0 || static_cast<std::size_t>(i) >= fan.max_cones.size())
			throw std::out_of_range("restrict_to: cone index " + std::to_string(i) + " out of range");
		out.max_cones.push_back(fan.max_cones[static_cast<std::size_t>(i)]);
	}
	return out;
}

Fan permute_cones(const Fan& fan, std::span<const int> perm)
{
	if (perm.size() != fan.max_cones.size())
		throw std::invalid_argument("permute_cones: permutation has wrong length");
	std::vector<int> seen(perm.begin(), perm.end());
	std::sort(seen.begin(), seen.end());
	for (std::size_t i = 0; i < seen.size(); ++i)
		if (seen[i] != static_cast<int>(i))
			throw std::invalid_argument("permute_cones: not a permutation");
	return restrict_to(fan, perm);
}

std::vector<PrimitiveCollection> primitive_collections(const Fan& fan)
{
	std::vector<Cone> cones = all_cones(fan);
	std::set<RaySet> faces;
	for (const auto& c : cones)
		faces.insert(mask_of(c));
	std::size_t nr = fan.rays.size();
	std::size_t n = static_cast<std::size_t>(fan.rank);

	std::vector<PrimitiveCollection> out;
	std::vector<RaySet> level;
	for (RaySet f : faces)
		if (ray_count(f) == 0)
			level.push_back(f);
	for (std::size_t k = 1; k <= nr && !level.empty(); ++k) {
		std::set<RaySet> next;
		std::set<RaySet> nonfaces;
		for (RaySet f : level) {
			int top = f ? 63 - __builtin_clzll(f) : -1;
			for (int r = top + 1; r < static_cast<int>(nr); ++r) {
				RaySet cand = f | ray_bit(r);
				bool ok = true;
				for (int x : rays_of(cand))
					if (!faces.count(cand & ~ray_bit(x))) {
						ok = false;
						break;
					}
				if (!ok)
					continue;
				if (faces.count(cand))
					next.insert(cand);
				else
					nonfaces.insert(cand);
			}
		}
		for (RaySet p : nonfaces) {
			PrimitiveCollection pc;
			pc.rays = rays_of(p);
			IntVec sum(n, 0);
			for (int r : pc.rays)
				for (std::size_t d = 0; d < n; ++d)
					sum[d] += fan.rays[static_cast<std::size_t>(r)][d];
			bool found = false;
			for (const auto& c : cones) {
				if (c.empty()) {
					if (std::all_of(sum.begin(), sum.end(), [](auto x) { return x == 0; })) {
						found = true;
						break;
					}
					continue;
				}
				if (!is_cone_simplicial(fan, c))
					continue;
				QMatrix a = QMatrix::from_int_rows(generators(fan, c), n).transposed();
				std::vector<Rational> b(n);
				for (std::size_t d = 0; d < n; ++d)
					b[d] = static_cast<long>(sum[d]);
				auto x = solve(a, b);
				if (!x || std::any_of(x->begin(), x->end(), [](const Rational& v) { return v <= 0; }))
					continue;
				pc.relation_cone = c;
				for (std::size_t i = 0; i < c.size(); ++i)
					pc.coefficients[c[i]] = (*x)[i];
				found = true;
				break;
			}
			if (!found)
				throw std::invalid_argument("primitive_collections: generator sum lies in no cone (fan not complete?)");
			Rational total = 0;
			for (const auto& [r, c] : pc.coefficients)
				total += c;
			pc.degree = Rational(static_cast<long>(pc.rays.size())) - total;
			out.push_back(std::move(pc));
		}
		level.assign(next.begin(), next.end());
	}
	std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rays < b.rays; });
	return out;
}

RigidityReport rigidity_check(const Fan& fan)
{
	if (!is_smooth(fan) || !is_complete(fan))
		throw std::invalid_argument("rigidity_check: fan must be smooth and complete");
	RigidityReport rep;
	rep.collections = primitive_collections(fan);
	rep.rigid_certified = std::all_of(rep.collections.begin(), rep.collections.end(), [](const auto& pc) {
		return pc.rays.size() != 2 || pc.degree > 0;
	});
	return rep;
}

Fan fixture_p1bundle_hirzebruch(int e, int a, int b)
{
	if (e < 0 || b < 0)
		throw std::invalid_argument("fixture_p1bundle_hirzebruch: need e >= 0 and b >= 0");
	Fan f;
	f.rank = 3;
	f.rays = {{1, 0, 0}, {0, 1, 0}, {-1, e, a}, {0, -1, b}, {0, 0, 1}, {0, 0, -1}};
	f.max_cones = {{0, 3, 4}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4},
	               {0, 1, 5}, {1, 2, 5}, {2, 3, 5}, {0, 3, 5}};
	return f;
}

Fan fixture_projective_bundle(int s, std::span<const int> degrees)
{
	if (s < 1)
		throw std::invalid_argument("fixture_projective_bundle: need s >= 1");
	if (degrees.empty())
		throw std::invalid_argument("fixture_projective_bundle: need at least one twist");
	for (std::size_t i = 0; i < degrees.size(); ++i)
		if (degrees[i] < 0 || (i && degrees[i] < degrees[i - 1]))
			throw std::invalid_argument("fixture_projective_bundle: twists must satisfy 0 <= a_1 <= ... <= a_r");
	int r = static_cast<int>(degrees.size());
	int n = s + r;
	Fan f;
	f.rank = n;
	for (int i = 0; i < n; ++i) {
		IntVec v(static_cast<std::size_t>(n), 0);
		v[static_cast<std::size_t>(i)] = 1;
		f.rays.push_back(v);
	}
	IntVec fiber(static_cast<std::size_t>(n), 0), base(static_cast<std::size_t>(n), 0);
	for (int i = 0; i < s; ++i)
		base[static_cast<std::size_t>(i)] = -1;
	for (int j = 0; j < r; ++j) {
		fiber[static_cast<std::size_t>(s + j)] = -1;
		base[static_cast<std::size_t>(s + j)] = degrees[static_cast<std::size_t>(j)];
	}
	f.rays.push_back(fiber);  // index n
	f.rays.push_back(base);   // index n + 1
	std::vector<int> p1, p2;
	for (int i = 0; i < s; ++i)
		p1.push_back(i);
	p1.push_back(n + 1);
	for (int i = s; i < n; ++i)
		p2.push_back(i);
	p2.push_back(n);
	for (int x : p1)
		for (int y : p2) {
			Cone c;
			for (int i = 0; i < n + 2; ++i)
				if (i != x && i != y)
					c.push_back(i);
			f.max_cones.push_back(c);
		}
	return f;
}

Fan fixture_projective_space(int n)
{
	if (n < 1)
		throw std::invalid_argument("fixture_projective_space: need n >= 1");
	Fan f;
	f.rank = n;
	for (int i = 0; i < n; ++i) {
		IntVec v(static_cast<std::size_t>(n), 0);
		v[static_cast<std::size_t>(i)] = 1;
		f.rays.push_back(v);
	}
	f.rays.push_back(IntVec(static_cast<std::size_t>(n), -1));
	for (int skip = 0; skip <= n; ++skip) {
		Cone c;
		for (int i = 0; i <= n; ++i)
			if (i != skip)
				c.push_back(i);
		f.max_cones.push_back(c);
	}
	return f;
}

}  // namespace toricdef
