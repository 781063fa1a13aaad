#include "toricdef/solver.hpp"

#include "toricdef/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <future>
#include <numeric>
#include <sstream>

namespace toricdef {

namespace {

std::string trim(std::string_view s)
{
	auto b = s.find_first_not_of(" \t\n");
	if (b == std::string_view::npos)
		return {};
	auto e = s.find_last_not_of(" \t\n");
	return std::string(s.substr(b, e - b + 1));
}

std::int64_t parse_int(const std::string& s, const std::string& what)
{
	std::string t = trim(s);
	std::int64_t v = 0;
	auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
	if (t.empty() || ec != std::errc{} || p != t.data() + t.size())
		throw std::invalid_argument("bad integer '" + t + "' in " + what);
	return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
	std::vector<std::string> out;
	std::string cur;
	std::istringstream is(s);
	while (std::getline(is, cur, sep))
		out.push_back(cur);
	return out;
}

std::string pair_string(int ray, const IntVec& u)
{
	return "(ray " + std::to_string(ray) + ", degree " + to_string(u) + ")";
}

}  // namespace

std::vector<ThetaSpec> parse_theta_specs(const std::string& text)
{
	std::vector<ThetaSpec> out;
	for (const auto& item : split(text, ';')) {
		std::string t = trim(item);
		if (t.empty())
			continue;
		auto colon = t.find(':');
		auto at = t.find('@');
		if (colon == std::string::npos || at == std::string::npos || at < colon)
			throw std::invalid_argument("theta spec '" + t + "' is not of the form ray:u1,...,un@keep");
		ThetaSpec spec;
		spec.ray = static_cast<int>(parse_int(t.substr(0, colon), "theta spec"));
		for (const auto& c : split(t.substr(colon + 1, at - colon - 1), ','))
			spec.degree.push_back(parse_int(c, "theta spec"));
		spec.keep_ray = static_cast<int>(parse_int(t.substr(at + 1), "theta spec"));
		out.push_back(std::move(spec));
	}
	if (out.empty())
		throw std::invalid_argument("theta spec list is empty");
	return out;
}

std::vector<IntVec> DeformationBasis::phi() const
{
	std::vector<IntVec> out;
	for (const auto& t : thetas)
		out.push_back(t.degree);
	return out;
}

std::optional<int> Hull::lowest_obstruction_degree() const
{
	std::optional<int> best;
	for (const auto& g : obstructions)
		if (!g.is_zero() && (!best || g.min_degree() < *best))
			best = g.min_degree();
	return best;
}

namespace {

struct Working {
	Fan fan;
	std::vector<int> labels;
	std::vector<int> rank;
};

Working make_working(const Fan& fan, const SolverOptions& opt)
{
	Working w;
	if (opt.subfan.empty()) {
		w.labels.resize(fan.num_cones());
		std::iota(w.labels.begin(), w.labels.end(), 0);
	} else {
		w.labels = opt.subfan;
		std::vector<int> s = w.labels;
		std::sort(s.begin(), s.end());
		if (std::adjacent_find(s.begin(), s.end()) != s.end())
			throw std::invalid_argument("subfan lists a cone twice");
	}
	w.fan = restrict_to(fan, w.labels);
	std::vector<int> order = opt.cone_order;
	if (order.empty()) {
		order = w.labels;
		std::sort(order.begin(), order.end());
	}
	std::map<int, int> pos;
	for (std::size_t i = 0; i < order.size(); ++i)
		if (!pos.emplace(order[i], static_cast<int>(i)).second)
			throw std::invalid_argument("cone order lists cone " + std::to_string(order[i]) + " twice");
	for (int l : w.labels) {
		auto it = pos.find(l);
		if (it == pos.end())
			throw std::invalid_argument("cone order does not mention cone " + std::to_string(l));
		w.rank.push_back(it->second);
	}
	return w;
}

int working_index(const std::vector<int>& labels, int original)
{
	auto it = std::find(labels.begin(), labels.end(), original);
	if (it == labels.end())
		throw std::invalid_argument("cone " + std::to_string(original) + " is not in the working fan");
	return static_cast<int>(it - labels.begin());
}

ConeTuple sorted_pair(int a, int b)
{
	return a < b ? ConeTuple{a, b} : ConeTuple{b, a};
}

Rational ordered(const std::map<ConeTuple, Rational>& m, int a, int b)
{
	auto it = m.find(sorted_pair(a, b));
	if (it == m.end())
		return 0;
	return a < b ? it->second : -it->second;
}

int min_rank_cone(const std::vector<int>& cones, const std::vector<int>& rank)
{
	return *std::min_element(cones.begin(), cones.end(), [&](int a, int b) { return rank[a] < rank[b]; });
}

// Normalized omegas for one H^1 summand, pivots placed by priority.
std::vector<CechVector> omega_basis(const VComplex& v, const Fan& wf, const std::vector<int>& rank,
                                    const std::optional<ConeTuple>& preferred)
{
	auto coh = cech_cohomology(v, 1);
	auto pairs = v.tuples(1);
	std::vector<std::size_t> cols(pairs.size());
	std::iota(cols.begin(), cols.end(), 0);
	auto key = [&](std::size_t i) {
		int a = pairs[i][0], b = pairs[i][1];
		int lo = std::min(rank[a], rank[b]), hi = std::max(rank[a], rank[b]);
		bool wall = ray_count(mask_of(wf.max_cones[a]) & mask_of(wf.max_cones[b])) == wf.rank - 1;
		bool pref = preferred && pairs[i] == *preferred;
		return std::tuple(!pref, !wall, -lo, -hi);
	};
	std::sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
	QMatrix m(coh.basis.size(), pairs.size());
	for (std::size_t r = 0; r < coh.basis.size(); ++r) {
		CechVector z = coh.basis[r];
		CechVector dz = coboundary(v, psi(v, z, rank));
		for (const auto& [t, c] : dz.entries)
			z.entries[t] -= c;
		for (std::size_t c = 0; c < cols.size(); ++c) {
			auto it = z.entries.find(pairs[cols[c]]);
			if (it != z.entries.end())
				m(r, c) = it->second;
		}
	}
	Echelon e = rref(m);
	if (e.reduced.rows() != coh.basis.size())
		throw std::logic_error("omega images are linearly dependent");
	std::vector<CechVector> out;
	for (std::size_t r = 0; r < e.reduced.rows(); ++r) {
		CechVector w{1, {}};
		for (std::size_t c = 0; c < cols.size(); ++c)
			if (e.reduced(r, c) != 0)
				w.entries[pairs[cols[c]]] = e.reduced(r, c);
		out.push_back(std::move(w));
	}
	return out;
}

}  // namespace

CechVector psi(const VComplex& v, const CechVector& eta, const std::vector<int>& cone_rank)
{
	CechVector out{0, {}};
	const int n = static_cast<int>(v.pieces.size());
	for (const auto& comp : components(v)) {
		int root = min_rank_cone(comp.cones, cone_rank);
		std::vector<int> dist(n, -1);
		std::deque<int> queue{root};
		dist[root] = 0;
		while (!queue.empty()) {
			int a = queue.front();
			queue.pop_front();
			for (int b : comp.cones)
				if (dist[b] < 0 && (v.pieces[a] & v.pieces[b])) {
					dist[b] = dist[a] + 1;
					queue.push_back(b);
				}
		}
		for (int s : comp.cones) {
			Rational sum = 0;
			int cur = s;
			while (cur != root) {
				int next = -1;
				for (int b : comp.cones)
					if (dist[b] == dist[cur] - 1 && (v.pieces[cur] & v.pieces[b]) &&
					    (next < 0 || cone_rank[b] < cone_rank[next]))
						next = b;
				sum += ordered(eta.entries, next, cur);
				cur = next;
			}
			if (sum != 0)
				out.entries[{s}] = sum;
		}
	}
	return out;
}

CechVector coboundary(const VComplex& v, const CechVector& beta)
{
	CechVector out{1, {}};
	auto val = [&](int c) {
		auto it = beta.entries.find({c});
		return it == beta.entries.end() ? Rational(0) : it->second;
	};
	for (const auto& t : v.tuples(1)) {
		Rational x = val(t[1]) - val(t[0]);
		if (x != 0)
			out.entries[t] = x;
	}
	return out;
}

DeformationBasis choose_basis(const Fan& fan, const SupportResult& support1, const SupportResult& support2,
                              const SolverOptions& options)
{
	Working w = make_working(fan, options);
	DeformationBasis b;
	b.working = w.fan;
	b.cone_labels = w.labels;
	b.cone_rank = w.rank;

	auto comps_for = [&](int ray, const IntVec& u, int dim) {
		auto comps = components(build_vcomplex(w.fan, ray, u));
		if (static_cast<int>(comps.size()) != dim + 1)
			throw std::runtime_error("working fan does not reproduce the first-order cohomology at " +
			                         pair_string(ray, u));
		return comps;
	};
	auto add_theta = [&](int ray, const IntVec& u, const Component& c) {
		b.thetas.push_back({ray, u, c.cones});
	};

	if (options.theta_policy == ThetaPolicy::Explicit) {
		std::map<std::pair<int, IntVec>, int> wanted, used;
		for (const auto& e : support1.entries)
			wanted[{e.ray, e.degree}] = e.dim;
		for (const auto& s : options.explicit_thetas) {
			auto it = wanted.find({s.ray, s.degree});
			if (it == wanted.end())
				throw std::invalid_argument("explicit theta " + pair_string(s.ray, s.degree) +
				                            " is not in the first-order support");
			auto comps = comps_for(s.ray, s.degree, it->second);
			auto c = std::find_if(comps.begin(), comps.end(),
			                      [&](const Component& x) { return x.rays & ray_bit(s.keep_ray); });
			if (c == comps.end())
				throw std::invalid_argument("explicit theta " + pair_string(s.ray, s.degree) + ": ray " +
				                            std::to_string(s.keep_ray) + " lies in no component");
			add_theta(s.ray, s.degree, *c);
			++used[{s.ray, s.degree}];
		}
		for (const auto& [k, dim] : wanted)
			if (used[k] != dim)
				throw std::invalid_argument("explicit thetas give " + std::to_string(used[k]) + " directions at " +
				                            pair_string(k.first, k.second) + ", expected " +
				                            std::to_string(dim));
	} else {
		for (const auto& e : support1.entries) {
			auto comps = comps_for(e.ray, e.degree, e.dim);
			std::size_t drop = 0;
			for (std::size_t i = 1; i < comps.size(); ++i)
				if (w.rank[min_rank_cone(comps[i].cones, w.rank)] < w.rank[min_rank_cone(comps[drop].cones, w.rank)])
					drop = i;
			if (options.theta_policy == ThetaPolicy::Paper && comps.size() == 2) {
				for (int keep : {2, 1}) {
					auto c = std::find_if(comps.begin(), comps.end(),
					                      [&](const Component& x) { return x.rays & ray_bit(keep); });
					if (c != comps.end()) {
						drop = c == comps.begin() ? 1 : 0;
						break;
					}
				}
			}
			for (std::size_t i = 0; i < comps.size(); ++i)
				if (i != drop)
					add_theta(e.ray, e.degree, comps[i]);
		}
	}

	std::optional<ConeTuple> preferred;
	if (options.omega_wall)
		preferred = sorted_pair(working_index(w.labels, options.omega_wall->first),
		                        working_index(w.labels, options.omega_wall->second));
	for (const auto& e : support2.entries) {
		VComplex v = build_vcomplex(w.fan, e.ray, e.degree);
		auto omegas = omega_basis(v, w.fan, w.rank, preferred);
		if (static_cast<int>(omegas.size()) != e.dim)
			throw std::runtime_error("working fan does not reproduce the obstruction space at " +
			                         pair_string(e.ray, e.degree));
		for (auto& o : omegas)
			b.omegas.push_back({e.ray, e.degree, std::move(o)});
	}
	return b;
}

std::vector<ConeTuple> codim1_pairs(const Fan& fan)
{
	std::vector<ConeTuple> out;
	int n = static_cast<int>(fan.num_cones());
	for (int i = 0; i < n; ++i)
		for (int j = i + 1; j < n; ++j) {
			RaySet common = mask_of(fan.max_cones[i]) & mask_of(fan.max_cones[j]);
			if (common && cone_dimension(fan, rays_of(common)) == fan.rank - 1)
				out.push_back({i, j});
		}
	return out;
}

std::set<ConeTuple> d_closure(const std::set<ConeTuple>& pairs, const Fan& fan)
{
	std::set<ConeTuple> out = pairs;
	int n = static_cast<int>(fan.num_cones());
	std::vector<RaySet> masks;
	for (const auto& c : fan.max_cones)
		masks.push_back(mask_of(c));
	bool grown = true;
	while (grown) {
		grown = false;
		for (int s = 0; s < n; ++s)
			for (int t = s + 1; t < n; ++t) {
				if (out.count({s, t}))
					continue;
				RaySet common = masks[s] & masks[t];
				for (int k = 0; k < n; ++k) {
					if (k == s || k == t || (common & ~masks[k]))
						continue;
					if (out.count(sorted_pair(s, k)) && out.count(sorted_pair(t, k))) {
						out.insert({s, t});
						grown = true;
						break;
					}
				}
			}
	}
	return out;
}

std::set<ConeTuple> default_D(const Fan& fan)
{
	auto facets = codim1_pairs(fan);
	std::set<ConeTuple> d(facets.begin(), facets.end());
	std::vector<RaySet> masks;
	for (const auto& c : fan.max_cones)
		masks.push_back(mask_of(c));
	for (const auto& tau : all_cones(fan)) {
		RaySet tm = mask_of(tau);
		std::vector<int> star;
		for (std::size_t i = 0; i < masks.size(); ++i)
			if ((masks[i] & tm) == tm)
				star.push_back(static_cast<int>(i));
		if (star.size() < 2)
			continue;
		std::vector<int> seen{star.front()};
		std::set<int> reached{star.front()};
		for (std::size_t h = 0; h < seen.size(); ++h)
			for (int b : star)
				if (!reached.count(b) && d.count(sorted_pair(seen[h], b))) {
					reached.insert(b);
					seen.push_back(b);
				}
		if (reached.size() != star.size()) {
			std::ostringstream os;
			os << "star of the cone {";
			for (std::size_t i = 0; i < tau.size(); ++i)
				os << (i ? "," : "") << tau[i];
			os << "} is not connected in codimension one";
			throw std::invalid_argument(os.str());
		}
	}
	return d;
}

bool covering_subfan_check(const Fan& fan, const std::vector<int>& subfan,
                           const std::vector<std::pair<int, IntVec>>& relevant)
{
	std::vector<RaySet> keep;
	for (int i : subfan)
		keep.push_back(mask_of(fan.max_cones.at(i)));
	for (const auto& [ray, u] : relevant) {
		VComplex v = build_vcomplex(fan, ray, u);
		for (RaySet p : v.pieces)
			if (p && std::none_of(keep.begin(), keep.end(), [&](RaySet k) { return (p & k) == p; }))
				return false;
	}
	return true;
}

namespace {

using KeyVectors = std::map<LieKey, std::map<ConeTuple, Rational>>;

// Bounded closure of the first-order support under the bracket rules; the value
// is the least number of first-order degrees summed.
std::map<std::pair<int, IntVec>, int> gamma_closure(const Fan& fan, const SupportResult& s1, int max_level)
{
	std::map<std::pair<int, IntVec>, int> g;
	for (const auto& e : s1.entries)
		g.emplace(std::pair(e.ray, e.degree), 1);
	bool grown = true;
	while (grown) {
		grown = false;
		std::vector<std::pair<std::pair<int, IntVec>, int>> items(g.begin(), g.end());
		for (const auto& [a, la] : items)
			for (const auto& [b, lb] : items) {
				if (la + lb > max_level)
					continue;
				bool ok = a.first != b.first ? pairing(fan, b.first, a.second) != 0
				                             : pairing(fan, a.first, b.second) != pairing(fan, a.first, a.second);
				if (!ok)
					continue;
				IntVec u = a.second;
				for (std::size_t i = 0; i < u.size(); ++i)
					u[i] += b.second[i];
				auto [it, fresh] = g.emplace(std::pair(a.first, u), la + lb);
				if (fresh || it->second > la + lb) {
					it->second = la + lb;
					grown = true;
				}
			}
	}
	return g;
}

struct Summand {
	VComplex v;
	std::vector<int> omegas;  // indices of omegas in this summand
};

class Engine {
public:
	Engine(const Fan& full, const SolverOptions& opt, DeformationBasis basis)
	    : full_(full), opt_(opt), basis_(std::move(basis)), ctx_(basis_.working, basis_.phi(), 1)
	{
	}

	Hull run(const SupportResult& s1);

private:
	const Summand& summand(int ray, const Exponent& w);
	void plan_pairs();
	LieCochain evaluate(const LieContext& ctx) const;
	void record(int order, const KeyVectors& eta, const std::vector<TruncPoly>& gamma, const std::set<LieKey>& keys);

	const Fan& full_;
	const SolverOptions& opt_;
	DeformationBasis basis_;
	LieContext ctx_;
	std::map<std::pair<int, IntVec>, Summand> summands_;
	std::vector<ConeTuple> direct_;                        // evaluated pairs
	std::set<ConeTuple> direct_set_;
	std::vector<std::pair<ConeTuple, int>> derived_;       // reconstructed pair and pivot cone
	std::vector<ConeTuple> all_pairs_;
	std::vector<ConeTuple> shown_;  // D in the order given, for trace columns
	LieCochain alpha_{0, {}};
	Hull hull_;
};

const Summand& Engine::summand(int ray, const Exponent& w)
{
	IntVec u = ctx_.degree(w);
	auto key = std::pair(ray, u);
	auto it = summands_.find(key);
	if (it != summands_.end())
		return it->second;
	if (!opt_.subfan.empty() && !covering_subfan_check(full_, basis_.cone_labels, {{ray, u}}))
		throw std::runtime_error("subfan does not cover " + pair_string(ray, u));
	Summand s{build_vcomplex(basis_.working, ray, u), {}};
	for (std::size_t l = 0; l < basis_.omegas.size(); ++l)
		if (basis_.omegas[l].ray == ray && basis_.omegas[l].degree == u)
			s.omegas.push_back(static_cast<int>(l));
	return summands_.emplace(key, std::move(s)).first->second;
}

void Engine::plan_pairs()
{
	const Fan& wf = basis_.working;
	int n = static_cast<int>(wf.num_cones());
	for (int i = 0; i < n; ++i)
		for (int j = i + 1; j < n; ++j)
			all_pairs_.push_back({i, j});
	if (opt_.pairs == PairMode::All) {
		direct_ = all_pairs_;
		shown_ = all_pairs_;
		direct_set_.insert(direct_.begin(), direct_.end());
		return;
	}
	std::set<ConeTuple> d;
	if (opt_.pairs == PairMode::Codim1) {
		d = default_D(wf);
		shown_.assign(d.begin(), d.end());
	} else {
		for (const auto& p : opt_.explicit_pairs) {
			if (p.size() != 2)
				throw std::invalid_argument("explicit pairs need two cones each");
			int a = working_index(basis_.cone_labels, p[0]), b = working_index(basis_.cone_labels, p[1]);
			if (a == b)
				throw std::invalid_argument("explicit pair repeats a cone");
			if (d.insert(sorted_pair(a, b)).second)
				shown_.push_back(sorted_pair(a, b));
		}
	}
	std::vector<RaySet> masks;
	for (const auto& c : wf.max_cones)
		masks.push_back(mask_of(c));
	std::set<ConeTuple> known = d;
	bool grown = true;
	while (grown) {
		grown = false;
		for (const auto& p : all_pairs_) {
			if (known.count(p))
				continue;
			RaySet common = masks[p[0]] & masks[p[1]];
			for (int k = 0; k < n; ++k) {
				if (k == p[0] || k == p[1] || (common & ~masks[k]))
					continue;
				if (known.count(sorted_pair(p[0], k)) && known.count(sorted_pair(p[1], k))) {
					derived_.push_back({p, k});
					known.insert(p);
					grown = true;
					break;
				}
			}
		}
	}
	for (const auto& p : all_pairs_)
		if (d.count(p) || !known.count(p))
			direct_.push_back(p);
	direct_set_.insert(direct_.begin(), direct_.end());
}

LieCochain Engine::evaluate(const LieContext& ctx) const
{
	if (opt_.jobs <= 1 || direct_.size() < 2)
		return lambda(ctx, o0(ctx, alpha_, direct_));
	std::size_t jobs = std::min<std::size_t>(opt_.jobs, direct_.size());
	std::vector<std::future<LieCochain>> parts;
	for (std::size_t j = 0; j < jobs; ++j) {
		std::vector<ConeTuple> chunk;
		for (std::size_t i = j; i < direct_.size(); i += jobs)
			chunk.push_back(direct_[i]);
		parts.push_back(std::async(std::launch::async, [&ctx, this, chunk = std::move(chunk)] {
			return lambda(ctx, o0(ctx, alpha_, chunk));
		}));
	}
	LieCochain out{1, {}};
	for (auto& f : parts)
		for (auto& [t, v] : f.get().entries)
			out.entries.emplace(t, std::move(v));
	return out;
}

void Engine::record(int order, const KeyVectors& eta, const std::vector<TruncPoly>& gamma,
                    const std::set<LieKey>& keys)
{
	// t1 before t2, then by ray
	std::vector<LieKey> sorted(keys.begin(), keys.end());
	std::stable_sort(sorted.begin(), sorted.end(),
	                 [](const LieKey& a, const LieKey& b) { return grlex_compare(a.w, b.w) > 0; });
	for (const auto& key : sorted) {
		TraceRow row;
		row.order = order;
		row.w = key.w;
		row.ray = key.ray;
		for (const auto& [t, v] : alpha_.entries) {
			Rational c = v.coeff(key.ray, key.w);
			if (c != 0)
				row.deformation[t[0]] = c;
		}
		if (auto it = eta.find(key); it != eta.end())
			row.obstruction = it->second;
		for (std::size_t l = 0; l < gamma.size(); ++l) {
			const auto& om = basis_.omegas[l];
			if (om.ray != key.ray)
				continue;
			Rational c = gamma[l].coeff(key.w);
			if (c != 0)
				row.gamma[static_cast<int>(l)] = c;
		}
		hull_.trace.push_back(std::move(row));
	}
}

Hull Engine::run(const SupportResult& s1)
{
	const std::size_t p = basis_.thetas.size();
	const std::size_t q = basis_.omegas.size();
	const auto phi = basis_.phi();
	hull_.parameters = basis_.thetas;
	hull_.obstruction_directions = basis_.omegas;
	hull_.cone_labels = basis_.cone_labels;

	// A positivity functional bounds the monomials that can ever enter g.
	std::vector<Exponent> fibers;
	if (p)
		hull_.certificate = positivity_functional(phi);
	if (hull_.certificate)
		for (const auto& om : basis_.omegas)
			for (auto& f : fiber_monomials(phi, om.degree, *hull_.certificate)) {
				hull_.candidate_degree = std::max(hull_.candidate_degree, total_degree(f));
				fibers.push_back(std::move(f));
			}
	const bool finite = q == 0 || hull_.certificate.has_value();
	int target = opt_.max_order;
	if (finite)
		target = std::min(target, std::max(hull_.candidate_degree, 1));
	if (p == 0) {
		hull_.order = 1;
		hull_.exact = true;
		hull_.obstructions.assign(q, TruncPoly(0, 1));
		return hull_;
	}
	const bool prune = opt_.prune_irrelevant && hull_.certificate.has_value();
	auto relevant = [&](const Exponent& w) {
		return std::any_of(fibers.begin(), fibers.end(), [&](const Exponent& f) { return divides(w, f); });
	};
	std::map<std::pair<int, IntVec>, int> gamma_set;
	if (opt_.gamma_filter)
		gamma_set = gamma_closure(full_, s1, target);

	plan_pairs();
	hull_.pair_labels = shown_;

	std::set<LieKey> first;
	for (std::size_t l = 0; l < p; ++l) {
		Exponent e = unit_exponent(p, l);
		for (int c : basis_.thetas[l].cones) {
			LieElement x = alpha_.at({c});
			x.add_term(basis_.thetas[l].ray, e, 1);
			alpha_.set({c}, std::move(x));
		}
		first.insert({basis_.thetas[l].ray, e});
	}
	IdealState ideal(p, std::vector<TruncPoly>(q, TruncPoly(p, target)), 1);
	if (opt_.trace)
		record(1, {}, std::vector<TruncPoly>(q, TruncPoly(p, 1)), first);

	int r = 1;
	for (; r < target; ++r) {
		const int next = r + 1;
		LieContext ctx = ctx_.with_truncation(next);
		LieCochain obs = evaluate(ctx);
		for (std::size_t l = 0; l < q; ++l) {
			const auto& om = basis_.omegas[l];
			for (const auto& [w, c] : ideal.generators()[l].terms())
				for (const auto& [t, e] : om.cocycle.entries) {
					// derived pairs are rebuilt from the evaluated ones below
					if (!direct_set_.count(t))
						continue;
					LieElement x = obs.at(t);
					x.add_term(om.ray, w, -c * e);
					obs.set(t, std::move(x));
				}
		}

		KeyVectors eta;
		for (const auto& [t, v] : obs.entries) {
			std::map<int, TruncPoly> by_ray;
			for (const auto& [k, c] : v.terms())
				by_ray.try_emplace(k.ray, p, next).first->second.add_term(k.w, c);
			for (const auto& [ray, f] : by_ray) {
				TruncPoly nf = ideal.normal_form(f, IdealState::Modulus::MJ);
				for (const auto& [w, c] : nf.terms()) {
					// pruned terms are never solved for, so they stay in the residual
					if (prune && !relevant(w))
						continue;
					if (total_degree(w) <= r) {
						std::ostringstream os;
						os << "order " << r << " residual keeps " << monomial_string(w) << " * f_" << ray
						   << " on cones (" << basis_.cone_labels[t[0]] << "," << basis_.cone_labels[t[1]] << ")";
						throw InconsistencyError(os.str());
					}
					if (opt_.gamma_filter && !gamma_set.count({ray, ctx.degree(w)}))
						continue;
					eta[{ray, w}][t] = c;
				}
			}
		}
		for (const auto& [pr, k] : derived_) {
			RaySet common = ctx.common_rays(pr);
			for (auto& [key, vec] : eta) {
				if (!(ctx.piece_rays(key.ray, key.w) & common))
					continue;
				Rational x = ordered(vec, pr[0], k) - ordered(vec, pr[1], k);
				if (x != 0)
					vec[pr] = x;
			}
		}

		std::vector<TruncPoly> gamma(q, TruncPoly(p, next));
		LieCochain beta{0, {}};
		std::set<LieKey> touched;
		for (const auto& [key, vec] : eta) {
			touched.insert(key);
			const Summand& s = summand(key.ray, key.w);
			CechVector ev{1, vec};
			CechVector b = psi(s.v, ev, basis_.cone_rank);
			CechVector res = ev;
			for (const auto& [t, c] : coboundary(s.v, b).entries) {
				Rational& x = res.entries[t];
				x -= c;
				if (x == 0)
					res.entries.erase(t);
			}
			if (!res.entries.empty()) {
				std::set<ConeTuple> rows;
				for (const auto& [t, c] : res.entries)
					rows.insert(t);
				for (int l : s.omegas)
					for (const auto& [t, c] : basis_.omegas[l].cocycle.entries)
						rows.insert(t);
				std::vector<ConeTuple> rl(rows.begin(), rows.end());
				QMatrix m(rl.size(), s.omegas.size());
				std::vector<Rational> rhs(rl.size());
				for (std::size_t i = 0; i < rl.size(); ++i) {
					for (std::size_t j = 0; j < s.omegas.size(); ++j) {
						const auto& ent = basis_.omegas[s.omegas[j]].cocycle.entries;
						if (auto it = ent.find(rl[i]); it != ent.end())
							m(i, j) = it->second;
					}
					if (auto it = res.entries.find(rl[i]); it != res.entries.end())
						rhs[i] = it->second;
				}
				auto sol = solve(m, rhs);
				if (!sol)
					throw InconsistencyError("order " + std::to_string(next) + " residual of " +
					                         monomial_string(key.w) + " * f_" + std::to_string(key.ray) +
					                         " is not in the span of the obstruction cocycles");
				for (std::size_t j = 0; j < s.omegas.size(); ++j)
					gamma[s.omegas[j]].add_term(key.w, (*sol)[j]);
			}
			for (const auto& [t, c] : b.entries) {
				LieElement x = beta.at(t);
				x.add_term(key, c);
				beta.set(t, std::move(x));
			}
		}
		for (const auto& [t, v] : beta.entries) {
			LieElement x = alpha_.at(t);
			x -= v;
			alpha_.set(t, std::move(x));
			for (const auto& [k, c] : v.terms())
				touched.insert(k);
		}
		ideal = ideal.update(gamma, next);
		if (opt_.trace)
			record(next, eta, gamma, touched);
	}
	hull_.order = r;
	hull_.exact = finite && (q == 0 || r >= hull_.candidate_degree);
	hull_.obstructions = ideal.generators();
	return hull_;
}

}  // namespace

Hull solve(const Fan& fan, const SolverOptions& options)
{
	if (auto errs = validate_fan(fan); !errs.empty())
		throw std::invalid_argument("invalid fan: " + errs.front());
	if (options.max_order < 1)
		throw std::invalid_argument("max order must be at least 1");
	std::int64_t bound = options.bound > 0 ? options.bound : default_bound(fan);
	SupportResult s1 = enumerate_support(fan, 1, bound, options.jobs);
	SupportResult s2 = enumerate_support(fan, 2, bound, options.jobs);
	if ((s1.shell_warning || s2.shell_warning) && !options.allow_shell_warning)
		throw std::runtime_error("cohomology support reaches the search bound " + std::to_string(bound) +
		                         "; raise the bound");
	DeformationBasis basis = choose_basis(fan, s1, s2, options);
	if (!options.subfan.empty()) {
		std::vector<std::pair<int, IntVec>> rel;
		for (const auto* s : {&s1, &s2})
			for (const auto& e : s->entries)
				rel.emplace_back(e.ray, e.degree);
		if (!covering_subfan_check(fan, options.subfan, rel))
			throw std::runtime_error("subfan does not cover the cohomology support");
	}
	Engine engine(fan, options, std::move(basis));
	return engine.run(s1);
}

UnobstructednessReport unobstructedness_check(const Fan& fan, std::int64_t bound)
{
	if (auto errs = validate_fan(fan); !errs.empty())
		throw std::invalid_argument("invalid fan: " + errs.front());
	if (!is_complete(fan))
		throw std::invalid_argument("unobstructedness check needs a complete fan");
	if (!smooth_in_codim(fan, 2))
		throw std::invalid_argument("unobstructedness check needs a fan smooth in codimension 2");
	if (!qfactorial_in_codim(fan, 3))
		throw std::invalid_argument("unobstructedness check needs a fan Q-factorial in codimension 3");
	if (bound <= 0)
		bound = default_bound(fan);
	UnobstructednessReport rep;
	rep.first_order = enumerate_support(fan, 1, bound).entries;
	rep.second_order = enumerate_support(fan, 2, bound).entries;
	std::vector<IntVec> degrees;
	for (const auto& e : rep.first_order)
		degrees.push_back(e.degree);
	std::optional<IntVec> cert;
	if (!degrees.empty())
		cert = positivity_functional(degrees);
	const std::size_t n = static_cast<std::size_t>(fan.rank);

	// Without a certificate: breadth-first over sums of at most `steps` degrees.
	auto bounded_search = [&](const IntVec& target, std::vector<int>& mult) {
		const int steps = static_cast<int>(2 * bound);
		std::map<IntVec, std::vector<int>> seen{{IntVec(n, 0), std::vector<int>(degrees.size(), 0)}};
		std::vector<IntVec> frontier{IntVec(n, 0)};
		const std::int64_t box = 4 * bound;
		for (int s = 0; s <= steps; ++s) {
			if (auto it = seen.find(target); it != seen.end()) {
				mult = it->second;
				return true;
			}
			std::vector<IntVec> nxt;
			for (const auto& x : frontier)
				for (std::size_t i = 0; i < degrees.size(); ++i) {
					IntVec y = x;
					bool inside = true;
					for (std::size_t c = 0; c < n; ++c) {
						y[c] += degrees[i][c];
						inside = inside && std::abs(y[c]) <= box;
					}
					if (!inside || seen.count(y))
						continue;
					auto m = seen[x];
					++m[i];
					seen.emplace(y, std::move(m));
					nxt.push_back(std::move(y));
				}
			frontier = std::move(nxt);
			if (frontier.empty())
				break;
		}
		return false;
	};

	bool searched_without_cert = false;
	for (const auto& cand : rep.second_order) {
		for (std::size_t bi = 0; bi < rep.first_order.size(); ++bi) {
			const auto& base = rep.first_order[bi];
			if (base.ray != cand.ray)
				continue;
			IntVec diff(n);
			for (std::size_t c = 0; c < n; ++c)
				diff[c] = cand.degree[c] - base.degree[c];
			std::vector<int> mult(degrees.size(), 0);
			bool found = false;
			if (std::all_of(diff.begin(), diff.end(), [](auto x) { return x == 0; })) {
				found = true;
			} else if (cert) {
				if (dot(*cert, diff) > 0) {
					auto fib = fiber_monomials(degrees, diff, *cert);
					if (!fib.empty()) {
						found = true;
						mult = fib.front();
					}
				}
			} else {
				searched_without_cert = true;
				found = bounded_search(diff, mult);
			}
			if (found) {
				rep.witness = cand;
				rep.witness_base = static_cast<int>(bi);
				rep.witness_multiplicities = mult;
				rep.certified = false;
				return rep;
			}
		}
	}
	rep.inconclusive = searched_without_cert;
	rep.certified = !searched_without_cert;
	return rep;
}

}  // namespace toricdef
