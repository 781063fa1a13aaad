#include "toricdef_cli/cli.hpp"

#include "toricdef_cli/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace toricdef::cli {

namespace {

enum class Format { Json, Tsv, Pretty };

struct Common {
	std::string input;  // empty or "-" reads the input stream
	std::string out_path;
	std::string format;
	int jobs = 1;
};

struct HullFlags {
	int max_order = 8;
	std::int64_t bound = 0;
	std::string theta_policy = "min-cone";
	std::string omega_wall;
	std::string cone_order;
	std::string subfan;
	std::string pairs = "all";
	bool gamma_filter = false;
	bool prune = false;
	bool trace = false;
	bool allow_shell_warning = false;
};

std::vector<std::int64_t> int_list(const std::string& text, const std::string& flag)
{
	std::vector<std::int64_t> v;
	std::stringstream ss(text);
	std::string tok;
	while (std::getline(ss, tok, ',')) {
		try {
			std::size_t used = 0;
			v.push_back(std::stoll(tok, &used));
			if (used != tok.size())
				throw std::invalid_argument(tok);
		} catch (const std::logic_error&) {
			throw InputError(flag + ": '" + tok + "' is not an integer");
		}
	}
	return v;
}

std::vector<int> index_list(const std::string& text, const std::string& flag)
{
	std::vector<int> v;
	for (auto x : int_list(text, flag)) {
		if (x < 0)
			throw InputError(flag + ": negative index " + std::to_string(x));
		v.push_back(static_cast<int>(x));
	}
	return v;
}

Format parse_format(const std::string& s, Format fallback)
{
	if (s.empty())
		return fallback;
	if (s == "json")
		return Format::Json;
	if (s == "tsv")
		return Format::Tsv;
	if (s == "pretty")
		return Format::Pretty;
	throw InputError("--format: expected json, tsv or pretty");
}

std::string read_input(const Common& c, std::istream& in)
{
	std::ostringstream buf;
	if (c.input.empty() || c.input == "-") {
		buf << in.rdbuf();
	} else {
		std::ifstream f(c.input);
		if (!f)
			throw InputError("cannot open '" + c.input + "'");
		buf << f.rdbuf();
	}
	return buf.str();
}

Fan load_fan(const Common& c, std::istream& in)
{
	std::string text = read_input(c, in);
	try {
		return parse_fan(text);
	} catch (const InputError& e) {
		throw InputError((c.input.empty() || c.input == "-" ? std::string("<stdin>") : c.input) + ": " + e.what());
	}
}

void emit(const Common& c, std::ostream& out, const std::string& text)
{
	if (c.out_path.empty()) {
		out << text;
		return;
	}
	std::ofstream f(c.out_path);
	if (!f)
		throw InputError("cannot write '" + c.out_path + "'");
	f << text;
	if (!f)
		throw InputError("write to '" + c.out_path + "' failed");
}

std::string json_text(const json& j)
{
	return j.dump(2) + "\n";
}

// Integers without the "/1".
std::string short_rational(const Rational& q)
{
	std::string s = to_string(q);
	return s.ends_with("/1") ? s.substr(0, s.size() - 2) : s;
}

std::string polynomial_string(const TruncPoly& f)
{
	std::vector<std::pair<Exponent, Rational>> terms(f.terms().begin(), f.terms().end());
	std::sort(terms.begin(), terms.end(),
	          [](const auto& a, const auto& b) { return grlex_compare(a.first, b.first) < 0; });
	if (terms.empty())
		return "0";
	std::string s;
	for (const auto& [w, c] : terms) {
		Rational a = abs(c);
		bool unit = total_degree(w) == 0;
		if (s.empty())
			s += c < 0 ? "-" : "";
		else
			s += c < 0 ? " - " : " + ";
		if (a != 1 || unit)
			s += short_rational(a) + (unit ? "" : "*");
		if (!unit)
			s += monomial_string(w);
	}
	return s;
}

SolverOptions solver_options(const HullFlags& h, int jobs)
{
	SolverOptions o;
	o.max_order = h.max_order;
	o.bound = h.bound;
	o.allow_shell_warning = h.allow_shell_warning;
	o.gamma_filter = h.gamma_filter;
	o.prune_irrelevant = h.prune;
	o.trace = h.trace;
	o.jobs = jobs;

	if (h.theta_policy == "min-cone") {
		o.theta_policy = ThetaPolicy::MinCone;
	} else if (h.theta_policy == "paper") {
		o.theta_policy = ThetaPolicy::Paper;
	} else if (h.theta_policy.rfind("explicit:", 0) == 0) {
		o.theta_policy = ThetaPolicy::Explicit;
		o.explicit_thetas = parse_theta_specs(h.theta_policy.substr(9));
	} else {
		throw InputError("--theta-policy: expected min-cone, paper or explicit:<spec>");
	}

	if (!h.omega_wall.empty()) {
		auto w = index_list(h.omega_wall, "--omega-wall");
		if (w.size() != 2 || w[0] == w[1])
			throw InputError("--omega-wall: expected two distinct cone indices i,j");
		o.omega_wall = std::pair{w[0], w[1]};
	}
	if (!h.cone_order.empty())
		o.cone_order = index_list(h.cone_order, "--cone-order");
	if (!h.subfan.empty())
		o.subfan = index_list(h.subfan, "--subfan");

	if (h.pairs == "all") {
		o.pairs = PairMode::All;
	} else if (h.pairs == "codim1") {
		o.pairs = PairMode::Codim1;
	} else if (h.pairs.rfind("explicit:", 0) == 0) {
		o.pairs = PairMode::Explicit;
		std::stringstream ss(h.pairs.substr(9));
		std::string tok;
		while (std::getline(ss, tok, ',')) {
			auto dash = tok.find('-');
			if (dash == std::string::npos)
				throw InputError("--pairs: '" + tok + "' is not of the form i-j");
			auto a = index_list(tok.substr(0, dash), "--pairs");
			auto b = index_list(tok.substr(dash + 1), "--pairs");
			if (a.size() != 1 || b.size() != 1)
				throw InputError("--pairs: '" + tok + "' is not of the form i-j");
			ConeTuple t{std::min(a[0], b[0]), std::max(a[0], b[0])};
			o.explicit_pairs.push_back(t);
		}
		if (o.explicit_pairs.empty())
			throw InputError("--pairs: explicit list is empty");
	} else {
		throw InputError("--pairs: expected all, codim1 or explicit:<i-j,...>");
	}
	return o;
}

std::string support_tsv(const std::vector<SupportEntry>& entries)
{
	std::string s = "ray\tdegree\tdim\n";
	for (const auto& e : entries)
		s += std::to_string(e.ray) + '\t' + to_string(e.degree) + '\t' + std::to_string(e.dim) + '\n';
	return s;
}

std::string hull_text(const Hull& h, Format f)
{
	if (f == Format::Json)
		return json_text(hull_to_json(h, h.trace.size() > 0));
	if (f == Format::Tsv) {
		if (!h.trace.empty())
			return trace_tsv(h);
		std::string s = "index\tray\tdegree\tpolynomial\n";
		for (std::size_t l = 0; l < h.obstructions.size(); ++l)
			s += std::to_string(l + 1) + '\t' + std::to_string(h.obstruction_directions[l].ray) + '\t' +
			     to_string(h.obstruction_directions[l].degree) + '\t' + polynomial_string(h.obstructions[l]) + '\n';
		return s;
	}
	std::ostringstream os;
	os << "parameters:\n";
	for (std::size_t l = 0; l < h.parameters.size(); ++l)
		os << "  t" << l + 1 << "  ray " << h.parameters[l].ray << "  degree " << to_string(h.parameters[l].degree)
		   << '\n';
	os << "obstructions:\n";
	if (h.obstructions.empty())
		os << "  (none)\n";
	for (std::size_t l = 0; l < h.obstructions.size(); ++l)
		os << "  g" << l + 1 << " [ray " << h.obstruction_directions[l].ray << ", degree "
		   << to_string(h.obstruction_directions[l].degree) << "] = " << polynomial_string(h.obstructions[l]) << '\n';
	os << "order " << h.order << (h.exact ? " (exact)" : " (truncated)") << '\n';
	return os.str();
}

void add_common(CLI::App* sub, Common& c, bool with_input = true)
{
	if (with_input)
		sub->add_option("input", c.input, "Fan JSON file, '-' or omitted for stdin");
	sub->add_option("--out", c.out_path, "Write output to this file");
	sub->add_option("--format", c.format, "json, tsv or pretty")->check(CLI::IsMember({"json", "tsv", "pretty"}));
	sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void add_hull_flags(CLI::App* sub, HullFlags& h)
{
	sub->add_option("--max-order", h.max_order, "Highest order to solve to")->check(CLI::PositiveNumber);
	sub->add_option("--bound", h.bound, "Degree search box half-width, 0 for the default")
	    ->check(CLI::NonNegativeNumber);
	sub->add_option("--theta-policy", h.theta_policy, "min-cone, paper or explicit:ray:u1,..,un@keep;...");
	sub->add_option("--omega-wall", h.omega_wall, "Preferred cone pair i,j for obstruction cocycles");
	sub->add_option("--cone-order", h.cone_order, "Cone indices, smallest first");
	sub->add_option("--subfan", h.subfan, "Cone indices of the working subfan");
	sub->add_option("--pairs", h.pairs, "all, codim1 or explicit:i-j,...");
	sub->add_flag("--gamma-filter", h.gamma_filter, "Only solve for obstruction degrees that can occur");
	sub->add_flag("--prune", h.prune, "Skip summands that cannot reach an obstruction degree");
	sub->add_flag("--trace", h.trace, "Record per-term deformation data");
	sub->add_flag("--allow-shell-warning", h.allow_shell_warning, "Proceed when the support touches the bound");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Combinatorial deformation theory of toric varieties", "toricdef"};
	app.require_subcommand(1);
	Common common;
	HullFlags hull;
	int k = 1;
	std::int64_t bound = 0;
	bool intersections = false;

	auto* validate = app.add_subcommand("validate", "Check a fan and report its properties");
	add_common(validate, common);
	validate->add_flag("--check-intersections", intersections, "Also check that cones meet in common faces");

	auto* cohomology = app.add_subcommand("cohomology", "Graded support of the tangent cohomology");
	add_common(cohomology, common);
	cohomology->add_option("--k", k, "Cohomological degree, 1 or 2")->check(CLI::Range(1, 2));
	cohomology->add_option("--bound", bound, "Degree search box half-width, 0 for the default")
	    ->check(CLI::NonNegativeNumber);

	auto* rigid = app.add_subcommand("rigid", "Primitive-collection rigidity test");
	add_common(rigid, common);

	auto* unobstructed = app.add_subcommand("unobstructed", "Sufficient test for unobstructed deformations");
	add_common(unobstructed, common);
	unobstructed->add_option("--bound", bound, "Degree search box half-width, 0 for the default")
	    ->check(CLI::NonNegativeNumber);

	auto* hull_cmd = app.add_subcommand("hull", "Solve the deformation equation order by order");
	add_common(hull_cmd, common);
	add_hull_flags(hull_cmd, hull);

	auto* trace_cmd = app.add_subcommand("trace", "Hull computation with per-term tables");
	add_common(trace_cmd, common);
	add_hull_flags(trace_cmd, hull);

	auto* fixture = app.add_subcommand("fixture", "Print a fan from a built-in family");
	fixture->require_subcommand(1);
	int e = 0, a = 0, b = 0, s = 1, n = 1;
	std::vector<int> degrees;
	auto* p1 = fixture->add_subcommand("p1-bundle", "P^1-bundle over a Hirzebruch surface");
	p1->add_option("--e", e)->required()->check(CLI::NonNegativeNumber);
	p1->add_option("--a", a)->required();
	p1->add_option("--b", b)->required();
	auto* pb = fixture->add_subcommand("projective-bundle", "P(O + O(a_1) + ... + O(a_r)) over P^s");
	pb->add_option("--s", s)->required()->check(CLI::PositiveNumber);
	pb->add_option("--degrees", degrees)->required()->delimiter(',');
	auto* ps = fixture->add_subcommand("projective-space", "P^n");
	ps->add_option("--n", n)->required()->check(CLI::PositiveNumber);
	for (auto* sub : {p1, pb, ps})
		sub->add_option("--out", common.out_path, "Write output to this file");

	try {
		std::vector<std::string> reversed(args.rbegin(), args.rend());
		app.parse(reversed);
	} catch (const CLI::ParseError& ex) {
		return app.exit(ex, out, err) == 0 ? kExitOk : kExitInvalid;
	}

	try {
		if (fixture->parsed()) {
			Fan f;
			if (p1->parsed())
				f = fixture_p1bundle_hirzebruch(e, a, b);
			else if (pb->parsed())
				f = fixture_projective_bundle(s, degrees);
			else
				f = fixture_projective_space(n);
			emit(common, out, json_text(fan_to_json(f)));
			return kExitOk;
		}

		Fan fan = load_fan(common, in);

		if (validate->parsed()) {
			auto errors = validate_fan(fan, intersections);
			json j;
			j["valid"] = errors.empty();
			j["errors"] = errors;
			if (errors.empty()) {
				j["simplicial"] = is_simplicial(fan);
				j["smooth"] = is_smooth(fan);
				j["complete"] = is_complete(fan);
				j["torus_factor"] = has_torus_factor(fan);
			}
			Format f = parse_format(common.format, Format::Json);
			std::string text;
			if (f == Format::Json) {
				text = json_text(j);
			} else {
				text = errors.empty() ? "valid\n" : "invalid\n";
				for (const auto& m : errors)
					text += "  " + m + "\n";
			}
			emit(common, out, text);
			return errors.empty() ? kExitOk : kExitInvalid;
		}

		if (auto errors = validate_fan(fan); !errors.empty())
			throw InputError("invalid fan: " + errors.front());

		if (cohomology->parsed()) {
			std::int64_t bb = bound > 0 ? bound : default_bound(fan);
			auto res = enumerate_support(fan, k, bb, common.jobs);
			Format f = parse_format(common.format, Format::Json);
			if (res.shell_warning)
				err << "warning: support reaches the boundary shell of the search box " << res.bound << "\n";
			if (f == Format::Tsv) {
				emit(common, out, support_tsv(res.entries));
			} else if (f == Format::Pretty) {
				std::ostringstream os;
				int total = 0;
				for (const auto& x : res.entries) {
					os << "  ray " << x.ray << "  degree " << to_string(x.degree) << "  dim " << x.dim << '\n';
					total += x.dim;
				}
				emit(common, out, "H^" + std::to_string(k) + " support (bound " + std::to_string(res.bound) +
				                      "), total dimension " + std::to_string(total) + ":\n" + os.str());
			} else {
				json j;
				j["k"] = k;
				j["bound"] = res.bound;
				j["shell_warning"] = res.shell_warning;
				j["entries"] = support_to_json(res.entries);
				emit(common, out, json_text(j));
			}
			return kExitOk;
		}

		if (rigid->parsed()) {
			auto rep = rigidity_check(fan);
			json j;
			j["rigid_certified"] = rep.rigid_certified;
			j["primitive_collections"] = collections_to_json(rep.collections);
			Format f = parse_format(common.format, Format::Json);
			emit(common, out,
			     f == Format::Json ? json_text(j)
			                       : std::string("rigid_certified: ") + (rep.rigid_certified ? "true" : "false") + "\n");
			return kExitOk;
		}

		if (unobstructed->parsed()) {
			auto rep = unobstructedness_check(fan, bound > 0 ? bound : default_bound(fan));
			json j;
			j["unobstructed_certified"] = rep.certified;
			j["inconclusive"] = rep.inconclusive;
			j["first_order"] = support_to_json(rep.first_order);
			j["second_order"] = support_to_json(rep.second_order);
			if (rep.witness) {
				j["witness"] = {{"ray", rep.witness->ray},
				                {"degree", rep.witness->degree},
				                {"multiplicities", rep.witness_multiplicities}};
			}
			Format f = parse_format(common.format, Format::Json);
			if (f == Format::Json) {
				emit(common, out, json_text(j));
			} else {
				std::string text = std::string("unobstructed_certified: ") + (rep.certified ? "true" : "false") + "\n";
				if (rep.inconclusive)
					text += "inconclusive: no witness found within the search bound\n";
				emit(common, out, text);
			}
			return kExitOk;
		}

		bool tracing = trace_cmd->parsed();
		if (tracing)
			hull.trace = true;
		SolverOptions opts = solver_options(hull, common.jobs);
		Hull h = solve(fan, opts);
		Format f = parse_format(common.format, tracing ? Format::Tsv : Format::Json);
		emit(common, out, hull_text(h, f));
		return kExitOk;
	} catch (const InconsistencyError& ex) {
		err << "error: inconsistency: " << ex.what() << "\n";
		return kExitInconsistent;
	} catch (const InputError& ex) {
		err << "error: " << ex.what() << "\n";
		return kExitInvalid;
	} catch (const std::invalid_argument& ex) {
		err << "error: " << ex.what() << "\n";
		return kExitInvalid;
	} catch (const std::logic_error& ex) {
		err << "error: internal: " << ex.what() << "\n";
		return kExitInconsistent;
	} catch (const std::exception& ex) {
		err << "error: " << ex.what() << "\n";
		return kExitInvalid;
	}
}

}  // namespace toricdef::cli
