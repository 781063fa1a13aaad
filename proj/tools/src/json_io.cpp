#include "toricdef_cli/json_io.hpp"

#include <algorithm>
#include <sstream>

namespace toricdef::cli {

namespace {

std::string where(const std::string& text, std::size_t byte)
{
	std::size_t line = 1, col = 1;
	for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
		if (text[i] == '\n') {
			++line;
			col = 1;
		} else {
			++col;
		}
	}
	return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

IntVec int_vector(const json& j, const std::string& field)
{
	if (!j.is_array())
		throw InputError("field '" + field + "': expected an array of integers");
	IntVec v;
	for (std::size_t i = 0; i < j.size(); ++i) {
		if (!j[i].is_number_integer())
			throw InputError("field '" + field + "[" + std::to_string(i) + "]': expected an integer");
		v.push_back(j[i].get<std::int64_t>());
	}
	return v;
}

json rational_json(const Rational& q)
{
	return to_string(q);
}

std::string cone_name(const Hull& h, int c)
{
	return "c" + std::to_string(h.cone_labels.at(c));
}

}  // namespace

json fan_to_json(const Fan& fan)
{
	json j;
	j["rank"] = fan.rank;
	j["rays"] = json::array();
	for (const auto& r : fan.rays)
		j["rays"].push_back(r);
	j["max_cones"] = json::array();
	for (const auto& c : fan.max_cones)
		j["max_cones"].push_back(c);
	return j;
}

Fan fan_from_json(const json& j)
{
	if (!j.is_object())
		throw InputError("fan: expected a JSON object");
	for (const char* key : {"rank", "rays", "max_cones"})
		if (!j.contains(key))
			throw InputError(std::string("fan: missing field '") + key + "'");
	if (!j["rank"].is_number_integer() || j["rank"].get<std::int64_t>() < 1)
		throw InputError("field 'rank': expected a positive integer");
	Fan f;
	f.rank = j["rank"].get<int>();
	if (!j["rays"].is_array())
		throw InputError("field 'rays': expected an array");
	for (std::size_t i = 0; i < j["rays"].size(); ++i)
		f.rays.push_back(int_vector(j["rays"][i], "rays[" + std::to_string(i) + "]"));
	if (!j["max_cones"].is_array())
		throw InputError("field 'max_cones': expected an array");
	for (std::size_t i = 0; i < j["max_cones"].size(); ++i) {
		Cone c;
		for (auto x : int_vector(j["max_cones"][i], "max_cones[" + std::to_string(i) + "]"))
			c.push_back(static_cast<int>(x));
		f.max_cones.push_back(std::move(c));
	}
	return f;
}

Fan parse_fan(const std::string& text)
{
	json j;
	try {
		j = json::parse(text);
	} catch (const json::parse_error& e) {
		std::string msg = e.what();
		throw InputError("malformed JSON at " + where(text, e.byte ? e.byte - 1 : 0) + ": " +
		                 msg.substr(msg.find(':') + 2));
	}
	return fan_from_json(j);
}

json support_to_json(const std::vector<SupportEntry>& entries)
{
	json a = json::array();
	for (const auto& e : entries)
		a.push_back({{"ray", e.ray}, {"degree", e.degree}, {"dim", e.dim}});
	return a;
}

json polynomial_to_json(const TruncPoly& f)
{
	json a = json::array();
	for (const auto& [w, c] : f.terms())
		a.push_back({{"monomial", w}, {"coeff", rational_json(c)}});
	return a;
}

json collections_to_json(const std::vector<PrimitiveCollection>& pcs)
{
	json a = json::array();
	for (const auto& pc : pcs) {
		json coeffs = json::object();
		for (const auto& [r, c] : pc.coefficients)
			coeffs[std::to_string(r)] = rational_json(c);
		a.push_back({{"rays", pc.rays},
		             {"relation_cone", pc.relation_cone},
		             {"coefficients", coeffs},
		             {"degree", rational_json(pc.degree)}});
	}
	return a;
}

json hull_to_json(const Hull& h, bool with_trace)
{
	json j;
	j["parameters"] = json::array();
	for (std::size_t l = 0; l < h.parameters.size(); ++l)
		j["parameters"].push_back(
		    {{"index", l + 1}, {"ray", h.parameters[l].ray}, {"degree", h.parameters[l].degree}});
	j["obstructions"] = json::array();
	for (std::size_t l = 0; l < h.obstructions.size(); ++l)
		j["obstructions"].push_back({{"ray", h.obstruction_directions[l].ray},
		                             {"degree", h.obstruction_directions[l].degree},
		                             {"polynomial", polynomial_to_json(h.obstructions[l])}});
	j["order"] = h.order;
	j["exact"] = h.exact;
	if (with_trace) {
		json rows = json::array();
		for (const auto& r : h.trace) {
			json def = json::object(), obs = json::object(), gam = json::object();
			for (const auto& [c, x] : r.deformation)
				def[cone_name(h, c)] = rational_json(x);
			for (const auto& [t, x] : r.obstruction)
				obs[cone_name(h, t[0]) + cone_name(h, t[1])] = rational_json(x);
			for (const auto& [l, x] : r.gamma)
				gam[std::to_string(l + 1)] = rational_json(x);
			rows.push_back({{"order", r.order},
			                {"monomial", r.w},
			                {"ray", r.ray},
			                {"deformation", def},
			                {"obstruction", obs},
			                {"gamma", gam}});
		}
		j["trace"] = rows;
	}
	return j;
}

std::string trace_tsv(const Hull& h)
{
	std::ostringstream os;
	std::vector<int> cones(h.cone_labels.size());
	for (std::size_t i = 0; i < cones.size(); ++i)
		cones[i] = static_cast<int>(i);
	int current = -1;
	for (const auto& r : h.trace) {
		if (r.order != current) {
			current = r.order;
			if (current != h.trace.front().order)
				os << '\n';
			os << "# order " << current << '\n' << "term";
			for (int c : cones)
				os << '\t' << cone_name(h, c);
			for (const auto& p : h.pair_labels)
				os << '\t' << cone_name(h, p[0]) << cone_name(h, p[1]);
			os << "\tgamma\n";
		}
		os << monomial_string(r.w) << "*f_" << r.ray;
		for (int c : cones) {
			auto it = r.deformation.find(c);
			os << '\t' << (it == r.deformation.end() ? "0" : to_string(it->second));
		}
		for (const auto& p : h.pair_labels) {
			auto it = r.obstruction.find(p);
			os << '\t' << (it == r.obstruction.end() ? "0" : to_string(it->second));
		}
		os << '\t';
		if (r.gamma.empty())
			os << '0';
		bool first = true;
		for (const auto& [l, x] : r.gamma) {
			os << (first ? "" : ";") << 'g' << (l + 1) << '=' << to_string(x);
			first = false;
		}
		os << '\n';
	}
	return os.str();
}

}  // namespace toricdef::cli
