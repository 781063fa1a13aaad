#pragma once

#include "toricdef/fan.hpp"
#include "toricdef/solver.hpp"
#include "toricdef/vcomplex.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace toricdef::cli {

using json = nlohmann::ordered_json;

// Malformed input; the message carries line/field context.
class InputError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

json fan_to_json(const Fan& fan);
Fan fan_from_json(const json& j);
Fan parse_fan(const std::string& text);  // parse + schema check

json support_to_json(const std::vector<SupportEntry>& entries);
json polynomial_to_json(const TruncPoly& f);
json hull_to_json(const Hull& h, bool with_trace = false);
json collections_to_json(const std::vector<PrimitiveCollection>& pcs);

// One table per order, tab separated, header line first.
std::string trace_tsv(const Hull& h);

}  // namespace toricdef::cli
