#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "riskorder/distribution.hpp"
#include "riskorder/order.hpp"
#include "riskorder/solver.hpp"
#include "riskorder/tree_market.hpp"
#include "riskorder/utility.hpp"

namespace riskorder {

/// Malformed or semantically invalid model file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {"atoms":[{"x":<number>,"p":<number>},...]}
nlohmann::json to_json(const DiscreteDist& d);
DiscreteDist dist_from_json(const nlohmann::json& j);

// {"kind":"power","p":0.9} | {"kind":"log"} | {"kind":"exp","gamma":1.5}
nlohmann::json to_json(const Utility& u);
Utility utility_from_json(const nlohmann::json& j);

// {"horizon":T,"nodes":[{"id":0,"parent":null,"prob":1,"price":1,"time":0},...]}
nlohmann::json to_json(const EventTree& t);
EventTree tree_from_json(const nlohmann::json& j);

nlohmann::json to_json(const OrderVerdict& v);
nlohmann::json to_json(const Coupling& c);
nlohmann::json to_json(const EventTree& t, const Solution& s);

/// Reads and parses a JSON file; throws FormatError on I/O or syntax errors.
nlohmann::json read_json_file(const std::string& path);

/// Pretty-printed JSON text. Numbers use the shortest representation that
/// parses back to the identical double.
std::string dump(const nlohmann::json& j);

}  // namespace riskorder
