#include "riskorder/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace riskorder {

using nlohmann::json;

namespace {

// NaN and infinities have no JSON form.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw FormatError(std::string("missing or non-numeric field '") + key + "'");
    return j.at(key).get<double>();
}

}  // namespace

json to_json(const DiscreteDist& d) {
    json atoms = json::array();
    for (const auto& a : d.atoms()) atoms.push_back({{"x", a.value}, {"p", a.prob}});
    return {{"atoms", atoms}};
}

DiscreteDist dist_from_json(const json& j) {
    if (!j.is_object() || !j.contains("atoms") || !j.at("atoms").is_array())
        throw FormatError("distribution must be an object with an 'atoms' array");
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
        if (!a.is_object()) throw FormatError("each atom must be an object with 'x' and 'p'");
        atoms.push_back({require_number(a, "x"), require_number(a, "p")});
    }
    try {
        return DiscreteDist::from_atoms(std::move(atoms));
    } catch (const DistributionError& e) {
        throw FormatError(std::string("invalid distribution: ") + e.what());
    }
}

json to_json(const Utility& u) {
    switch (u.kind()) {
        case UtilityKind::power: return {{"kind", "power"}, {"p", u.parameter()}};
        case UtilityKind::log: return {{"kind", "log"}};
        case UtilityKind::exponential: return {{"kind", "exp"}, {"gamma", u.parameter()}};
    }
    return {};
}

Utility utility_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw FormatError("utility must be an object with a string 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    try {
        if (kind == "power") return Utility::power(require_number(j, "p"));
        if (kind == "log") return Utility::log();
        if (kind == "exp") return Utility::exponential(require_number(j, "gamma"));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid utility: ") + e.what());
    }
    throw FormatError("unknown utility kind '" + kind + "' (expected power, log or exp)");
}

json to_json(const EventTree& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes()) {
        nodes.push_back({{"id", n.id},
                         {"parent", n.parent ? json(*n.parent) : json(nullptr)},
                         {"prob", n.prob},
                         {"price", n.price},
                         {"time", n.time}});
    }
    return {{"horizon", t.horizon()}, {"nodes", nodes}};
}

EventTree tree_from_json(const json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j.at("nodes").is_array())
        throw FormatError("tree must be an object with a 'nodes' array");
    if (!j.contains("horizon") || !j.at("horizon").is_number_integer())
        throw FormatError("tree needs an integer 'horizon'");
    std::vector<TreeNode> nodes;
    for (const auto& n : j.at("nodes")) {
        if (!n.is_object()) throw FormatError("each node must be an object");
        TreeNode node;
        if (!n.contains("id") || !n.at("id").is_number_integer()) throw FormatError("node needs an integer 'id'");
        node.id = n.at("id").get<int>();
        if (n.contains("parent") && !n.at("parent").is_null()) {
            if (!n.at("parent").is_number_integer()) throw FormatError("node 'parent' must be an integer or null");
            node.parent = n.at("parent").get<int>();
        }
        node.prob = require_number(n, "prob");
        node.price = require_number(n, "price");
        if (!n.contains("time") || !n.at("time").is_number_integer())
            throw FormatError("node needs an integer 'time'");
        node.time = n.at("time").get<int>();
        nodes.push_back(node);
    }
    try {
        return EventTree::build(std::move(nodes), j.at("horizon").get<int>());
    } catch (const TreeStructureError& e) {
        throw FormatError(std::string("invalid tree: ") + e.what());
    }
}

json to_json(const OrderVerdict& v) {
    json j = {{"relation", std::string(to_string(v.relation))},
              {"holds", v.holds},
              {"witness_K", v.witness_strike ? json(*v.witness_strike) : json(nullptr)},
              {"min_gap", v.min_gap},
              {"mean_gap", v.mean_gap},
              {"tolerance", v.tolerance},
              {"boundary", v.boundary},
              {"statistical", v.statistical}};
    return j;
}

json to_json(const Coupling& c) {
    json joint = json::array();
    for (const auto& cell : c.joint) joint.push_back({{"x", cell.x}, {"y", cell.y}, {"mass", cell.mass}});
    return {{"shift", c.shift}, {"joint", joint}};
}

json to_json(const EventTree& t, const Solution& s) {
    json nodes = json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        json n = {{"id", t.node(i).id}, {"wealth", s.wealth[i]}};
        if (!t.is_leaf(i)) n["control"] = number_or_null(s.control[i]);
        nodes.push_back(n);
    }
    return {{"control_kind", s.control_kind == ControlKind::fraction ? "fraction" : "amount"},
            {"nodes", nodes},
            {"terminal", to_json(s.terminal)},
            {"value", number_or_null(s.value)},
            {"multiplier", s.multiplier ? number_or_null(*s.multiplier) : json(nullptr)}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
}

std::string dump(const json& j) { return j.dump(2); }

}  // namespace riskorder
