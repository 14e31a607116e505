#include "riskorder/tree_market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace riskorder {

namespace {

constexpr double kBranchSumTolerance = 1e-12;

bool is_zero_return(double r) { return std::abs(r) <= kZeroReturnTolerance; }

}  // namespace

EventTree EventTree::build(std::vector<TreeNode> nodes, int horizon) {
    if (horizon < 0) throw TreeStructureError("horizon must be non-negative");
    if (nodes.empty()) throw TreeStructureError("tree has no nodes");

    std::stable_sort(nodes.begin(), nodes.end(),
                     [](const TreeNode& a, const TreeNode& b) { return a.time < b.time; });

    EventTree t;
    t.horizon_ = horizon;
    t.nodes_ = std::move(nodes);
    const std::size_t n = t.nodes_.size();
    t.children_.resize(n);
    t.parent_.resize(n);
    t.path_prob_.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& nd = t.nodes_[i];
        if (!t.index_.emplace(nd.id, i).second)
            throw TreeStructureError("duplicate node id " + std::to_string(nd.id));
        if (!std::isfinite(nd.price) || nd.price <= 0.0)
            throw TreeStructureError("node " + std::to_string(nd.id) + " has non-positive price");
        if (!std::isfinite(nd.prob) || nd.prob <= 0.0 || nd.prob > 1.0)
            throw TreeStructureError("node " + std::to_string(nd.id) +
                                     " has branch probability outside (0, 1]");
    }

    std::size_t roots = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nd = t.nodes_[i];
        if (!nd.parent) {
            ++roots;
            if (i != 0 || nd.time != 0)
                throw TreeStructureError("root node must be the unique node at time 0");
            if (std::abs(nd.prob - 1.0) > kBranchSumTolerance)
                throw TreeStructureError("root node must carry probability 1");
            t.path_prob_[i] = 1.0;
            continue;
        }
        auto it = t.index_.find(*nd.parent);
        if (it == t.index_.end())
            throw TreeStructureError("node " + std::to_string(nd.id) + " refers to unknown parent " +
                                     std::to_string(*nd.parent));
        const std::size_t p = it->second;
        if (t.nodes_[p].time + 1 != nd.time)
            throw TreeStructureError("node " + std::to_string(nd.id) +
                                     " is not one period after its parent");
        t.parent_[i] = p;
        t.children_[p].push_back(i);
        // Parents precede children in time order, so the parent's path
        // probability is already known.
        t.path_prob_[i] = t.path_prob_[p] * nd.prob;
    }
    if (roots != 1) throw TreeStructureError("tree must have exactly one root");

    for (std::size_t i = 0; i < n; ++i) {
        const auto& nd = t.nodes_[i];
        if (t.children_[i].empty()) {
            if (nd.time != horizon)
                throw TreeStructureError("leaf " + std::to_string(nd.id) + " ends before the horizon");
            t.leaves_.push_back(i);
            continue;
        }
        if (nd.time >= horizon)
            throw TreeStructureError("node " + std::to_string(nd.id) + " extends past the horizon");
        double sum = 0.0;
        for (auto c : t.children_[i]) sum += t.nodes_[c].prob;
        if (std::abs(sum - 1.0) > kBranchSumTolerance)
            throw TreeStructureError("branch probabilities of node " + std::to_string(nd.id) +
                                     " do not sum to 1");
    }
    return t;
}

std::size_t EventTree::index_of(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw TreeStructureError("unknown node id " + std::to_string(id));
    return it->second;
}

double EventTree::step_return(std::size_t child) const {
    const auto p = parent_.at(child);
    if (!p) return 0.0;
    return nodes_[child].price / nodes_[*p].price - 1.0;
}

ValidationReport validate(const EventTree& tree) {
    ValidationReport report;
    for (std::size_t i = 0; i < tree.size(); ++i) {
        auto kids = tree.children(i);
        if (kids.empty()) continue;
        double lo = 0.0, hi = 0.0;
        bool all_zero = true;
        for (auto c : kids) {
            const double r = tree.step_return(c);
            if (!is_zero_return(r)) all_zero = false;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (all_zero) continue;
        if (!(lo < -kZeroReturnTolerance && hi > kZeroReturnTolerance)) {
            std::ostringstream os;
            os << "one-step arbitrage: returns range over [" << lo << ", " << hi << "]";
            if (kids.size() == 1) os << " at a single-child node";
            report.issues.push_back({tree.node(i).id, os.str()});
        }
    }
    return report;
}

void require_arbitrage_free(const EventTree& tree) {
    const auto report = validate(tree);
    if (report.ok()) return;
    std::ostringstream os;
    os << "market admits arbitrage at node(s)";
    for (const auto& issue : report.issues) os << ' ' << issue.id;
    throw ArbitrageError(os.str());
}

EmmDensity unique_emm(const EventTree& tree) {
    require_arbitrage_free(tree);
    EmmDensity out;
    out.branch_q.assign(tree.size(), 1.0);
    out.density.assign(tree.size(), 1.0);

    for (std::size_t i = 0; i < tree.size(); ++i) {
        auto kids = tree.children(i);
        const int id = tree.node(i).id;
        if (kids.size() >= 3)
            throw IncompleteMarket("node " + std::to_string(id) + " has " +
                                   std::to_string(kids.size()) + " successors");
        if (kids.size() == 2) {
            const double s = tree.node(i).price;
            const double su = tree.node(kids[0]).price;
            const double sd = tree.node(kids[1]).price;
            if (su == sd)
                throw IncompleteMarket("node " + std::to_string(id) +
                                       " has two successors with the same price");
            const double q = (s - sd) / (su - sd);
            if (!(q > 0.0 && q < 1.0))
                throw IncompleteMarket("no martingale weight in (0, 1) at node " + std::to_string(id));
            out.branch_q[kids[0]] = q;
            out.branch_q[kids[1]] = 1.0 - q;
        }
        // A single child has zero return (validated) and keeps q = 1.
    }
    for (std::size_t i = 1; i < tree.size(); ++i) {
        const std::size_t p = *tree.parent(i);
        out.density[i] = out.density[p] * out.branch_q[i] / tree.node(i).prob;
    }
    return out;
}

ProbabilityConvention convention_from_string(const std::string& s) {
    if (s == "normalized") return ProbabilityConvention::normalized;
    if (s == "subtractive") return ProbabilityConvention::subtractive;
    throw std::invalid_argument("unknown probability convention '" + s +
                                "' (expected normalized or subtractive)");
}

std::string to_string(ProbabilityConvention c) {
    return c == ProbabilityConvention::normalized ? "normalized" : "subtractive";
}

EventTree build_two_period_example(double eps, double alpha, double K, ProbabilityConvention convention) {
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in [0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(K > 1.0) || !std::isfinite(K)) throw std::invalid_argument("K must exceed 1");

    double p_up = 0.6, p_ins = eps, p_down = 0.4;
    if (convention == ProbabilityConvention::normalized) {
        p_up /= 1.0 + eps;
        p_ins /= 1.0 + eps;
        p_down /= 1.0 + eps;
    } else {
        if (eps >= 0.4) throw std::invalid_argument("subtractive convention requires eps < 0.4");
        p_down -= eps;
    }

    std::vector<TreeNode> nodes{
        {0, std::nullopt, 1.0, 1.0, 0},
        {1, 0, p_up, 2.0, 1},
        {3, 0, p_down, 0.5, 1},
        {4, 1, 1.0, 2.0, 2},
        {7, 3, 1.0, 0.5, 2},
    };
    if (eps > 0.0) {
        nodes.push_back({2, 0, p_ins, 0.5, 1});
        nodes.push_back({5, 2, 1.0 - alpha, 0.5 * K, 2});
        nodes.push_back({6, 2, alpha, 0.25, 2});
    }
    return EventTree::build(std::move(nodes), 2);
}

EventTree perturb(const EventTree& tree, int target_time, const NodeSelector& selector, double eps,
                  double alpha, double K) {
    if (target_time != tree.horizon() - 1 || target_time < 0)
        throw std::invalid_argument("perturbation must target the last trading date (time " +
                                    std::to_string(tree.horizon() - 1) + ")");
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in [0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(K > 1.0) || !std::isfinite(K)) throw std::invalid_argument("K must exceed 1");

    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < tree.size(); ++i)
        if (tree.node(i).time == target_time && selector(tree.node(i))) selected.push_back(i);
    if (selected.empty()) throw std::invalid_argument("node selector matches no node at the target time");

    std::vector<TreeNode> nodes(tree.nodes().begin(), tree.nodes().end());
    if (eps == 0.0) return EventTree::build(std::move(nodes), tree.horizon());

    int next_id = 0;
    for (const auto& nd : nodes) next_id = std::max(next_id, nd.id + 1);

    for (auto i : selected) {
        const TreeNode original = nodes[i];
        // The coin is tossed on the branch into the node, so the node needs a parent.
        if (!original.parent) throw std::invalid_argument("cannot perturb the root node");
        const double c = original.price;
        nodes[i].prob = original.prob * (1.0 - eps);

        const int heads_id = next_id++;
        nodes.push_back({heads_id, original.parent, original.prob * eps, c, target_time});
        nodes.push_back({next_id++, heads_id, 1.0 - alpha, c * K, target_time + 1});
        nodes.push_back({next_id++, heads_id, alpha, c / 2.0, target_time + 1});
    }
    return EventTree::build(std::move(nodes), tree.horizon());
}

}  // namespace riskorder
