#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace riskorder {

class TreeStructureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ArbitrageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IncompleteMarket : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One node of an event tree as it appears in the JSON model format.
struct TreeNode {
    int id = 0;
    std::optional<int> parent;
    double prob = 1.0;   ///< conditional probability of reaching this node from its parent
    double price = 1.0;  ///< risky-asset price; the riskless asset is the numeraire
    int time = 0;
};

/// Returns with magnitude below this are treated as zero.
inline constexpr double kZeroReturnTolerance = 1e-14;

/**
 * Finite multi-period market with one riskless asset (constant 1) and one
 * risky asset, given as a rooted tree.
 *
 * Nodes are stored in breadth-first order (by time, then input order), so
 * index 0 is the root and iterating indices backwards visits children
 * before parents.
 */
class EventTree {
public:
    /// Checks structure: one root at time 0, unique ids, known parents,
    /// child time = parent time + 1, leaves at the horizon, branch
    /// probabilities in (0, 1] summing to one per node, positive prices.
    static EventTree build(std::vector<TreeNode> nodes, int horizon);

    int horizon() const noexcept { return horizon_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const TreeNode& node(std::size_t idx) const { return nodes_.at(idx); }
    std::span<const TreeNode> nodes() const noexcept { return nodes_; }
    std::span<const std::size_t> children(std::size_t idx) const { return children_.at(idx); }
    std::optional<std::size_t> parent(std::size_t idx) const { return parent_.at(idx); }
    bool is_leaf(std::size_t idx) const { return children_.at(idx).empty(); }
    std::size_t index_of(int id) const;

    /// Leaf indices in storage order.
    const std::vector<std::size_t>& leaves() const noexcept { return leaves_; }

    /// Unconditional probability of reaching the node.
    double path_probability(std::size_t idx) const { return path_prob_.at(idx); }

    /// One-step arithmetic return S_child / S_node - 1.
    double step_return(std::size_t child) const;

private:
    EventTree() = default;

    int horizon_ = 0;
    std::vector<TreeNode> nodes_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::optional<std::size_t>> parent_;
    std::vector<std::size_t> leaves_;
    std::vector<double> path_prob_;
    std::unordered_map<int, std::size_t> index_;
};

struct NodeIssue {
    int id;
    std::string message;
};

struct ValidationReport {
    std::vector<NodeIssue> issues;
    bool ok() const noexcept { return issues.empty(); }
};

/// One-step no-arbitrage at every node: either all child returns are zero
/// or the smallest is negative and the largest positive.
ValidationReport validate(const EventTree& tree);

/// Throws ArbitrageError listing the offending nodes if validate fails.
void require_arbitrage_free(const EventTree& tree);

/// Density of the unique equivalent martingale measure of a complete tree.
struct EmmDensity {
    std::vector<double> branch_q;  ///< per node: Q-probability of the branch from its parent
    std::vector<double> density;   ///< per node: dQ/dP restricted to the node's path

    double leaf_density(std::size_t idx) const { return density.at(idx); }
};

/// Solves q * S_up + (1 - q) * S_down = S_node at every node. Throws
/// IncompleteMarket when some node has three or more children or two
/// children sharing a price, since the one-step measure is then not unique.
EmmDensity unique_emm(const EventTree& tree);

enum class ProbabilityConvention {
    normalized,   ///< root branches (0.6, eps, 0.4) / (1 + eps)
    subtractive,  ///< root branches (0.6, eps, 0.4 - eps)
};

ProbabilityConvention convention_from_string(const std::string& s);
std::string to_string(ProbabilityConvention c);

/**
 * Two-period counterexample market. From S_0 = 1 the price moves to 2 or
 * 0.5 and then stays constant; a third first-period branch of probability
 * eps also lands at 0.5 and then moves to 0.5 * K with probability
 * 1 - alpha or to 0.25 with probability alpha.
 *
 * eps = 0 drops the inserted branch and yields the complete binomial model.
 */
EventTree build_two_period_example(double eps, double alpha, double K,
                              ProbabilityConvention convention = ProbabilityConvention::normalized);

using NodeSelector = std::function<bool(const TreeNode&)>;

/**
 * Splits every selected node at time horizon - 1 with an independent coin:
 * tails (probability 1 - eps) keeps the original last period, heads
 * (probability eps) replaces it with a move from the node price c to c * K
 * with probability 1 - alpha or to c / 2 with probability alpha.
 *
 * New nodes get fresh ids above the current maximum. eps = 0 returns the
 * tree unchanged.
 */
EventTree perturb(const EventTree& tree, int target_time, const NodeSelector& selector,
                  double eps, double alpha, double K);

}  // namespace riskorder
