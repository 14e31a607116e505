#include <benchmark/benchmark.h>

#include <random>

#include "riskorder/iid_model.hpp"
#include "riskorder/order.hpp"
#include "riskorder/solver.hpp"
#include "riskorder/tree_market.hpp"

namespace {

using namespace riskorder;

// Full binomial tree of the given depth with up/down factors 1.3 / 0.8.
EventTree binomial_tree(int depth) {
    std::vector<TreeNode> nodes{{0, std::nullopt, 1.0, 1.0, 0}};
    std::vector<std::size_t> frontier{0};
    int next = 1;
    for (int t = 0; t < depth; ++t) {
        std::vector<std::size_t> grown;
        for (auto idx : frontier) {
            const auto parent = nodes[idx];
            nodes.push_back({next++, parent.id, 0.55, parent.price * 1.3, t + 1});
            grown.push_back(nodes.size() - 1);
            nodes.push_back({next++, parent.id, 0.45, parent.price * 0.8, t + 1});
            grown.push_back(nodes.size() - 1);
        }
        frontier = std::move(grown);
    }
    return EventTree::build(std::move(nodes), depth);
}

DiscreteDist random_dist(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Atom> atoms;
    for (int i = 0; i < n; ++i) atoms.push_back({10.0 * u(rng) - 5.0, 0.05 + u(rng)});
    return DiscreteDist::from_weights(atoms);
}

void BM_SolveDpPower(benchmark::State& state) {
    const auto tree = binomial_tree(static_cast<int>(state.range(0)));
    const auto u = Utility::power(0.9);
    for (auto _ : state) benchmark::DoNotOptimize(solve_dp(tree, u, 1.0));
    state.SetComplexityN(static_cast<long>(tree.size()));
}
BENCHMARK(BM_SolveDpPower)->DenseRange(4, 12, 4)->Complexity();

void BM_SolveCompleteDual(benchmark::State& state) {
    const auto tree = binomial_tree(static_cast<int>(state.range(0)));
    const auto u = Utility::power(0.9);
    for (auto _ : state) benchmark::DoNotOptimize(solve_complete_dual(tree, u, 1.0));
}
BENCHMARK(BM_SolveCompleteDual)->DenseRange(4, 12, 4);

void BM_CheckMc(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const int n = static_cast<int>(state.range(0));
    const auto x = random_dist(rng, n), y = random_dist(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(check_mc(x, y));
}
BENCHMARK(BM_CheckMc)->RangeMultiplier(4)->Range(16, 4096);

void BM_StrassenCoupling(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const auto x = random_dist(rng, static_cast<int>(state.range(0)));
    const auto y = scale_center(x, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(strassen_coupling(x, y));
}
BENCHMARK(BM_StrassenCoupling)->DenseRange(4, 12, 4);

void BM_EulerProductEnumeration(benchmark::State& state) {
    const IncrementDist inc(DiscreteDist::from_atoms({{0.1, 0.3}, {0.0, 0.3}, {-0.08, 0.4}}));
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(euler_product_dist(inc, 1.5, n));
}
BENCHMARK(BM_EulerProductEnumeration)->DenseRange(4, 12, 4);

void BM_McProductSample(benchmark::State& state) {
    const IncrementDist inc(DiscreteDist::from_atoms({{0.1, 0.5}, {-0.08, 0.5}}));
    const auto workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mc_product_sample(inc, 1.5, 50, 100000, 7, workers));
}
BENCHMARK(BM_McProductSample)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
