#include <benchmark/benchmark.h>

#include <random>

#include "polyres/linprog.hpp"
#include "polyres/restriction.hpp"
#include "polyres/seqopt.hpp"
#include "support.hpp"

using namespace polyres;

namespace {

BusMatrices tree(int n) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    return build_bus_matrices(testing::random_tree(n, rng, 0.01, 0.01));
}

SplitLoadVector light_load(int n) {
    Eigen::VectorXcd net = Eigen::VectorXcd::Constant(n, Complex(0.05, 0.01));
    return SplitLoadVector::from_net(net);
}

}  // namespace

static void BM_BusMatrices(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto t = testing::random_tree(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(build_bus_matrices(t));
}
BENCHMARK(BM_BusMatrices)->Arg(10)->Arg(50)->Arg(200);

static void BM_FixedPoint(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto m = tree(n);
    const auto s = light_load(n);
    for (auto _ : state) benchmark::DoNotOptimize(fixed_point_solve(m, s));
}
BENCHMARK(BM_FixedPoint)->Arg(10)->Arg(50)->Arg(200);

static void BM_Restriction(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto m = tree(n);
    const auto s = light_load(n);
    const OperatingPoint center{fixed_point_solve(m, s).voltage, s};
    for (auto _ : state) benchmark::DoNotOptimize(build_restriction(m, center, 0.1));
}
BENCHMARK(BM_Restriction)->Arg(10)->Arg(50);

static void BM_RestrictedLp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto m = tree(n);
    const auto p = build_restriction_nominal(m, m.v0, 0.1);
    const auto obj = LinearObjective::max_active_load(n);
    const auto box = testing::active_box(n, 35.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve(p, obj, box));
}
BENCHMARK(BM_RestrictedLp)->Arg(2)->Arg(10)->Arg(30);

static void BM_SeqOptThreeNode(benchmark::State& state) {
    const auto m = build_bus_matrices(testing::three_node());
    const auto obj = LinearObjective::max_active_load(2);
    const auto box = testing::active_box(2, 35.0);
    SeqOptConfig cfg;
    cfg.epsilon = 0.01;
    for (auto _ : state) benchmark::DoNotOptimize(run(m, OperatingPoint::nominal(2, m.v0), obj, box, cfg));
}
BENCHMARK(BM_SeqOptThreeNode);

BENCHMARK_MAIN();
