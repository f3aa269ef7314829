// Serial reference vs OpenMP kernel for the method-of-lines right-hand side,
// plus a full short RK4 run in each mode.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "zfk/pde.hpp"

namespace {

std::vector<double> front_field(std::size_t n)
{
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = 0.5 * (1.0 + std::tanh((static_cast<double>(i) - n / 2.0) / 40.0));
    return u;
}

void BM_rhs_serial(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto u = front_field(n);
    std::vector<double> du(n);
    for (auto _ : state) {
        zfk::pde_rhs_serial(u.data(), du.data(), n, 0.01, 0.05, zfk::BoundaryKind::fixed);
        benchmark::DoNotOptimize(du.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_rhs_parallel(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto u = front_field(n);
    std::vector<double> du(n);
    for (auto _ : state) {
        zfk::pde_rhs_parallel(u.data(), du.data(), n, 0.01, 0.05, zfk::BoundaryKind::fixed);
        benchmark::DoNotOptimize(du.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_run(benchmark::State& state)
{
    zfk::PdeConfig cfg;
    cfg.N = 1001;
    cfg.T = 0.25;
    cfg.parallel = state.range(0) != 0;
    for (auto _ : state) {
        auto res = zfk::pde_run(cfg, 0.05, zfk::step_initial_data(0.0));
        benchmark::DoNotOptimize(res.theta.data());
    }
}

} // namespace

BENCHMARK(BM_rhs_serial)->Arg(1001)->Arg(10001)->Arg(100001);
BENCHMARK(BM_rhs_parallel)->Arg(1001)->Arg(10001)->Arg(100001);
BENCHMARK(BM_run)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
