#include <benchmark/benchmark.h>

#include <vector>

#include "bdrelay/discrete_capacity.hpp"
#include "bdrelay/fading_montecarlo.hpp"
#include "bdrelay/lp_optimizer.hpp"
#include "discrete_fixtures.hpp"

using namespace bdrelay;

namespace {

Execution mode(const benchmark::State& state)
{
    return state.range(0) ? Execution::Parallel : Execution::Serial;
}

void label(benchmark::State& state)
{
    state.SetLabel(state.range(0) ? "parallel x" + std::to_string(max_threads()) : "serial");
}

void BM_MonteCarlo(benchmark::State& state)
{
    FadingConfig c;
    c.seed = 1;
    c.samples = 2000;
    c.power = db_to_linear(10);
    const std::vector<Protocol> ps{Protocol::DT, Protocol::MABC, Protocol::TDBC, Protocol::HBC};
    for (auto _ : state) benchmark::DoNotOptimize(montecarlo_sum_rates(c, ps, mode(state)));
    state.SetItemsProcessed(state.iterations() * c.samples);
    label(state);
}

void BM_DiscreteGrid(benchmark::State& state)
{
    const auto ch = fixtures::quantized_bpsk(2.0, 0.6, 1.4);
    const PhaseSchedule s(Protocol::MABC, {0.5, 0.5});
    const InputGrid grid(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(mabc_capacity_region(ch, s, grid, mode(state)));
    label(state);
}

void BM_OptimizedRegion(benchmark::State& state)
{
    const auto t = gaussian_mi_table(ChannelGains::from_db(-7, 0, 5, 10), Protocol::HBC);
    for (auto _ : state) benchmark::DoNotOptimize(optimized_region(Protocol::HBC, BoundKind::Inner, t, 401, mode(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiscreteGrid)->Args({0, 20})->Args({1, 20})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizedRegion)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
