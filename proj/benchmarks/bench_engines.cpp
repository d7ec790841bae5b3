#include <benchmark/benchmark.h>

#include <cstddef>
#include <cstdint>

#include "critical_hawkes/hawkes_engine.hpp"
#include "critical_hawkes/params.hpp"
#include "critical_hawkes/rescale.hpp"
#include "critical_hawkes/rng.hpp"
#include "critical_hawkes/sde_engine.hpp"

namespace ch = critical_hawkes;

namespace {

ch::ModelConfig desk_config(std::size_t n_agents) {
    ch::ModelConfig config;
    config.n_agents = n_agents;
    config.horizon_macro = 1.0;
    config.grid_points = 512;
    config.intensity = ch::saturating_exponential(1.0, 1.0);
    config.agents = ch::AgentLaw::homogeneous(2.0, 0.5);
    config.signal = {1.0, 1.0, 1.0, 1.0};
    return config;
}

void BM_SimulatePathHomogeneous(benchmark::State& state) {
    const auto config = desk_config(static_cast<std::size_t>(state.range(0)));
    ch::EngineOptions options;
    options.record_events = false;
    std::uint64_t events = 0;
    std::uint64_t replica = 0;
    for (auto _ : state) {
        const auto record =
            ch::simulate_path(config, ch::replica_seed(8811, replica++), options);
        events += record.n_events;
        benchmark::DoNotOptimize(record.m_plus.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(events));
}

void BM_SimulatePathInhomogeneous(benchmark::State& state) {
    auto config = desk_config(static_cast<std::size_t>(state.range(0)));
    config.agents = ch::AgentLaw::inhomogeneous({{1.5, 0.25, 0.5}, {2.5, 0.75, 0.5}});
    ch::EngineOptions options;
    options.record_events = false;
    std::uint64_t events = 0;
    std::uint64_t replica = 0;
    for (auto _ : state) {
        const auto record =
            ch::simulate_path(config, ch::replica_seed(8812, replica++), options);
        events += record.n_events;
        benchmark::DoNotOptimize(record.m_plus.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(events));
}

void BM_SimulatePathSelfExciting(benchmark::State& state) {
    auto config = desk_config(static_cast<std::size_t>(state.range(0)));
    config.agents = ch::AgentLaw::self_exciting(2.0, 0.5, 1.0);
    ch::EngineOptions options;
    options.record_events = false;
    options.window_event_cap = static_cast<std::size_t>(state.range(1));
    std::uint64_t events = 0;
    std::uint64_t replica = 0;
    for (auto _ : state) {
        const auto record =
            ch::simulate_path(config, ch::replica_seed(8813, replica++), options);
        events += record.n_events;
        benchmark::DoNotOptimize(record.m_plus.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(events));
}

void BM_RescaleToMacro(benchmark::State& state) {
    const auto config = desk_config(static_cast<std::size_t>(state.range(0)));
    ch::EngineOptions options;
    options.record_events = false;
    const auto record = ch::simulate_path(config, ch::replica_seed(8814, 0), options);
    for (auto _ : state) {
        const ch::MacroPath macro = ch::to_macro(record);
        benchmark::DoNotOptimize(macro.y.data());
    }
}

void BM_SimulateSde(benchmark::State& state) {
    const auto limit = ch::limit_params(desk_config(1000));
    const auto scheme = ch::scheme_for(ch::SdeSchemeKind::FullTruncationEuler, 1.0,
                                       static_cast<std::uint64_t>(state.range(0)));
    std::uint64_t replica = 0;
    for (auto _ : state) {
        const ch::MacroPath path = ch::simulate_sde(limit, scheme, ch::replica_seed(8815, replica++));
        benchmark::DoNotOptimize(path.y.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SimulatePathHomogeneous)->Arg(100)->Arg(1000)->Arg(10000)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulatePathInhomogeneous)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulatePathSelfExciting)
    ->Args({1000, 64})
    ->Args({1000, 1024})
    ->Args({10000, 1024})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RescaleToMacro)->Arg(1000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SimulateSde)->Arg(1 << 14)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
