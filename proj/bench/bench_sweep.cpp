// Serial reference vs OpenMP batch evaluation on the workloads the sweep
// harness generates: a randomized five-bus demand study and a two-bus
// worst-case grid.

#include "secdispatch/experiments.hpp"
#include "secdispatch/sweep_parallel.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>

using namespace secdispatch;

namespace {

const DispatchModel& model(const char* name)
{
    static const DispatchModel two(load_network_file(std::string(SECDISPATCH_CASE_DIR) + "/2bus.json"));
    static const DispatchModel five(load_network_file(std::string(SECDISPATCH_CASE_DIR) + "/pjm5.json"));
    return std::string(name) == "2bus" ? two : five;
}

std::vector<InputInstance> random_study_batch(std::size_t count)
{
    const auto& net = model("pjm5").network();
    const auto rs = regions_of(net);
    std::vector<InputInstance> batch;
    for (std::size_t i = 0; i < count; ++i) {
        auto rng = point_rng(2024, i);
        InputInstance inst{std::vector<double>(net.n(), kUnlimited), std::vector<double>(net.n(), 0.0)};
        const auto share = sample_simplex(rng, rs.expensive.size(), 50.0 * static_cast<double>(i % 21));
        for (std::size_t k = 0; k < rs.expensive.size(); ++k) inst.demand[rs.expensive[k]] = share[k];
        batch.push_back(std::move(inst));
    }
    return batch;
}

std::vector<InputInstance> grid_batch()
{
    std::vector<InputInstance> batch;
    for (int i = 0; i <= 30; ++i) {
        for (int j = 0; j <= 30; ++j) batch.push_back({{kUnlimited, kUnlimited}, {10.0 * i, 10.0 * j}});
    }
    return batch;
}

template <Execution E>
void BM_RandomStudy(benchmark::State& state)
{
    const auto batch = random_study_batch(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto out = evaluate(model("pjm5"), batch, E);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = E == Execution::Parallel ? max_threads() : 1;
}

template <Execution E>
void BM_TwoBusGrid(benchmark::State& state)
{
    const auto batch = grid_batch();
    for (auto _ : state) {
        auto out = evaluate(model("2bus"), batch, E);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(batch.size()));
}

}  // namespace

BENCHMARK(BM_RandomStudy<Execution::Serial>)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RandomStudy<Execution::Parallel>)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TwoBusGrid<Execution::Serial>)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TwoBusGrid<Execution::Parallel>)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
