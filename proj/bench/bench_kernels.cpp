// Serial reference against the OpenMP kernels on a ladder and a grid.

#include <benchmark/benchmark.h>

#include "hardylab/constants.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/parallel.hpp"
#include "hardylab/profiles.hpp"

using namespace hardylab;

namespace {

const geometry::Domain& ball() {
    static const auto d = geometry::make_domain(geometry::DomainSpec::ball(3, 1.0));
    return d;
}

constants::StudyReport ladder(bool parallel) {
    constants::StudySpec spec;
    spec.ladder = constants::geometric_ladder(1e-2, 1e-9, 16);
    spec.prediction = 2.0;
    spec.parallel = parallel;
    functionals::EvalOptions opts;
    opts.fast_paths = false;
    return constants::convergence_study(spec, [&](double d) {
        return functionals::remainder_ratio_Im_report(ball(), profiles::ball_shell_indicator(ball(), d), 3.5, 1,
                                                      functionals::ImDenominator::Power, 1.5, opts);
    });
}

void BM_LadderSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(ladder(false));
}
void BM_LadderOmp(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(ladder(true));
}

template <bool Parallel>
void BM_Grid(benchmark::State& state) {
    const functionals::FieldParams params{2.5, 2.0, functionals::kNaN};
    const auto grid = functionals::divergence_grid(ball(), params, static_cast<int>(state.range(0)));
    auto f = [&](std::size_t i) { return functionals::div_T_residual(ball(), "sec5", params, grid[i]); };
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(parallel::omp_map<double>(grid.size(), f));
        } else {
            benchmark::DoNotOptimize(parallel::serial_map<double>(grid.size(), f));
        }
    }
}

}  // namespace

BENCHMARK(BM_LadderSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LadderOmp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Grid<false>)->Arg(64)->Arg(1024);
BENCHMARK(BM_Grid<true>)->Arg(64)->Arg(1024);

BENCHMARK_MAIN();
