#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ris/ris.hpp"

using namespace ris;

namespace {

constexpr double kFrequency = 3e9;
const double kLambda = kSpeedOfLight / kFrequency;
const double kK = 2.0 * kPi / kLambda;

Scene make_scene(std::size_t side) {
    Scene s;
    s.frequency_hz = kFrequency;
    s.transmitter = make_dipole({-3.0 * kLambda, 4.0 * kLambda, 0.0}, kLambda / 4.0, kLambda / 2000.0);
    s.receiver = make_dipole({3.0 * kLambda, 4.0 * kLambda, 0.0}, kLambda / 4.0, kLambda / 2000.0);
    GridSpec g;
    g.rows = side;
    g.cols = side;
    g.spacing = kLambda / 8.0;
    g.half_length = kLambda / 4.0;
    g.radius = kLambda / 2000.0;
    s.surface = build_grid(g);
    return s;
}

std::vector<Complex> e1_points() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> logr(-3.0, 2.5), theta(-3.0, 3.0);
    std::vector<Complex> pts(1024);
    for (auto& c : pts) c = std::polar(std::pow(10.0, logr(rng)), theta(rng));
    return pts;
}

void BM_ExpIntegralE1(benchmark::State& state) {
    const auto pts = e1_points();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(exp_integral_e1(pts[i++ & 1023]));
    }
}
BENCHMARK(BM_ExpIntegralE1);

const PairGeometry kPair{0.3 * kLambda, 0.2 * kLambda, 0.25 * kLambda, 0.2 * kLambda};

void BM_MutualImpedanceClosed(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mutual_impedance_closed(kPair, kK));
}
BENCHMARK(BM_MutualImpedanceClosed);

void BM_MutualImpedanceOracle(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mutual_impedance_oracle(kPair, kK, kDefaultOracleTolerance));
}
BENCHMARK(BM_MutualImpedanceOracle);

void BM_AssembleImpedances(benchmark::State& state) {
    const Scene s = make_scene(static_cast<std::size_t>(state.range(0)));
    AssemblyOptions opts;
    opts.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(assemble_impedances(s, opts));
    state.counters["elements"] = static_cast<double>(s.size());
}
BENCHMARK(BM_AssembleImpedances)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_EndToEnd(benchmark::State& state) {
    const Scene s = make_scene(static_cast<std::size_t>(state.range(0)));
    const ImpedanceSet imps = assemble_impedances(s);
    const TuningState t = TuningState::uniform_reactance(s.size(), -20.0);
    for (auto _ : state) benchmark::DoNotOptimize(end_to_end(imps, t));
}
BENCHMARK(BM_EndToEnd)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_OptimizeTuning(benchmark::State& state) {
    const ImpedanceSet imps = assemble_impedances(make_scene(static_cast<std::size_t>(state.range(0))));
    const TuningState t = TuningState::uniform_reactance(imps.z_st.size(), 0.0);
    OptimizeOptions opts;
    opts.budget = 2;
    for (auto _ : state) benchmark::DoNotOptimize(optimize_tuning(imps, t, opts));
}
BENCHMARK(BM_OptimizeTuning)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
