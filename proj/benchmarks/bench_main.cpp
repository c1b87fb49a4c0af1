#include "symcool/analysis.hpp"
#include "symcool/cavity.hpp"
#include "symcool/config.hpp"
#include "symcool/coupling.hpp"
#include "symcool/dynamics.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

using namespace symcool;

namespace {

constexpr double pi = std::numbers::pi;

ExperimentConfig baseline()
{
    return load_config(std::string(SYMCOOL_CONFIG_DIR) + "/paper-baseline.cfg");
}

dynamics::CoupledOscillatorSystem coupled_system()
{
    dynamics::CoupledOscillatorSystem s;
    s.membrane.M = 140e-12;
    s.membrane.Omega = 2 * pi * 274e3;
    s.membrane.Gamma_m = 0.57;
    s.membrane.Gamma_opt = 16;
    s.membrane.T_bath = 295;
    s.atoms.mass = 1e-3 * s.membrane.M;
    s.atoms.Omega = s.membrane.Omega;
    s.atoms.Gamma = 1e4;
    s.asymmetry = 0.56;
    s.K = 1e-3;
    return s;
}

// Cost per integrator step, reported as steps per second.
void BM_IntegratorSteps(benchmark::State &state)
{
    auto sys = coupled_system();
    dynamics::Segment seg{"bench", 0, sys, 0};
    std::span<const dynamics::Segment> one(&seg, 1);
    double dt = dynamics::default_time_step(one);
    const auto steps = state.range(0);
    seg.duration = double(steps) * dt;
    dynamics::SimulationOptions o;
    o.record_stride = 4;
    for (auto _: state) {
        auto ts = dynamics::simulate(one, o);
        benchmark::DoNotOptimize(ts.x_m.data());
    }
    state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_IntegratorSteps)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_TransferMatrixTrackedMode(benchmark::State &state)
{
    auto c = baseline();
    cavity::TransferMatrixCavity tm(c);
    double x = c.cavity.wavelength / 8;
    for (auto _: state) {
        auto p = tm.tracked_mode(x);
        benchmark::DoNotOptimize(p.finesse);
    }
}
BENCHMARK(BM_TransferMatrixTrackedMode)->Unit(benchmark::kMicrosecond);

void BM_EnsembleClosedForm(benchmark::State &state)
{
    coupling::EnsembleInputs in{4.5e15, 284e-6, 3.5e-3, 1e4, 2 * pi * 274e3, 2 * pi * 300e3,
                                140e-12, 300, 0.42, 0.7, 0.8};
    for (auto _: state) {
        auto r = coupling::ensemble_coupling(in);
        benchmark::DoNotOptimize(r.Gamma_sym_int);
        in.Omega_a0 *= 1.0000001;
    }
}
BENCHMARK(BM_EnsembleClosedForm);

void BM_PsdEstimate(benchmark::State &state)
{
    const auto n = size_t(state.range(0));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    std::vector<double> x(64 * n);
    for (auto &v: x)
        v = normal(rng);
    for (auto _: state) {
        auto p = analysis::estimate_psd(x, 1e-6, n);
        benchmark::DoNotOptimize(p.S_x.data());
    }
    state.SetItemsProcessed(state.iterations() * int64_t(x.size()));
}
BENCHMARK(BM_PsdEstimate)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

}

BENCHMARK_MAIN();
