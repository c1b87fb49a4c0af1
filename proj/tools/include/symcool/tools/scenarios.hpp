#pragma once

#include "symcool/analysis.hpp"
#include "symcool/cavity.hpp"
#include "symcool/coupling.hpp"
#include "symcool/lattice.hpp"
#include "symcool/params.hpp"
#include "symcool/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

namespace symcool::tools {

struct SeedRange {
    uint64_t first = 1;
    uint64_t last = 20;

    std::vector<uint64_t> list() const;
};

// "A..B" or a single seed "A".
SeedRange parse_seed_range(std::string_view text);

// Evaluates fn(0..n-1) on up to `threads` workers (0 = hardware concurrency).
// Results come back in index order, so reductions do not depend on scheduling.
template <class F>
auto parallel_map(size_t n, F fn, unsigned threads = 0)
{
    using R = decltype(fn(size_t{}));
    std::vector<std::optional<R>> slots(n);
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(n, 1)));
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            }
            catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    }
    else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; t++)
            pool.emplace_back(worker);
        for (auto &t: pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);
    std::vector<R> out;
    out.reserve(n);
    for (auto &s: slots)
        out.push_back(std::move(*s));
    return out;
}

// ---- spectrum ----

struct SpectrumOptions {
    unsigned positions = 21;       // membrane positions over [0, lambda/2]
    unsigned frequency_points = 4001;
};

struct SpectrumSummaryRow {
    double x_m, omega_c, G, finesse, kappa;
    double tm_omega, tm_G; // transfer-matrix peak and slope in its own frame
    bool converged;
};

struct SpectrumResult {
    std::vector<double> x, omega, transmission; // long format
    std::vector<SpectrumSummaryRow> summary;
    std::vector<std::string> diagnostics;
};

SpectrumResult run_spectrum(const ExperimentConfig &config, const SpectrumOptions &options);

// Finesse and linewidth of the tracked mode at the two points of maximal |G|.
struct FinesseEndpoints {
    double x_high, finesse_high, kappa_high;
    double x_low, finesse_low, kappa_low;
};

FinesseEndpoints finesse_endpoints(const ExperimentConfig &config);

// ---- lattice ----

struct LatticeReport {
    lattice::LatticeField field;
    double Omega_a0_calculated;
    double Omega_a0_used;
    double Gamma_sc_well;
    double Gamma_sc_max;
    double Pr_over_P0;
    std::vector<double> r, Omega_a;
};

LatticeReport run_lattice(const ExperimentConfig &config, unsigned radial_points = 101,
                          Warnings *warnings = nullptr);

// ---- step-scan and detuning-scan ----

struct StepScan {
    double Delta_LA;
    std::vector<double> P0, Omega_a0, Gamma_sym;
    double plateau;       // 4 g^2 eta^2 t^2 / Gamma_a
    double onset_Omega;   // Omega_a0 where the curve first reaches half the plateau
};

// P0 runs from 0 to the power at which Omega_a0 = max_ratio * Omega_m.
StepScan run_step_scan(const ExperimentConfig &config, unsigned points = 201, double max_ratio = 2.0);

std::vector<StepScan> run_detuning_scan(const ExperimentConfig &config, std::span<const double> detunings,
                                        unsigned points = 201, double max_ratio = 2.0);

// ---- cool ----

struct CoolOptions {
    std::vector<uint64_t> seeds = SeedRange{}.list();
    unsigned threads = 0;
    unsigned series_decimation = 0; // 0 keeps no per-seed series
    double decay_fit_span = 0.06;   // s after the start of the resonant phase
};

struct SeedSeries {
    uint64_t seed;
    std::vector<double> t, x_m, x_a;
};

struct CoolTrace {
    std::vector<double> mean, sem;
    std::vector<std::vector<double>> per_seed;
    std::vector<SeedSeries> series;
};

struct CoolResult {
    std::vector<double> t;          // band-power window centres
    std::vector<double> phase_start; // s, one per phase plus the end time
    size_t resonant_phase = 0;       // index of the phase used for the summary
    double center = 0;               // rad/s
    double bandwidth = 0;            // rad/s
    CoolTrace with_atoms, without_atoms;

    analysis::WindowedMinimum minimum{}; // with atoms, inside the resonant phase
    fit::FitResult decay;                // with atoms, start of the resonant phase
    double T_equilibrium_without = 0;    // mean over the last 40% of the resonant phase

    // Model expectations at the resonant phase.
    double Gamma_m = 0, Gamma_opt = 0, Gamma_sym = 0, T_bath = 0;
    double T_opt_expected = 0, T_sym_expected = 0;
    std::vector<double> T_plateau_expected; // per phase, with atoms
};

CoolResult run_cool(const ExperimentConfig &config, const CoolOptions &options, Warnings *warnings = nullptr);

// ---- calibration ----

struct CalibrationDefaults {
    double alpha, beta, T0;
};

// alpha = Gamma_opt/P_tot and beta = T_L/P_tot^2 at the configured lattice power.
CalibrationDefaults calibration_defaults(const ExperimentConfig &config);

struct CalibrationData {
    std::vector<double> P_tot, T_opt;
};

// Forward model on a geometric power grid; `noise` is a relative Gaussian
// error drawn with `seed` (0 disables it).
CalibrationData forward_calibration(const CalibrationDefaults &p, double Gamma_m, double P_min, double P_max,
                                    unsigned points, double noise, uint64_t seed);

// ---- step-model fitting ----

analysis::StepModelFixed step_fixed_parameters(const ExperimentConfig &config);

// ---- ground state ----

struct GroundStateReport {
    double Omega_a0;
    double N_r;
    double g_Nr;
    double C;
    double n_bath;
    double T_bath;
    bool satisfied;
    double n_ss_literature;
};

GroundStateReport run_groundstate(const ExperimentConfig &config, Warnings *warnings = nullptr);

}
