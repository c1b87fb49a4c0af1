#pragma once

#include "coupling.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "params.hpp"

#include <span>
#include <string>
#include <vector>

namespace symcool::analysis {

using fit::FitResult;

enum class Window { Rectangular, Hann };

const char *window_name(Window w);

// Equivalent noise bandwidth of the window in units of the bin width.
double window_enbw(Window w);

struct PsdEstimate {
    std::vector<double> omega; // rad/s
    std::vector<double> S_x;   // units^2/Hz, one-sided
    size_t segments = 0;
    Window window = Window::Hann;
    double df = 0; // Hz

    // sum S df over all bins
    double integrated() const;
};

// Averaged windowed periodogram without overlap; a trailing partial segment
// is dropped.  Each segment has its mean removed.
PsdEstimate estimate_psd(std::span<const double> series, double dt, size_t segment_length,
                         Window window = Window::Hann);

struct TemperatureCalibration {
    double M = 0;
    double Omega_m = 0;
    double scale = 1; // multiplies the equipartition temperature
};

struct TemperatureTrace {
    std::vector<double> t; // s, window centres
    std::vector<double> T; // K
};

// Zero-span emulation: the series is demodulated at `center` and averaged
// with a Hann window whose noise-equivalent bandwidth is `bandwidth`
// (rad/s), i.e. window length 1.5 * 2 pi / bandwidth.  Windows hop by half
// their length.  The band variance 2 |z|^2 maps to kelvin by equipartition.
TemperatureTrace band_power_temperature(std::span<const double> series, double dt, double center,
                                        double bandwidth, const TemperatureCalibration &cal,
                                        double Gamma_tot = 0, Warnings *warnings = nullptr);

double equipartition_temperature(double variance, double M, double Omega_m,
                                 const PhysicalConstants &k = PhysicalConstants::standard());

// Centered moving average over `window` seconds, then the minimum.  Returns
// {time of the minimum, minimum}.  Only samples with t in [t_lo, t_hi] count.
struct WindowedMinimum {
    double t;
    double value;
};

WindowedMinimum windowed_minimum(std::span<const double> t, std::span<const double> y, double window,
                                 double t_lo, double t_hi);

// y(t) = y_inf + A exp(-rate (t - t0)) on samples with t in [t_lo, t_hi].
FitResult fit_exponential_decay(std::span<const double> t, std::span<const double> y, double t_lo,
                                double t_hi);

// S(Omega) = A / ((Omega - Omega_0)^2 + (Gamma/2)^2) + background, fitted on [lo, hi].
FitResult fit_lorentzian(const PsdEstimate &psd, double lo, double hi);

FitResult fit_calibration(std::span<const double> P_tot, std::span<const double> T_opt, double Gamma_m,
                          const fit::Options &options = {});

// Initial guess used by fit_calibration: linear least squares on
// y Gamma_m = Gamma_m T0 + Gamma_m beta P^2 - alpha y P.
std::vector<double> calibration_initial_guess(std::span<const double> P_tot, std::span<const double> T_opt,
                                              double Gamma_m);

// Factor that maps temperatures so the fitted T0 becomes `T_ref`.
double calibration_rescale(const FitResult &calibration, double T_ref = 295);

// Gamma_sym = Gamma_m (T_bath/T_sym - T_bath/T_opt); signed, never clamped.
double extract_gamma_sym(double T_sym, double T_opt, double T_bath, double Gamma_m,
                         Warnings *warnings = nullptr);

struct StepModelFixed {
    double Omega_m;
    double Gamma_a;
    double w0;
    double R_a;
    double M;
    double finesse;
    double r_m;
    double eta2;
    double t2;
    double g_fraction = 1;
    coupling::LowerLimit lower = coupling::LowerLimit::Exact;
    PhysicalConstants constants = PhysicalConstants::standard();
};

double step_model(double Omega_a0, double n_a, const StepModelFixed &fixed);

// Least squares of the full ensemble closed form with n_a free.  Data
// without a resolvable step are flagged with an infinite uncertainty.
FitResult fit_step_model(std::span<const double> Omega_a0, std::span<const double> Gamma_sym,
                         const StepModelFixed &fixed, double n_a_guess = 0, const fit::Options &options = {});

}
