#include "symcool/analysis.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numeric>

namespace symcool::analysis {

const char *window_name(Window w)
{
    return w == Window::Hann ? "hann" : "rectangular";
}

double window_enbw(Window w)
{
    return w == Window::Hann ? 1.5 : 1.0;
}

double PsdEstimate::integrated() const
{
    return std::accumulate(S_x.begin(), S_x.end(), 0.0) * df;
}

namespace {

// FFTW planning is not thread safe; execution on distinct plans is.
std::mutex fftw_plan_mutex;

struct FftwDeleter {
    void operator()(void *p) const { fftw_free(p); }
};

std::vector<double> make_window(Window w, size_t n)
{
    std::vector<double> out(n, 1.0);
    if (w == Window::Hann) {
        // Periodic Hann, which tiles exactly at 50% overlap.
        for (size_t i = 0; i < n; i++)
            out[i] = 0.5 - 0.5 * std::cos(kTwoPi * double(i) / double(n));
    }
    return out;
}

}

PsdEstimate estimate_psd(std::span<const double> series, double dt, size_t seglen, Window window)
{
    if (series.empty())
        throw ValidationError("estimate_psd: empty series");
    if (seglen < 2 || seglen > series.size())
        throw ValidationError("estimate_psd: segment length must lie in [2, series length]");
    size_t nseg = series.size() / seglen;
    size_t nbins = seglen / 2 + 1;
    auto w = make_window(window, seglen);
    double w2 = 0;
    for (double v: w)
        w2 += v * v;

    std::unique_ptr<double, FftwDeleter> in(static_cast<double*>(fftw_malloc(sizeof(double) * seglen)));
    std::unique_ptr<fftw_complex, FftwDeleter> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nbins)));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        plan = fftw_plan_dft_r2c_1d(int(seglen), in.get(), out.get(), FFTW_ESTIMATE);
    }

    PsdEstimate est;
    est.segments = nseg;
    est.window = window;
    est.df = 1.0 / (double(seglen) * dt);
    est.S_x.assign(nbins, 0.0);
    est.omega.resize(nbins);
    for (size_t k = 0; k < nbins; k++)
        est.omega[k] = kTwoPi * double(k) * est.df;

    for (size_t s = 0; s < nseg; s++) {
        auto seg = series.subspan(s * seglen, seglen);
        double mean = std::accumulate(seg.begin(), seg.end(), 0.0) / double(seglen);
        for (size_t i = 0; i < seglen; i++)
            in.get()[i] = (seg[i] - mean) * w[i];
        fftw_execute(plan);
        for (size_t k = 0; k < nbins; k++) {
            double re = out.get()[k][0];
            double im = out.get()[k][1];
            bool edge = k == 0 || (seglen % 2 == 0 && k == nbins - 1);
            est.S_x[k] += (edge ? 1.0 : 2.0) * (re * re + im * im) * dt / w2;
        }
    }
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    for (auto &v: est.S_x)
        v /= double(nseg);
    return est;
}

TemperatureTrace band_power_temperature(std::span<const double> series, double dt, double center,
                                        double bandwidth, const TemperatureCalibration &cal, double Gamma_tot,
                                        Warnings *warnings)
{
    if (!(bandwidth > 0) || !(center > 0))
        throw ValidationError("band_power_temperature: center and bandwidth must be positive");
    if (Gamma_tot > 0 && bandwidth < 5 * Gamma_tot)
        warn(warnings, "band-power bandwidth is not much larger than the total damping rate");
    if (bandwidth > center / 10)
        warn(warnings, "band-power bandwidth is not much smaller than the centre frequency");
    double Tw = window_enbw(Window::Hann) * kTwoPi / bandwidth;
    size_t nw = std::max<size_t>(4, size_t(std::lround(Tw / dt)));
    size_t hop = nw / 2;
    auto w = make_window(Window::Hann, nw);
    double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    double to_kelvin = cal.scale * cal.M * cal.Omega_m * cal.Omega_m / PhysicalConstants::standard().k_B;

    TemperatureTrace tr;
    std::complex<double> step = std::polar(1.0, -center * dt);
    for (size_t s = 0; s + nw <= series.size(); s += hop) {
        std::complex<double> ph = std::polar(1.0, -center * dt * double(s));
        std::complex<double> z = 0;
        for (size_t i = 0; i < nw; i++) {
            z += w[i] * series[s + i] * ph;
            ph *= step;
        }
        z /= wsum;
        tr.t.push_back(dt * (double(s) + double(nw - 1) / 2));
        tr.T.push_back(2 * std::norm(z) * to_kelvin);
    }
    return tr;
}

double equipartition_temperature(double variance, double M, double Omega_m, const PhysicalConstants &k)
{
    return M * Omega_m * Omega_m * variance / k.k_B;
}

WindowedMinimum windowed_minimum(std::span<const double> t, std::span<const double> y, double window,
                                 double t_lo, double t_hi)
{
    if (t.size() != y.size() || t.size() < 2)
        throw ValidationError("windowed_minimum: need matching series of at least two samples");
    double step = t[1] - t[0];
    size_t half = size_t(std::lround(window / step / 2));
    std::vector<double> prefix(y.size() + 1, 0.0);
    for (size_t i = 0; i < y.size(); i++)
        prefix[i + 1] = prefix[i] + y[i];
    WindowedMinimum best{NAN, INFINITY};
    for (size_t c = half; c + half < y.size(); c++) {
        if (t[c - half] < t_lo || t[c + half] > t_hi)
            continue;
        double avg = (prefix[c + half + 1] - prefix[c - half]) / double(2 * half + 1);
        if (avg < best.value)
            best = {t[c], avg};
    }
    if (!std::isfinite(best.value))
        throw ValidationError("windowed_minimum: averaging window does not fit in the range");
    return best;
}

FitResult fit_exponential_decay(std::span<const double> t, std::span<const double> y, double t_lo, double t_hi)
{
    std::vector<double> xs, ys;
    for (size_t i = 0; i < t.size(); i++) {
        if (t[i] >= t_lo && t[i] <= t_hi) {
            xs.push_back(t[i] - t_lo);
            ys.push_back(y[i]);
        }
    }
    if (xs.size() < 4)
        throw ValidationError("fit_exponential_decay: fewer than four samples in range");
    // Guess the floor from the last tenth and the rate from the 1/e crossing.
    size_t tail = std::max<size_t>(1, ys.size() / 10);
    double floor = std::accumulate(ys.end() - tail, ys.end(), 0.0) / double(tail);
    double amp = ys.front() - floor;
    double rate = 3 / (xs.back() - xs.front());
    for (size_t i = 0; i < ys.size(); i++) {
        if ((ys[i] - floor) < amp / std::exp(1.0)) {
            if (xs[i] > 0)
                rate = 1 / xs[i];
            break;
        }
    }
    auto model = [] (double x, std::span<const double> p) { return p[0] + p[1] * std::exp(-p[2] * x); };
    return fit::curve_fit(model, xs, ys, {floor, amp, rate}, {"y_inf", "amplitude", "rate"});
}

FitResult fit_lorentzian(const PsdEstimate &psd, double lo, double hi)
{
    std::vector<double> xs, ys;
    for (size_t i = 0; i < psd.omega.size(); i++) {
        if (psd.omega[i] >= lo && psd.omega[i] <= hi) {
            xs.push_back(psd.omega[i]);
            ys.push_back(psd.S_x[i]);
        }
    }
    if (xs.size() < 5)
        throw ValidationError("fit_lorentzian: fewer than five bins in range");
    size_t ip = std::max_element(ys.begin(), ys.end()) - ys.begin();
    double peak = ys[ip];
    double bg = *std::min_element(ys.begin(), ys.end());
    size_t l = ip, r = ip;
    while (l > 0 && ys[l] > (peak + bg) / 2)
        l--;
    while (r + 1 < ys.size() && ys[r] > (peak + bg) / 2)
        r++;
    double width = std::max(xs[r] - xs[l], xs[1] - xs[0]);
    // Scale the amplitude so all parameters are of order of the data.
    double scale = peak;
    auto model = [scale] (double x, std::span<const double> p) {
        double d = x - p[0];
        return scale * (p[2] * p[1] * p[1] / 4 / (d * d + p[1] * p[1] / 4) + p[3]);
    };
    std::vector<double> w(ys.size());
    for (size_t i = 0; i < ys.size(); i++)
        w[i] = 1 / std::max(ys[i], peak * 1e-12);
    auto res = fit::curve_fit(model, xs, ys, {xs[ip], width, 1.0, bg / scale},
                              {"Omega_0", "Gamma", "peak", "background"}, w);
    // Report peak and background in data units.
    res.values[2] *= scale;
    res.sigma[2] *= scale;
    res.values[3] *= scale;
    res.sigma[3] *= scale;
    res.values[1] = std::abs(res.values[1]);
    return res;
}

std::vector<double> calibration_initial_guess(std::span<const double> P, std::span<const double> T,
                                              double Gamma_m)
{
    size_t n = P.size();
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (size_t i = 0; i < n; i++) {
        // Rows are divided by T so that each point carries relative weight.
        A(i, 0) = Gamma_m / T[i];
        A(i, 1) = Gamma_m * P[i] * P[i] / T[i];
        A(i, 2) = -P[i];
        b(i) = Gamma_m;
    }
    Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
    return {sol(2), sol(1), sol(0)};
}

FitResult fit_calibration(std::span<const double> P, std::span<const double> T, double Gamma_m,
                          const fit::Options &options)
{
    if (P.size() != T.size() || P.size() < 5)
        throw ValidationError("fit_calibration: need at least five (P_tot, T_opt) pairs");
    auto [pmin, pmax] = std::minmax_element(P.begin(), P.end());
    if (*pmin <= 0 || *pmax < 3 * *pmin)
        throw ValidationError("fit_calibration: powers must span at least a factor of three");
    auto guess = calibration_initial_guess(P, T, Gamma_m);
    auto model = [Gamma_m] (double x, std::span<const double> p) {
        return Gamma_m * (p[2] + p[1] * x * x) / (Gamma_m + p[0] * x);
    };
    std::vector<double> w(T.size());
    for (size_t i = 0; i < T.size(); i++)
        w[i] = 1 / T[i];
    auto res = fit::curve_fit(model, P, T, guess, {"alpha", "beta", "T0"}, w, options);
    if (!res.converged)
        throw FitError("fit_calibration: " + res.diagnostic);
    return res;
}

double calibration_rescale(const FitResult &calibration, double T_ref)
{
    return T_ref / calibration.value("T0");
}

double extract_gamma_sym(double T_sym, double T_opt, double T_bath, double Gamma_m, Warnings *warnings)
{
    if (T_sym > T_opt)
        warn(warnings, "T_sym exceeds T_opt; the extracted rate is negative");
    return Gamma_m * (T_bath / T_sym - T_bath / T_opt);
}

double step_model(double Omega_a0, double n_a, const StepModelFixed &f)
{
    coupling::EnsembleInputs in;
    in.n_a = n_a;
    in.w0 = f.w0;
    in.R_a = f.R_a;
    in.Gamma_a = f.Gamma_a;
    in.Omega_m = f.Omega_m;
    in.Omega_a0 = Omega_a0;
    in.M = f.M;
    in.finesse = f.finesse;
    in.r_m = f.r_m;
    in.eta2 = f.eta2;
    in.t2 = f.t2;
    in.g_fraction = f.g_fraction;
    in.lower = f.lower;
    return coupling::ensemble_coupling(in, f.constants).Gamma_sym_int;
}

FitResult fit_step_model(std::span<const double> Omega_a0, std::span<const double> Gamma_sym,
                         const StepModelFixed &fixed, double n_a_guess, const fit::Options &options)
{
    if (Omega_a0.size() != Gamma_sym.size() || Omega_a0.empty())
        throw ValidationError("fit_step_model: need matching, non-empty data");
    if (n_a_guess <= 0) {
        // The model is linear in n_a, so projection gives the starting point.
        double num = 0, den = 0;
        for (size_t i = 0; i < Omega_a0.size(); i++) {
            double f1 = step_model(Omega_a0[i], 1.0, fixed);
            num += f1 * Gamma_sym[i];
            den += f1 * f1;
        }
        n_a_guess = den > 0 ? num / den : 0;
    }
    // Fit in units of 1e15 m^-3 to keep the Jacobian step well scaled.
    constexpr double unit = 1e15;
    auto model = [&fixed] (double x, std::span<const double> p) { return step_model(x, p[0] * unit, fixed); };
    auto res = fit::curve_fit(model, Omega_a0, Gamma_sym, {n_a_guess / unit}, {"n_a"}, {}, options);
    res.values[0] *= unit;
    res.sigma[0] *= unit;
    double rel = res.sigma[0] / std::abs(res.values[0]);
    // The fitted step must stand out of the residual scatter; all-zero data
    // fit perfectly with any vanishing n_a and say nothing about it.
    double data_scale = 0, height = 0;
    for (size_t i = 0; i < Omega_a0.size(); i++) {
        data_scale = std::max(data_scale, std::abs(Gamma_sym[i]));
        height = std::max(height, step_model(Omega_a0[i], res.values[0], fixed));
    }
    double rms = res.residual_norm / std::sqrt(double(Omega_a0.size()));
    if (!(res.values[0] > 0) || !(rel < 1) || !(data_scale > 0) || !(height > rms)) {
        res.sigma[0] = INFINITY;
        res.converged = false;
        res.diagnostic += (res.diagnostic.empty() ? "" : "; ") + std::string("n_a unidentifiable from these data");
    }
    return res;
}

}
