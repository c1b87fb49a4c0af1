#include "doctest.h"

#include "symcool/analysis.hpp"
#include "symcool/coupling.hpp"
#include "symcool/dynamics.hpp"
#include "symcool/optomech.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace symcool;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double k_B = 1.380649e-23;
constexpr double hbar = 1.054571817e-34;

std::vector<double> white_noise(size_t n, uint64_t seed, double sigma = 1)
{
    std::mt19937_64 rng(seed);
    boost::random::normal_distribution<double> normal(0, sigma);
    std::vector<double> x(n);
    for (auto &v: x)
        v = normal(rng);
    return x;
}

dynamics::TimeSeries free_run(double Omega, double Gamma, double T, double duration, uint64_t seed,
                              unsigned stride = 4)
{
    dynamics::CoupledOscillatorSystem s;
    s.membrane.M = 1e-12;
    s.membrane.Omega = Omega;
    s.membrane.Gamma_m = Gamma;
    s.membrane.T_bath = T;
    dynamics::Segment seg{"free", duration, s, 0};
    dynamics::SimulationOptions o;
    o.seed = seed;
    o.record_stride = stride;
    return dynamics::simulate(std::span<const dynamics::Segment>(&seg, 1), o);
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

analysis::StepModelFixed fixed_step()
{
    analysis::StepModelFixed f;
    f.Omega_m = 2 * pi * 274e3;
    f.Gamma_a = 1e4;
    f.w0 = 284e-6;
    f.R_a = 3.5e-3;
    f.M = 140e-12;
    f.finesse = 300;
    f.r_m = 0.42;
    f.eta2 = 0.7;
    f.t2 = 0.8;
    f.g_fraction = 0.92;
    return f;
}

}

TEST_SUITE("analysis") {

TEST_CASE("PSD normalisation on white noise")
{
    auto x = white_noise(1 << 20, 1);
    double dt = 1e-4;
    auto rect = analysis::estimate_psd(x, dt, 4096, analysis::Window::Rectangular);
    CHECK(rect.segments == 256);
    CHECK(rect.integrated() == doctest::Approx(1.0).epsilon(0.02));
    // Flat at the one-sided level 2 dt.
    double mean = 0;
    for (size_t i = 1; i + 1 < rect.S_x.size(); i++)
        mean += rect.S_x[i];
    mean /= rect.S_x.size() - 2;
    CHECK(mean == doctest::Approx(2 * dt).epsilon(0.02));
    auto hann = analysis::estimate_psd(x, dt, 4096, analysis::Window::Hann);
    CHECK(hann.integrated() == doctest::Approx(1.0).epsilon(0.02));
    CHECK(hann.df == doctest::Approx(1 / (4096 * dt)));

    CHECK_THROWS_AS(analysis::estimate_psd(std::vector<double>{}, dt, 16), ValidationError);
    CHECK_THROWS_AS(analysis::estimate_psd(x, dt, x.size() + 1), ValidationError);
}

TEST_CASE("Parseval for a pure sinusoid")
{
    double dt = 1e-5, A = 3e-9;
    std::vector<double> x(1 << 18);
    for (size_t i = 0; i < x.size(); i++)
        x[i] = A * std::sin(2 * pi * 1234.5 * i * dt + 0.3);
    for (auto w: {analysis::Window::Rectangular, analysis::Window::Hann}) {
        auto p = analysis::estimate_psd(x, dt, 1 << 14, w);
        CHECK(p.integrated() == doctest::Approx(A * A / 2).epsilon(0.02));
    }
    CHECK(analysis::window_enbw(analysis::Window::Hann) == doctest::Approx(1.5));
    CHECK(analysis::window_enbw(analysis::Window::Rectangular) == 1.0);
}

TEST_CASE("Lorentzian fit of a simulated free membrane recovers Omega_m and Gamma_m")
{
    // 6000 correlation times, with the linewidth spread over about eight bins.
    double W = 2 * pi * 1e3, G = 30;
    auto ts = free_run(W, G, 295, 200.0, 5);
    auto psd = analysis::estimate_psd(ts.x_m, ts.dt, 1 << 14);
    auto f = analysis::fit_lorentzian(psd, W - 20 * G, W + 20 * G);
    REQUIRE(f.converged);
    CHECK(f.value("Omega_0") == doctest::Approx(W).epsilon(0.05));
    CHECK(f.value("Gamma") == doctest::Approx(G).epsilon(0.05));
}

TEST_CASE("band power: calibration identity")
{
    double W = 2 * pi * 10e3, M = 1e-12;
    analysis::TemperatureCalibration cal{M, W, 1.0};
    double dt = 1e-6, A = 2e-10;
    std::vector<double> x(200000);
    for (size_t i = 0; i < x.size(); i++)
        x[i] = A * std::cos(W * i * dt + 1.0);
    auto tr = analysis::band_power_temperature(x, dt, W, 2 * pi * 200, cal);
    REQUIRE(tr.T.size() > 10);
    double expected = M * W * W * A * A / 2 / k_B;
    for (double T: tr.T)
        CHECK(T == doctest::Approx(expected).epsilon(0.01));

    cal.scale = 2;
    auto tr2 = analysis::band_power_temperature(x, dt, W, 2 * pi * 200, cal);
    CHECK(tr2.T[3] == doctest::Approx(2 * tr.T[3]));

    Warnings w;
    analysis::band_power_temperature(x, dt, W, 2 * pi * 200, cal, 1000, &w);
    CHECK(w.messages.size() == 1);
    CHECK_THROWS_AS(analysis::band_power_temperature(x, dt, W, 0, cal), ValidationError);
}

TEST_CASE("band power: stationary thermal membrane reads its bath temperature")
{
    double W = 2 * pi * 1e3, G = 20;
    auto ts = free_run(W, G, 295, 200.0, 6);
    auto tr = analysis::band_power_temperature(ts.x_m, ts.dt, W, 2 * pi * 200, {1e-12, W, 1.0}, G);
    double mean = 0;
    for (double T: tr.T)
        mean += T;
    mean /= tr.T.size();
    // 4000 correlation times put the mean within about 2%; the band keeps
    // all but a percent or two of the Lorentzian.
    CHECK(mean == doctest::Approx(295).epsilon(0.06));
}

TEST_CASE("equipartition temperature")
{
    double M = 140e-12, W = 2 * pi * 274e3;
    CHECK(analysis::equipartition_temperature(k_B * 295 / (M * W * W), M, W) == doctest::Approx(295));
    CHECK(analysis::equipartition_temperature(0, M, W) == 0.0);
    double x0 = coupling::zero_point_amplitude(M, W);
    CHECK(analysis::equipartition_temperature(x0 * x0, M, W) == doctest::Approx(hbar * W / (2 * k_B)));
    CHECK(analysis::equipartition_temperature(x0 * x0, M, W) == doctest::Approx(6.575e-6).epsilon(1e-3));
}

TEST_CASE("windowed minimum")
{
    std::vector<double> t, y;
    for (int i = 0; i <= 1000; i++) {
        t.push_back(i * 1e-3);
        y.push_back(std::pow(t.back() - 0.6, 2) + (i % 2 ? 0.01 : -0.01));
    }
    auto m = analysis::windowed_minimum(t, y, 0.044, 0.0, 1.0);
    CHECK(m.t == doctest::Approx(0.6).epsilon(0.01));
    CHECK(m.value == doctest::Approx(0.022 * 0.022 / 3).epsilon(0.1));
    auto restricted = analysis::windowed_minimum(t, y, 0.044, 0.0, 0.4);
    CHECK(restricted.t <= 0.4 - 0.022 + 1e-9);
    CHECK_THROWS_AS(analysis::windowed_minimum(t, y, 2.0, 0.0, 1.0), ValidationError);
}

TEST_CASE("exponential decay fit")
{
    std::vector<double> t, y;
    for (int i = 0; i < 400; i++) {
        t.push_back(0.8 + i * 2.5e-4);
        y.push_back(1.5 + 27.5 * std::exp(-111 * (t.back() - 0.8)));
    }
    auto f = analysis::fit_exponential_decay(t, y, 0.8, 0.9);
    REQUIRE(f.converged);
    CHECK(f.value("rate") == doctest::Approx(111).epsilon(1e-6));
    CHECK(f.value("y_inf") == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(f.value("amplitude") == doctest::Approx(27.5).epsilon(1e-6));

    std::mt19937_64 rng(4);
    boost::random::normal_distribution<double> normal;
    for (auto &v: y)
        v *= 1 + 0.03 * normal(rng);
    auto g = analysis::fit_exponential_decay(t, y, 0.8, 0.9);
    CHECK(g.value("rate") == doctest::Approx(111).epsilon(0.05));
    CHECK(g.uncertainty("rate") > 0);
    auto again = analysis::fit_exponential_decay(t, y, 0.8, 0.9);
    CHECK(again.values == g.values);
    CHECK_THROWS_AS(analysis::fit_exponential_decay(t, y, 0.0, 0.8), ValidationError);
}

TEST_CASE("calibration fit: exact roundtrip and rescaling")
{
    double alpha = 2.86e4, beta = 6.2e6, T0 = 295, Gm = 0.57;
    std::vector<double> P, T;
    for (int i = 0; i < 20; i++) {
        P.push_back(1e-5 * std::pow(2000.0, i / 19.0));
        T.push_back(optomech::calibration_model(P.back(), alpha, beta, T0, Gm));
    }
    auto f = analysis::fit_calibration(P, T, Gm);
    REQUIRE(f.converged);
    CHECK(f.value("alpha") == doctest::Approx(alpha).epsilon(1e-3));
    CHECK(f.value("beta") == doctest::Approx(beta).epsilon(1e-3));
    CHECK(f.value("T0") == doctest::Approx(T0).epsilon(1e-3));

    std::vector<double> T2;
    for (double p: P)
        T2.push_back(optomech::calibration_model(p, alpha, beta, 250, Gm));
    auto f2 = analysis::fit_calibration(P, T2, Gm);
    CHECK(analysis::calibration_rescale(f2) == doctest::Approx(295.0 / 250).epsilon(1e-3));

    std::vector<double> few(P.begin(), P.begin() + 4), fewT(T.begin(), T.begin() + 4);
    CHECK_THROWS_AS(analysis::fit_calibration(few, fewT, Gm), ValidationError);
    std::vector<double> narrowP{1e-3, 1.1e-3, 1.2e-3, 1.3e-3, 1.4e-3, 1.5e-3}, narrowT(6, 5.0);
    CHECK_THROWS_AS(analysis::fit_calibration(narrowP, narrowT, Gm), ValidationError);
}

TEST_CASE("calibration fit under 5% noise: median error below 10% over 100 trials")
{
    double alpha = 2.86e4, beta = 6.2e6, T0 = 295, Gm = 0.57;
    std::vector<double> ea, eb, et;
    boost::random::normal_distribution<double> normal;
    for (int trial = 0; trial < 100; trial++) {
        std::mt19937_64 rng(1000 + trial);
        std::vector<double> P, T;
        for (int i = 0; i < 20; i++) {
            P.push_back(1e-5 * std::pow(2000.0, i / 19.0));
            T.push_back(optomech::calibration_model(P.back(), alpha, beta, T0, Gm) * (1 + 0.05 * normal(rng)));
        }
        auto f = analysis::fit_calibration(P, T, Gm);
        ea.push_back(std::abs(f.value("alpha") / alpha - 1));
        eb.push_back(std::abs(f.value("beta") / beta - 1));
        et.push_back(std::abs(f.value("T0") / T0 - 1));
    }
    CHECK(median(ea) < 0.10);
    CHECK(median(eb) < 0.10);
    CHECK(median(et) < 0.10);
}

TEST_CASE("fitters reach the same optimum from +-50% starts")
{
    double alpha = 2.86e4, beta = 6.2e6, T0 = 295, Gm = 0.57;
    std::vector<double> P, T;
    std::mt19937_64 rng(77);
    boost::random::normal_distribution<double> normal;
    for (int i = 0; i < 20; i++) {
        P.push_back(1e-5 * std::pow(2000.0, i / 19.0));
        T.push_back(optomech::calibration_model(P.back(), alpha, beta, T0, Gm) * (1 + 0.05 * normal(rng)));
    }
    std::vector<double> w;
    for (double v: T)
        w.push_back(1 / v);
    fit::Model model = [Gm] (double p, std::span<const double> q) {
        return optomech::calibration_model(p, q[0] * 1e4, q[1] * 1e6, q[2] * 100, Gm);
    };
    auto ref = analysis::fit_calibration(P, T, Gm);
    for (double a: {0.5, 1.5}) {
        for (double b: {0.5, 1.5}) {
            for (double c: {0.5, 1.5}) {
                auto f = fit::curve_fit(model, P, T, {2.86 * a, 6.2 * b, 2.95 * c}, {"a", "b", "T0"}, w);
                CHECK(f.values[0] * 1e4 == doctest::Approx(ref.value("alpha")).epsilon(1e-4));
                CHECK(f.values[1] * 1e6 == doctest::Approx(ref.value("beta")).epsilon(1e-4));
                CHECK(f.values[2] * 100 == doctest::Approx(ref.value("T0")).epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("extract_gamma_sym inverts the equilibrium temperatures")
{
    double Tb = 295, Gm = 0.57;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(1, 500);
    for (int i = 0; i < 200; i++) {
        double Go = u(rng), Gs = u(rng);
        double T_opt = optomech::equilibrium_temperature(Tb, Gm, Go, 0);
        double T_sym = optomech::equilibrium_temperature(Tb, Gm, Go, Gs);
        CHECK(analysis::extract_gamma_sym(T_sym, T_opt, Tb, Gm) == doctest::Approx(Gs).epsilon(1e-12));
    }
    CHECK(analysis::extract_gamma_sym(3.0, 3.0, Tb, Gm) == 0.0);
    // 1.5 K against the Gamma_opt-only equilibrium gives Gamma_tot - Gamma_m - Gamma_opt.
    double Go = 16.1847;
    double T_opt = optomech::equilibrium_temperature(Tb, Gm, Go, 0);
    double Gs = analysis::extract_gamma_sym(1.5, T_opt, Tb, Gm);
    CHECK(Gs == doctest::Approx(Tb * Gm / 1.5 - Gm - Go).epsilon(1e-9));
    double a = analysis::extract_gamma_sym(1.0, 10, Tb, Gm), b = analysis::extract_gamma_sym(0.5, 10, Tb, Gm);
    CHECK(b / a == doctest::Approx(2).epsilon(0.1));

    Warnings w;
    double neg = analysis::extract_gamma_sym(12, 10, Tb, Gm, &w);
    CHECK(neg < 0);
    CHECK(w.messages.size() == 1);
}

TEST_CASE("step-model fit: roundtrip under 10% noise")
{
    auto fx = fixed_step();
    double n_a = 4.5e15;
    std::vector<double> W, G;
    std::mt19937_64 rng(12);
    boost::random::normal_distribution<double> normal;
    for (int i = 0; i < 60; i++) {
        W.push_back(fx.Omega_m * (0.5 + 1.5 * i / 59.0));
        G.push_back(analysis::step_model(W.back(), n_a, fx) * (1 + 0.1 * normal(rng)));
    }
    auto f = analysis::fit_step_model(W, G, fx);
    REQUIRE(f.converged);
    CHECK(f.value("n_a") == doctest::Approx(n_a).epsilon(0.10));
    CHECK(std::isfinite(f.uncertainty("n_a")));

    // The model is the ensemble closed form.
    coupling::EnsembleInputs in{n_a, fx.w0, fx.R_a, fx.Gamma_a, fx.Omega_m, 1.3 * fx.Omega_m, fx.M,
                                fx.finesse, fx.r_m, fx.eta2, fx.t2, fx.g_fraction};
    CHECK(analysis::step_model(1.3 * fx.Omega_m, n_a, fx) ==
          doctest::Approx(coupling::ensemble_coupling(in).Gamma_sym_int));
}

TEST_CASE("step-model fit: flat zero data is unidentifiable")
{
    auto fx = fixed_step();
    std::vector<double> W, G;
    for (int i = 0; i < 30; i++) {
        W.push_back(fx.Omega_m * (0.5 + 1.5 * i / 29.0));
        G.push_back(0);
    }
    auto f = analysis::fit_step_model(W, G, fx, 4e15);
    CHECK(std::isinf(f.uncertainty("n_a")));
    CHECK_FALSE(f.converged);
    CHECK_FALSE(f.diagnostic.empty());
    CHECK_THROWS_AS(analysis::fit_step_model(std::vector<double>{}, std::vector<double>{}, fx), ValidationError);
}

}
