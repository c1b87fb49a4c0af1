#include "symcool/cavity.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace symcool::cavity {

using cplx = std::complex<double>;

SlabReflectivity thin_film_reflectivity(double d, double n_refr, double lambda)
{
    if (!(d >= 0) || !(lambda > 0))
        throw ValidationError("thin_film_reflectivity: need d >= 0 and lambda > 0");
    // Airy sum over the two interfaces of the slab.
    double r01 = (1 - n_refr) / (1 + n_refr);
    double delta = kTwoPi * n_refr * d / lambda;
    cplx e = std::polar(1.0, 2 * delta);
    cplx r = r01 * (1.0 - e) / (1.0 - r01 * r01 * e);
    return {r, std::abs(r), std::arg(r)};
}

CavityModel::CavityModel(const CavityGeometry &geometry, double r_m, const PhysicalConstants &k)
    : m_geom(geometry),
      m_r(std::abs(r_m)),
      m_fsr(std::numbers::pi * k.c / geometry.length)
{
    if (m_r >= 1)
        throw ValidationError("CavityModel: |r_m| must be below 1");
    m_omega0 = std::isnan(geometry.omega_0) ? kTwoPi * k.c / geometry.wavelength - m_fsr / 2
                                            : geometry.omega_0;
}

CavityModel::CavityModel(const ExperimentConfig &config)
    : CavityModel(config.cavity, config.membrane.r_m, config.constants)
{
}

double CavityModel::resonance(double x_m) const
{
    double u = m_r * std::cos(2 * kTwoPi * x_m / m_geom.wavelength);
    return m_fsr / std::numbers::pi * std::acos(u) + m_omega0;
}

double CavityModel::dispersive_coupling(double x_m) const
{
    double arg = 2 * kTwoPi * x_m / m_geom.wavelength;
    double u = m_r * std::cos(arg);
    double dwdx = m_fsr / std::numbers::pi * (2 * kTwoPi / m_geom.wavelength) * m_r * std::sin(arg) /
        std::sqrt(1 - u * u);
    return -dwdx;
}

double CavityModel::max_dispersive_coupling() const
{
    return 4 * m_fsr * m_r / m_geom.wavelength;
}

CavityOperatingPoint operating_point(const ExperimentConfig &config)
{
    CavityModel model(config);
    CavityOperatingPoint op;
    op.x_m = config.cavity.membrane_pos;
    op.omega_c = model.resonance(op.x_m);
    op.G = model.dispersive_coupling(op.x_m);
    op.finesse = config.cavity.finesse;
    op.kappa = model.kappa(op.finesse);
    op.Delta = config.cavity.detuning_over_kappa * op.kappa;
    return op;
}

ReflectedPhase reflected_phase(double Delta, double kappa)
{
    // Same as arctan[kappa Delta / ((kappa/2)^2 - Delta^2)], but continuous
    // through Delta = kappa/2.
    double phi = 2 * std::atan(2 * Delta / kappa);
    return {phi, kappa / (kappa * kappa / 4 + Delta * Delta)};
}

double intracavity_photons(double P_in, double Delta, double kappa, double omega_c,
                           const PhysicalConstants &k)
{
    return kappa / (kappa * kappa / 4 + Delta * Delta) * P_in / (k.hbar * omega_c);
}

namespace {

struct Mat2 {
    cplx a, b, c, d;
    Mat2 operator*(const Mat2 &o) const
    {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

// Lossless symmetric mirror with real r and imaginary t.
Mat2 mirror(double R)
{
    cplx r = std::sqrt(R);
    cplx t = cplx(0, std::sqrt(1 - R));
    return {(t * t - r * r) / t, r / t, -r / t, 1.0 / t};
}

Mat2 interface(double n1, double n2)
{
    double r = (n1 - n2) / (n1 + n2);
    double t = 2 * n1 / (n1 + n2);
    double rp = -r;
    double tp = 2 * n2 / (n1 + n2);
    return {t - rp * r / tp, rp / tp, -r / tp, 1 / tp};
}

Mat2 propagate(double phase)
{
    return {std::polar(1.0, phase), 0, 0, std::polar(1.0, -phase)};
}

}

TransferMatrixCavity::TransferMatrixCavity(const CavityGeometry &geometry, double d, double n_refr,
                                           const PhysicalConstants &k)
    : m_geom(geometry),
      m_k(k),
      m_d(d),
      m_n(n_refr),
      m_fsr(std::numbers::pi * k.c / geometry.length)
{
    if (!(geometry.R1 > 0 && geometry.R1 < 1 && geometry.R2 > 0 && geometry.R2 < 1))
        throw ValidationError("TransferMatrixCavity: mirror reflectivities must lie in (0, 1)");
    double lam = geometry.wavelength;
    double f = geometry.front_fraction;
    // Path-length difference of the two sub-cavities, snapped so that x_m = 0
    // is a minimum of the tracked resonance as in the analytic model.
    m_dL0 = lam / 2 + std::round(((2 * f - 1) * geometry.length - lam / 2) / lam) * lam;
    m_r_analytic = thin_film_reflectivity(d, n_refr, lam).magnitude;

    // Fix the branch: the tracked mode rises with x_m at lambda/8.
    double x8 = lam / 8;
    double ref = kTwoPi * k.c / lam;
    auto p = characterise_peak(x8, ref - m_fsr / 2, ref + m_fsr / 2);
    auto rising = [&] (double centre) {
        double w = m_fsr / 20;
        double a = locate_max(x8, centre - w, centre + w);
        double b = locate_max(x8 + lam * 1e-4, centre - w, centre + w);
        return b > a;
    };
    double centre = p.omega;
    if (!rising(centre))
        centre = characterise_peak(x8, centre + m_fsr / 2, centre + 3 * m_fsr / 2).omega;
    m_track_offset = centre - m_fsr / 2;
}

TransferMatrixCavity::TransferMatrixCavity(const ExperimentConfig &config)
    : TransferMatrixCavity(config.cavity, config.membrane.thickness, config.membrane.n_refr,
                           config.constants)
{
}

cplx TransferMatrixCavity::amplitude(double omega, double x_m) const
{
    double kv = omega / m_k.c;
    double L = m_geom.length;
    double L1 = (L - m_d + m_dL0) / 2 + x_m;
    double L2 = L - L1 - m_d;
    Mat2 M = mirror(m_geom.R2) * propagate(kv * L2) * interface(m_n, 1) *
        propagate(kv * m_n * m_d) * interface(1, m_n) * propagate(kv * L1) * mirror(m_geom.R1);
    cplx rin = -M.c / M.d;
    return M.a + M.b * rin;
}

double TransferMatrixCavity::transmission(double omega, double x_m) const
{
    return std::norm(amplitude(omega, x_m));
}

double TransferMatrixCavity::locate_max(double x_m, double lo, double hi) const
{
    constexpr int n = 2001;
    double h = (hi - lo) / (n - 1);
    int best = 0;
    double bestv = -1;
    for (int i = 0; i < n; i++) {
        double v = transmission(lo + h * i, x_m);
        if (v > bestv) {
            bestv = v;
            best = i;
        }
    }
    double c = lo + h * best;
    // 100x refinement around the coarse maximum, then Brent.
    double hf = h / 100;
    double cbest = c;
    bestv = -1;
    for (int i = -100; i <= 100; i++) {
        double v = transmission(c + hf * i, x_m);
        if (v > bestv) {
            bestv = v;
            cbest = c + hf * i;
        }
    }
    // Search in units of the refined spacing; Brent's tolerance is relative to
    // the abscissa and an absolute optical frequency would swamp it.
    auto r = boost::math::tools::brent_find_minima(
        [&] (double u) { return -transmission(cbest + u * hf, x_m); }, -1.0, 1.0, 40);
    return cbest + r.first * hf;
}

TransferMatrixCavity::Peak TransferMatrixCavity::characterise_peak(double x_m, double lo, double hi) const
{
    Peak p;
    p.omega = locate_max(x_m, lo, hi);
    p.height = transmission(p.omega, x_m);
    double half = p.height / 2;
    double step = (hi - lo) / 2000 / 100;
    auto crossing = [&] (double dir, double &out) {
        double inner = 0;
        double outer = step;
        while (transmission(p.omega + dir * outer, x_m) > half) {
            inner = outer;
            outer *= 1.5;
            if (outer > m_fsr / 2)
                return false;
        }
        for (int it = 0; it < 200 && outer - inner > 1e-12 * m_fsr; it++) {
            double mid = (inner + outer) / 2;
            if (transmission(p.omega + dir * mid, x_m) > half)
                inner = mid;
            else
                outer = mid;
        }
        out = (inner + outer) / 2;
        return true;
    };
    double left = 0, right = 0;
    if (!crossing(-1, left) || !crossing(1, right)) {
        p.diagnostic = "half-maximum not bracketed within half a free spectral range";
        return p;
    }
    p.fwhm = left + right;
    p.finesse = m_fsr / p.fwhm;
    p.converged = true;
    return p;
}

TransferMatrixCavity::Spectrum TransferMatrixCavity::spectrum(double x_m, std::span<const double> grid) const
{
    if (grid.size() < 3 || grid.back() - grid.front() < m_fsr)
        throw ValidationError("transfer-matrix spectrum: frequency grid must span one free spectral range");
    Spectrum s;
    s.transmission.resize(grid.size());
    for (size_t i = 0; i < grid.size(); i++)
        s.transmission[i] = transmission(grid[i], x_m);
    auto &T = s.transmission;
    for (size_t i = 1; i + 1 < grid.size(); i++) {
        if (!(T[i] > T[i - 1] && T[i] >= T[i + 1]))
            continue;
        auto pk = characterise_peak(x_m, grid[i - 1], grid[i + 1]);
        if (pk.converged && (pk.omega < grid[i - 1] || pk.omega > grid[i + 1])) {
            pk.converged = false;
            pk.diagnostic = "peak refinement left its bracket";
        }
        s.peaks.push_back(std::move(pk));
    }
    return s;
}

TransferMatrixCavity::Peak TransferMatrixCavity::tracked_mode(double x_m) const
{
    double u = m_r_analytic * std::cos(2 * kTwoPi * x_m / m_geom.wavelength);
    double predicted = m_fsr / std::numbers::pi * std::acos(u) + m_track_offset;
    return characterise_peak(x_m, predicted - m_fsr / 20, predicted + m_fsr / 20);
}

double TransferMatrixCavity::tracked_slope(double x_m, double h) const
{
    if (h == 0)
        h = m_geom.wavelength * 1e-4;
    double up = tracked_mode(x_m + h).omega;
    double down = tracked_mode(x_m - h).omega;
    return -(up - down) / (2 * h);
}

}
