#include "symcool/params.hpp"

namespace symcool {

namespace {

struct Checker {
    ValidationReport report;

    void require(bool ok, const char *field, std::string msg)
    {
        if (!ok) {
            report.push_back({field, std::move(msg)});
        }
    }
    void positive(double v, const char *field)
    {
        require(v > 0, field, "must be positive");
    }
    void non_negative(double v, const char *field)
    {
        require(v >= 0, field, "must be non-negative");
    }
};

}

ValidationReport validate(const ExperimentConfig &config)
{
    Checker ck;
    auto &k = config.constants;
    ck.positive(k.hbar, "constants.hbar");
    ck.positive(k.k_B, "constants.k_B");
    ck.positive(k.c, "constants.c");
    ck.positive(k.m_Rb87, "constants.m_Rb87");
    ck.positive(k.I_s, "constants.I_s");
    ck.positive(k.Gamma_D2, "constants.Gamma_D2");

    auto &m = config.membrane;
    ck.positive(m.Omega_m, "membrane.Omega_m");
    ck.positive(m.Gamma_m, "membrane.Gamma_m");
    ck.positive(m.M_eff, "membrane.M_eff");
    ck.positive(m.T0, "membrane.T0");
    if (m.Omega_m > 0 && m.Gamma_m > 0) {
        double q = m.Omega_m / m.Gamma_m;
        ck.require(std::abs(m.Q_m - q) <= 1e-9 * q, "membrane.Q_m",
                   "inconsistent with Omega_m/Gamma_m = " + std::to_string(q));
    }
    ck.positive(m.thickness, "membrane.thickness");
    ck.require(m.thickness < 0.1 * config.cavity.wavelength, "membrane.thickness",
               "must be much thinner than the wavelength");
    ck.positive(m.n_refr, "membrane.n_refr");
    ck.require(m.r_m >= 0 && m.r_m < 1, "membrane.r_m", "must lie in [0, 1)");
    ck.require(m.absorption_frac >= 0 && m.absorption_frac < 0.01, "membrane.absorption_frac",
               "must be non-negative and small");

    auto &cav = config.cavity;
    ck.positive(cav.length, "cavity.length");
    ck.positive(cav.wavelength, "cavity.wavelength");
    ck.require(cav.R1 > 0 && cav.R1 < cav.R2 && cav.R2 <= 1, "cavity.R1",
               "reflectivities must satisfy 0 < R1 < R2 <= 1");
    ck.require(cav.front_fraction > 0 && cav.front_fraction < 1, "cavity.front_fraction",
               "must lie in (0, 1)");
    ck.positive(cav.finesse, "cavity.finesse");
    ck.require(cav.g_fraction > 0 && cav.g_fraction <= 1, "cavity.g_fraction", "must lie in (0, 1]");

    auto &a = config.atoms;
    ck.non_negative(a.N_atoms, "atoms.N_atoms");
    ck.positive(a.n_a, "atoms.n_a");
    ck.positive(a.n_a_fit, "atoms.n_a_fit");
    ck.positive(a.R_a, "atoms.R_a");
    ck.positive(a.Gamma_a, "atoms.Gamma_a");
    ck.non_negative(a.T_atoms, "atoms.T_atoms");
    ck.positive(a.tau_molasses, "atoms.tau_molasses");
    if (a.N_resonant)
        ck.positive(*a.N_resonant, "atoms.N_resonant");

    auto &b = config.budget;
    ck.require(b.eta2 > 0 && b.eta2 <= 1, "budget.eta2", "must lie in (0, 1]");
    ck.require(b.t2 > 0 && b.t2 <= 1, "budget.t2", "must lie in (0, 1]");

    auto &l = config.lattice;
    ck.non_negative(l.P0, "lattice.P0");
    ck.positive(l.w0, "lattice.w0");
    ck.require(l.Delta_LA != 0, "lattice.Delta_LA", "must be non-zero");
    ck.positive(l.k_L, "lattice.k_L");
    if (l.calibration == TrapCalibration::Measured) {
        ck.positive(l.Omega_a0_measured, "lattice.Omega_a0_measured");
        ck.positive(l.P_ref, "lattice.P_ref");
        ck.require(l.Delta_ref != 0, "lattice.Delta_ref", "must be non-zero");
    }

    auto &n = config.noise;
    ck.non_negative(n.S_I, "noise.S_I");
    ck.non_negative(n.S_phidot, "noise.S_phidot");
    ck.non_negative(n.P_det, "noise.P_det");
    ck.non_negative(n.dT_abs_per_W, "noise.dT_abs_per_W");

    auto &p = config.protocol;
    for (auto &ph: p.phases) {
        ck.require(ph.duration > 0, "protocol.phases", "phase " + ph.name + ": duration must be positive");
        ck.require(ph.P0 >= 0, "protocol.phases", "phase " + ph.name + ": P0 must be non-negative");
        ck.require(ph.Gamma_a >= 0, "protocol.phases", "phase " + ph.name + ": Gamma_a must be non-negative");
        ck.require(ph.atom_lifetime >= 0, "protocol.phases",
                   "phase " + ph.name + ": atom_lifetime must be non-negative");
    }
    if (p.bath_temperature)
        ck.positive(*p.bath_temperature, "protocol.bath_temperature");
    ck.non_negative(p.bandwidth, "protocol.bandwidth");
    ck.non_negative(p.dt, "protocol.dt");
    ck.non_negative(p.T_initial, "protocol.T_initial");
    ck.positive(p.average_window, "protocol.average_window");
    return ck.report;
}

double effective_mass_plate(double rho, double d, double l)
{
    return rho * d * l * l / 4;
}

}
