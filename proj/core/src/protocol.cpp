#include "symcool/protocol.hpp"
#include "symcool/lattice.hpp"

#include <cmath>

namespace symcool::protocol {

double effective_density(const ExperimentConfig &config)
{
    auto &a = config.atoms;
    if (a.N_resonant) {
        double w0 = config.lattice.w0;
        return *a.N_resonant * config.membrane.Omega_m /
            (std::numbers::pi * std::numbers::pi * w0 * w0 * a.R_a * a.Gamma_a);
    }
    return a.density();
}

coupling::EnsembleCouplingResult ensemble_at(const ExperimentConfig &config, double Omega_a0, double Gamma_a)
{
    coupling::EnsembleInputs in;
    in.n_a = effective_density(config);
    in.w0 = config.lattice.w0;
    in.R_a = config.atoms.R_a;
    in.Gamma_a = Gamma_a;
    in.Omega_m = config.membrane.Omega_m;
    in.Omega_a0 = Omega_a0;
    in.M = config.membrane.M_eff;
    in.finesse = config.cavity.finesse;
    in.r_m = config.membrane.r_m;
    in.eta2 = config.budget.eta2;
    in.t2 = config.budget.t2;
    in.g_fraction = config.cavity.g_fraction;
    return coupling::ensemble_coupling(in, config.constants);
}

OperatingPoint operating_point(const ExperimentConfig &config, double P0, double Gamma_a, bool with_atoms,
                               double Gamma_a_ref, Warnings *warnings)
{
    auto &mem = config.membrane;
    OperatingPoint op{};
    op.P0 = P0;
    op.Gamma_a = Gamma_a;
    LatticeParams lp = config.lattice;
    lp.P0 = P0;
    op.Omega_a0 = P0 > 0 ? lattice::center_trap_frequency(lp, config.budget, config.constants) : 0;
    op.optics = optomech::evaluate(config, P0, warnings);

    auto &sys = op.system;
    sys.membrane.M = mem.M_eff;
    sys.membrane.Omega = mem.Omega_m + op.optics.delta_Omega_opt;
    sys.membrane.Gamma_m = mem.Gamma_m;
    sys.membrane.Gamma_opt = op.optics.Gamma_opt;
    sys.membrane.T_bath = op.optics.T_bath;
    sys.asymmetry = config.budget.asymmetry();

    double gamma_ref = Gamma_a > 0 ? Gamma_a : (Gamma_a_ref > 0 ? Gamma_a_ref : config.atoms.Gamma_a);
    if (with_atoms && op.Omega_a0 > 0) {
        op.ensemble = ensemble_at(config, op.Omega_a0, gamma_ref);
        // The atoms see the spring-shifted membrane, so the effective
        // oscillator is tuned against sys.membrane.Omega.
        op.atoms = coupling::effective_oscillator(op.ensemble.Gamma_sym_int, op.Omega_a0, sys.membrane.Omega, gamma_ref,
                                                  mem.M_eff, config.cavity.finesse, mem.r_m, config.budget.eta2,
                                                  config.budget.t2, config.cavity.g_fraction, config.constants);
        if (op.atoms.N > 0) {
            double m = config.constants.m_Rb87;
            sys.atoms.mass = op.atoms.N * m;
            sys.atoms.Omega = op.atoms.Omega_a;
            sys.atoms.Gamma = Gamma_a;
            sys.K = coupling::spring_constant(op.atoms.N, op.atoms.Omega_a, config.cavity.finesse, mem.r_m, m,
                                              config.cavity.g_fraction);
        }
    }
    return op;
}

std::vector<PhaseModel> build(const ExperimentConfig &config, bool with_atoms, Warnings *warnings)
{
    std::vector<PhaseModel> out;
    double gamma_ref = config.atoms.Gamma_a;
    for (auto &ph: config.protocol.phases) {
        if (ph.Gamma_a > 0)
            gamma_ref = ph.Gamma_a;
        PhaseModel pm;
        pm.phase = ph;
        pm.point = operating_point(config, ph.P0, ph.Gamma_a, with_atoms && ph.atoms_present, gamma_ref, warnings);
        pm.segment.name = ph.name;
        pm.segment.duration = ph.duration;
        pm.segment.system = pm.point.system;
        pm.segment.atom_lifetime = ph.atom_lifetime;
        out.push_back(std::move(pm));
    }
    return out;
}

std::vector<dynamics::Segment> segments(const std::vector<PhaseModel> &phases)
{
    std::vector<dynamics::Segment> out;
    for (auto &p: phases)
        out.push_back(p.segment);
    return out;
}

}
