#pragma once

#include "coupling.hpp"
#include "dynamics.hpp"
#include "optomech.hpp"
#include "params.hpp"

#include <vector>

namespace symcool::protocol {

// Atom density that the ensemble model should use: the configured density,
// or the one implied by an explicitly given resonant atom number.
double effective_density(const ExperimentConfig &config);

coupling::EnsembleCouplingResult ensemble_at(const ExperimentConfig &config, double Omega_a0, double Gamma_a);

// Everything that defines the coupled system at one lattice power.
struct OperatingPoint {
    double P0;
    double Gamma_a;
    double Omega_a0;
    optomech::OptomechResult optics;
    coupling::EnsembleCouplingResult ensemble;
    coupling::EffectiveAtoms atoms;
    dynamics::CoupledOscillatorSystem system;
};

// `Gamma_a_ref` fixes the atom number when the molasses is off (Gamma_a = 0).
OperatingPoint operating_point(const ExperimentConfig &config, double P0, double Gamma_a, bool with_atoms,
                               double Gamma_a_ref = 0, Warnings *warnings = nullptr);

struct PhaseModel {
    Phase phase;
    OperatingPoint point;
    dynamics::Segment segment;
};

std::vector<PhaseModel> build(const ExperimentConfig &config, bool with_atoms, Warnings *warnings = nullptr);

std::vector<dynamics::Segment> segments(const std::vector<PhaseModel> &phases);

}
