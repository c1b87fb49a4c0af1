#pragma once

#include "errors.hpp"
#include "params.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace symcool::dynamics {

struct MembraneSide {
    double M = 0;
    double Omega = 0;     // rad/s, including any optical spring shift
    double Gamma_m = 0;   // intrinsic damping, sets the thermal force
    double Gamma_opt = 0; // cold damping from the cavity, adds no noise here
    double T_bath = 0;    // K

    double Gamma_total() const { return Gamma_m + Gamma_opt; }
};

struct AtomSide {
    double mass = 0;  // N m; zero means no atoms
    double Omega = 0;
    double Gamma = 0;
};

struct CoupledOscillatorSystem {
    MembraneSide membrane;
    AtomSide atoms;
    double K = 0;         // N/m, force on the atoms per membrane displacement
    double asymmetry = 1; // eta^2 t^2, extra factor on the membrane-side force

    bool coupled() const { return K != 0 && atoms.mass > 0; }
    // One-sided thermal force PSD 4 M Gamma_m k_B T_bath.
    double thermal_force_psd(const PhysicalConstants &k = PhysicalConstants::standard()) const;
    // Coupling constant implied by K and the two masses.
    double coupling_rate() const;
    // Gamma_sym and delta_Omega_m from the Lorentzian elimination.
    double sympathetic_damping() const;
    double frequency_pull() const;
};

struct Susceptibilities {
    std::complex<double> chi_a;
    std::complex<double> chi_m;
    std::complex<double> chi_eff;
};

// Lorentzian susceptibilities; chi_eff is the exact elimination of the atoms.
Susceptibilities analytic_susceptibilities(const CoupledOscillatorSystem &sys, double Omega,
                                           Warnings *warnings = nullptr);

// chi' with the atoms folded into Gamma_sym and delta_Omega_m.
std::complex<double> reduced_susceptibility(const CoupledOscillatorSystem &sys, double Omega);

struct Spectrum {
    std::vector<double> omega; // rad/s
    std::vector<double> S_x;   // m^2/Hz, one-sided
};

Spectrum analytic_spectrum(const CoupledOscillatorSystem &sys, std::span<const double> grid,
                           const PhysicalConstants &k = PhysicalConstants::standard());

// Complex roots of (Omega_m - W - i Gamma_m/2)(Omega_a - W - i Gamma_a/2) - eta^2 t^2 g^2.
std::array<std::complex<double>, 2> normal_mode_roots(const CoupledOscillatorSystem &sys);

struct Segment {
    std::string name;
    double duration = 0;
    CoupledOscillatorSystem system;
    double atom_lifetime = 0; // s; 0 keeps the atom number constant
};

struct State {
    double x_m = 0, v_m = 0, x_a = 0, v_a = 0;
};

struct SimulationOptions {
    double dt = 0; // 0 picks 2 pi / (40 Omega_max)
    unsigned record_stride = 1;
    uint64_t seed = 1;
    std::optional<State> initial;
    double T_initial = 0; // thermal start for the membrane; 0 means the first segment's bath
    bool record_velocity = false;
    PhysicalConstants constants = PhysicalConstants::standard();
};

struct TimeSeries {
    double dt = 0;          // sample spacing
    double integration_dt = 0;
    uint64_t seed = 0;
    std::vector<double> x_m;
    std::vector<double> x_a;
    std::vector<double> v_m; // empty unless requested
    std::vector<size_t> segment_start; // first sample index of each segment
    State final_state;

    double time(size_t i) const { return dt * static_cast<double>(i); }
};

double default_time_step(std::span<const Segment> segments);
double max_time_step(std::span<const Segment> segments);

// Integrates the coupled equations of motion with a Strang splitting:
// half coupling kick, exact harmonic rotation, exact Ornstein-Uhlenbeck
// damping and thermal impulse, rotation, half kick.
TimeSeries simulate(std::span<const Segment> segments, const SimulationOptions &options);

struct RingdownResult {
    double rate;       // energy decay rate, 1/s
    double r_squared;
    bool poor_fit;
    std::vector<double> t;
    std::vector<double> energy; // block-averaged M (Omega^2 x^2 + v^2)/2
};

// Starts the membrane at `amplitude` and fits the decay of its energy.
// `duration` = 0 runs for three expected energy e-folds.
RingdownResult ringdown(const CoupledOscillatorSystem &sys, double amplitude, double dt, uint64_t seed,
                        double duration = 0,
                        const PhysicalConstants &k = PhysicalConstants::standard());

}
