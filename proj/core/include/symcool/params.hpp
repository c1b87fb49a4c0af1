#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace symcool {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angular frequencies live in rad/s everywhere inside the library.  These two
// helpers are the only place a factor of 2π is applied or removed.
constexpr double hz_to_angular(double f_hz) { return kTwoPi * f_hz; }
constexpr double angular_to_hz(double omega) { return omega / kTwoPi; }

struct PhysicalConstants {
    double hbar;     // J s
    double k_B;      // J/K
    double c;        // m/s
    double m_Rb87;   // kg
    double I_s;      // W/m^2, cycling transition
    double Gamma_D2; // rad/s, natural linewidth

    static constexpr PhysicalConstants standard()
    {
        return {1.054571817e-34, 1.380649e-23, 299792458.0,
                86.909 * 1.66054e-27, 17.0, kTwoPi * 6.1e6};
    }
};

struct MembraneMode {
    double Omega_m = 0;   // rad/s
    double Gamma_m = 0;   // 1/s, energy damping
    double M_eff = 0;     // kg
    double Q_m = 0;       // Omega_m / Gamma_m
    double T0 = 0;        // K, support temperature
    double rho = 0;       // kg/m^3
    double thickness = 0; // m
    double side = 0;      // m
    double n_refr = 0;
    double r_m = 0;             // |field reflectivity|
    double absorption_frac = 0; // single-pass absorbed power fraction
};

struct CavityGeometry {
    double length = 0;     // m
    double R1 = 0;         // front mirror, intensity
    double R2 = 0;         // back mirror, intensity
    double wavelength = 0; // m
    double membrane_pos = 0;   // m, x_m relative to a node of the resonance curve
    double omega_0 = NAN;      // rad/s; NaN selects omega_c(lambda/8) = 2 pi c / lambda
    double front_fraction = 0.5; // length of the front sub-cavity in units of L

    // Operating point of the dataset being modelled.
    double finesse = 0;
    double detuning_over_kappa = 0;
    double g_fraction = 1; // G/G_max prefactor applied to g_N
};

struct AtomEnsemble {
    double N_atoms = 0;
    double n_a = 0;       // atoms/m^3, from absorption imaging
    double n_a_fit = 0;   // atoms/m^3, from the step-model fit
    bool use_fit_density = false;
    std::optional<double> N_resonant; // overrides the number derived from density
    double R_a = 0;          // m
    double Gamma_a = 0;      // 1/s
    double T_atoms = 0;      // K
    double tau_molasses = 0; // s

    double density() const { return use_fit_density ? n_a_fit : n_a; }
};

struct CouplingBudget {
    double eta2 = 1;
    double t2 = 1;

    double asymmetry() const { return eta2 * t2; }
};

enum class TrapCalibration { Calculated, Measured };

struct LatticeParams {
    double P0 = 0;       // W at the atoms
    double w0 = 0;       // m
    double Delta_LA = 0; // rad/s, signed
    double k_L = 0;      // rad/m
    double phi = 0;      // rad
    TrapCalibration calibration = TrapCalibration::Calculated;
    // The measured center trap frequency and the point it was measured at.
    double Omega_a0_measured = 0;
    double P_ref = 0;
    double Delta_ref = 0;
};

struct LaserNoiseParams {
    double S_I = 0;      // 1/Hz
    double S_phidot = 0; // rad^2 Hz, i.e. (2 pi)^2 Hz^2/Hz
    double P_det = 0;    // W
    double dT_abs_per_W = 0; // K per absorbed watt
};

struct Phase {
    std::string name;
    double duration = 0;
    double P0 = 0;
    double Gamma_a = 0;
    bool atoms_present = true;
    double atom_lifetime = 0; // s, 0 means the atom number stays constant
};

struct ProtocolSchedule {
    std::vector<Phase> phases;
    std::optional<double> bath_temperature; // K, per-dataset override
    double bandwidth = 0;       // rad/s, noise-equivalent bandwidth of the band-power filter
    double dt = 0;              // s, 0 means 2 pi / (40 Omega_max)
    unsigned record_stride = 1;
    double T_initial = 0;       // K, 0 means start at the bath temperature
    double average_window = 0.044; // s
};

struct ExperimentConfig {
    PhysicalConstants constants = PhysicalConstants::standard();
    MembraneMode membrane;
    CavityGeometry cavity;
    AtomEnsemble atoms;
    CouplingBudget budget;
    LatticeParams lattice;
    LaserNoiseParams noise;
    ProtocolSchedule protocol;
};

struct Violation {
    std::string field;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate(const ExperimentConfig &config);

double effective_mass_plate(double rho, double d, double l);

// Ratio of the measured effective mass to the plate estimate.
inline constexpr double kMeasuredMassRatio = 2.2;

}
