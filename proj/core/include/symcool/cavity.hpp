#pragma once

#include "errors.hpp"
#include "params.hpp"

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace symcool::cavity {

struct SlabReflectivity {
    std::complex<double> r;
    double magnitude;
    double phase;
};

// Normal-incidence field reflectivity of a lossless dielectric slab in vacuum.
SlabReflectivity thin_film_reflectivity(double d, double n_refr, double lambda);

// Analytic membrane-in-the-middle model.
class CavityModel {
public:
    CavityModel(const CavityGeometry &geometry, double r_m,
                const PhysicalConstants &k = PhysicalConstants::standard());
    explicit CavityModel(const ExperimentConfig &config);

    const CavityGeometry &geometry() const { return m_geom; }
    double r_m() const { return m_r; }
    double free_spectral_range() const { return m_fsr; }
    double omega_0() const { return m_omega0; }

    // omega_c(x) = (omega_FSR/pi) acos(|r_m| cos(4 pi x/lambda)) + omega_0
    double resonance(double x_m) const;
    // G = -d omega_c/d x_m
    double dispersive_coupling(double x_m) const;
    double max_dispersive_coupling() const;
    double kappa(double finesse) const { return m_fsr / finesse; }

private:
    CavityGeometry m_geom;
    double m_r;
    double m_fsr;
    double m_omega0;
};

struct CavityOperatingPoint {
    double x_m;
    double omega_c;
    double G;
    double finesse;
    double kappa;
    double Delta;

    // Small-detuning approximations downstream assume |Delta| < kappa/2.
    bool small_detuning() const { return std::abs(Delta) < kappa / 2; }
};

CavityOperatingPoint operating_point(const ExperimentConfig &config);

struct ReflectedPhase {
    double phi;
    double dphi_dDelta;
};

ReflectedPhase reflected_phase(double Delta, double kappa);

double intracavity_photons(double P_in, double Delta, double kappa, double omega_c,
                           const PhysicalConstants &k = PhysicalConstants::standard());

// Two coupled sub-cavities described by 2x2 field transfer matrices:
// front mirror, free space, dielectric slab, free space, back mirror.
class TransferMatrixCavity {
public:
    TransferMatrixCavity(const CavityGeometry &geometry, double d, double n_refr,
                         const PhysicalConstants &k = PhysicalConstants::standard());
    explicit TransferMatrixCavity(const ExperimentConfig &config);

    double free_spectral_range() const { return m_fsr; }

    // Intensity transmission at angular frequency omega, membrane at x_m.
    double transmission(double omega, double x_m) const;

    struct Peak {
        double omega = 0;
        double height = 0;
        double fwhm = 0;
        double finesse = 0;
        bool converged = false;
        std::string diagnostic;
    };

    struct Spectrum {
        std::vector<double> transmission;
        std::vector<Peak> peaks;
    };

    // Evaluates the transmission on the grid and characterises every local
    // maximum.  The grid has to cover at least one free spectral range.
    Spectrum spectrum(double x_m, std::span<const double> omega_grid) const;

    // Refines a single peak starting from a bracket [lo, hi] that contains it.
    Peak characterise_peak(double x_m, double lo, double hi) const;

    // The resonance that follows the analytic omega_c(x_m) branch.  Its
    // offset is fixed once from the peak nearest 2 pi c / lambda at x = lambda/8.
    Peak tracked_mode(double x_m) const;
    double tracked_offset() const { return m_track_offset; }

    // -d omega/d x of the tracked mode by central differences of peak positions.
    double tracked_slope(double x_m, double h = 0) const;

private:
    std::complex<double> amplitude(double omega, double x_m) const;
    double locate_max(double x_m, double lo, double hi) const;

    CavityGeometry m_geom;
    PhysicalConstants m_k;
    double m_d;
    double m_n;
    double m_fsr;
    double m_dL0;
    double m_r_analytic;
    double m_track_offset;
};

}
