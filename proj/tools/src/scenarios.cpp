#include "symcool/tools/scenarios.hpp"
#include "symcool/optomech.hpp"

#include <boost/random/normal_distribution.hpp>

#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace symcool::tools {

std::vector<uint64_t> SeedRange::list() const
{
    std::vector<uint64_t> out;
    for (uint64_t s = first; s <= last; s++)
        out.push_back(s);
    return out;
}

SeedRange parse_seed_range(std::string_view text)
{
    auto parse = [&] (std::string_view s) {
        uint64_t v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw ValidationError("bad seed '" + std::string(s) + "' in '" + std::string(text) + "'");
        return v;
    };
    auto dots = text.find("..");
    SeedRange r;
    if (dots == std::string_view::npos) {
        r.first = r.last = parse(text);
    }
    else {
        r.first = parse(text.substr(0, dots));
        r.last = parse(text.substr(dots + 2));
    }
    if (r.last < r.first)
        throw ValidationError("seed range '" + std::string(text) + "' is empty");
    return r;
}

SpectrumResult run_spectrum(const ExperimentConfig &config, const SpectrumOptions &opt)
{
    if (opt.positions < 1 || opt.frequency_points < 2)
        throw ValidationError("spectrum needs at least one position and two frequencies");
    cavity::TransferMatrixCavity tm(config);
    cavity::CavityModel model(config);
    double fsr = tm.free_spectral_range();
    double lam = config.cavity.wavelength;
    double lo = tm.tracked_offset() - 0.1 * fsr;
    double hi = tm.tracked_offset() + 1.1 * fsr;
    std::vector<double> grid(opt.frequency_points);
    for (size_t i = 0; i < grid.size(); i++)
        grid[i] = lo + (hi - lo) * double(i) / double(grid.size() - 1);

    SpectrumResult res;
    for (unsigned p = 0; p < opt.positions; p++) {
        double x = opt.positions == 1 ? config.cavity.membrane_pos : lam / 2 * double(p) / double(opt.positions - 1);
        auto s = tm.spectrum(x, grid);
        for (size_t i = 0; i < grid.size(); i++) {
            res.x.push_back(x);
            res.omega.push_back(grid[i]);
            res.transmission.push_back(s.transmission[i]);
        }
        for (auto &pk: s.peaks) {
            if (!pk.converged)
                res.diagnostics.push_back("x_m = " + std::to_string(x) + " m: " + pk.diagnostic);
        }
        auto tracked = tm.tracked_mode(x);
        SpectrumSummaryRow row;
        row.x_m = x;
        row.omega_c = model.resonance(x);
        row.G = model.dispersive_coupling(x);
        row.finesse = tracked.finesse;
        row.kappa = tracked.fwhm;
        row.tm_omega = tracked.omega;
        row.tm_G = tm.tracked_slope(x);
        row.converged = tracked.converged;
        if (!tracked.converged)
            res.diagnostics.push_back("tracked mode at x_m = " + std::to_string(x) + " m: " + tracked.diagnostic);
        res.summary.push_back(row);
    }
    return res;
}

FinesseEndpoints finesse_endpoints(const ExperimentConfig &config)
{
    cavity::TransferMatrixCavity tm(config);
    double lam = config.cavity.wavelength;
    double xa = lam / 8, xb = 3 * lam / 8;
    auto a = tm.tracked_mode(xa);
    auto b = tm.tracked_mode(xb);
    if (!a.converged || !b.converged)
        throw NumericError("finesse endpoints: " + a.diagnostic + " " + b.diagnostic);
    if (a.finesse < b.finesse) {
        std::swap(a, b);
        std::swap(xa, xb);
    }
    return {xa, a.finesse, a.fwhm, xb, b.finesse, b.fwhm};
}

LatticeReport run_lattice(const ExperimentConfig &config, unsigned radial_points, Warnings *warnings)
{
    auto &lp = config.lattice;
    LatticeReport rep;
    rep.field = lattice::compute_field(lp, config.budget, config.constants, warnings);
    rep.Omega_a0_calculated = rep.field.Omega_a0;
    rep.Omega_a0_used = lattice::center_trap_frequency(lp, config.budget, config.constants);
    rep.Gamma_sc_well = lattice::center_scattering_rate(rep.field, lp, lattice::ScatteringReference::WellBottom,
                                                        config.constants);
    rep.Gamma_sc_max = lattice::center_scattering_rate(rep.field, lp, lattice::ScatteringReference::MaxDepth,
                                                       config.constants);
    rep.Pr_over_P0 = lattice::reflected_power_ratio(config.budget);
    for (unsigned i = 0; i < radial_points; i++) {
        double r = radial_points == 1 ? 0 : 3 * lp.w0 * double(i) / double(radial_points - 1);
        rep.r.push_back(r);
        rep.Omega_a.push_back(lattice::trap_frequency(r, rep.field, lp, config.constants));
    }
    return rep;
}

StepScan run_step_scan(const ExperimentConfig &config, unsigned points, double max_ratio)
{
    if (points < 2)
        throw ValidationError("step-scan needs at least two points");
    StepScan s;
    s.Delta_LA = config.lattice.Delta_LA;
    double Om = config.membrane.Omega_m;
    double P_max = lattice::power_for_trap_frequency(max_ratio * Om, config.lattice, config.budget,
                                                     config.constants);
    LatticeParams lp = config.lattice;
    for (unsigned i = 0; i < points; i++) {
        lp.P0 = P_max * double(i) / double(points - 1);
        double Oa = lattice::center_trap_frequency(lp, config.budget, config.constants);
        s.P0.push_back(lp.P0);
        s.Omega_a0.push_back(Oa);
        s.Gamma_sym.push_back(protocol::ensemble_at(config, Oa, config.atoms.Gamma_a).Gamma_sym_int);
    }
    s.plateau = protocol::ensemble_at(config, Om, config.atoms.Gamma_a).step_height;
    s.onset_Omega = NAN;
    for (size_t i = 1; i < s.Gamma_sym.size(); i++) {
        double half = s.plateau / 2;
        if (s.Gamma_sym[i - 1] < half && s.Gamma_sym[i] >= half) {
            double f = (half - s.Gamma_sym[i - 1]) / (s.Gamma_sym[i] - s.Gamma_sym[i - 1]);
            s.onset_Omega = s.Omega_a0[i - 1] + f * (s.Omega_a0[i] - s.Omega_a0[i - 1]);
            break;
        }
    }
    return s;
}

std::vector<StepScan> run_detuning_scan(const ExperimentConfig &config, std::span<const double> detunings,
                                        unsigned points, double max_ratio)
{
    std::vector<StepScan> out;
    for (double d: detunings) {
        if (d == 0)
            throw ValidationError("detuning-scan: zero atom-light detuning");
        ExperimentConfig c = config;
        c.lattice.Delta_LA = d;
        out.push_back(run_step_scan(c, points, max_ratio));
    }
    return out;
}

namespace {

struct SeedOutput {
    std::vector<double> T_with, T_without;
    std::vector<double> t;
    SeedSeries series;
    std::vector<std::string> warnings;
};

void aggregate(CoolTrace &trace, size_t n)
{
    size_t len = trace.per_seed.front().size();
    trace.mean.assign(len, 0.0);
    trace.sem.assign(len, 0.0);
    for (size_t i = 0; i < len; i++) {
        double s = 0, s2 = 0;
        for (auto &v: trace.per_seed) {
            s += v[i];
            s2 += v[i] * v[i];
        }
        double mean = s / double(n);
        trace.mean[i] = mean;
        trace.sem[i] = n > 1 ? std::sqrt(std::max(s2 / double(n) - mean * mean, 0.0) / double(n - 1)) : 0.0;
    }
}

}

CoolResult run_cool(const ExperimentConfig &config, const CoolOptions &opt, Warnings *warnings)
{
    if (opt.seeds.empty())
        throw ValidationError("cool: no seeds");
    if (config.protocol.phases.empty())
        throw ValidationError("cool: protocol has no phases");
    if (!(config.protocol.bandwidth > 0))
        throw ValidationError("cool: protocol.bandwidth must be positive");
    auto with = protocol::build(config, true, warnings);
    auto without = protocol::build(config, false, nullptr);
    auto seg_with = protocol::segments(with);
    auto seg_without = protocol::segments(without);

    CoolResult res;
    res.bandwidth = config.protocol.bandwidth;
    res.center = config.membrane.Omega_m + optomech::evaluate(config, config.lattice.P0).delta_Omega_opt;
    double t = 0;
    for (auto &p: config.protocol.phases) {
        res.phase_start.push_back(t);
        t += p.duration;
    }
    res.phase_start.push_back(t);

    double best = -1;
    double gamma_max = 0;
    for (size_t i = 0; i < with.size(); i++) {
        auto &sys = with[i].point.system;
        double gs = sys.sympathetic_damping();
        if (gs > best) {
            best = gs;
            res.resonant_phase = i;
        }
        gamma_max = std::max(gamma_max, sys.membrane.Gamma_total() + gs);
        res.T_plateau_expected.push_back(optomech::equilibrium_temperature(
            sys.membrane.T_bath, sys.membrane.Gamma_m, sys.membrane.Gamma_opt, gs));
    }
    {
        auto &sys = with[res.resonant_phase].point.system;
        res.Gamma_m = sys.membrane.Gamma_m;
        res.Gamma_opt = sys.membrane.Gamma_opt;
        res.Gamma_sym = sys.sympathetic_damping();
        res.T_bath = sys.membrane.T_bath;
        res.T_opt_expected = optomech::equilibrium_temperature(res.T_bath, res.Gamma_m, res.Gamma_opt, 0);
        res.T_sym_expected = optomech::equilibrium_temperature(res.T_bath, res.Gamma_m, res.Gamma_opt, res.Gamma_sym);
    }

    analysis::TemperatureCalibration cal{config.membrane.M_eff, res.center, 1.0};
    auto run_seed = [&] (size_t i) {
        SeedOutput out;
        Warnings w;
        dynamics::SimulationOptions so;
        so.dt = config.protocol.dt;
        so.record_stride = config.protocol.record_stride;
        so.T_initial = config.protocol.T_initial;
        so.seed = opt.seeds[i];
        so.constants = config.constants;
        {
            auto ts = dynamics::simulate(seg_with, so);
            auto tr = analysis::band_power_temperature(ts.x_m, ts.dt, res.center, res.bandwidth, cal, gamma_max, &w);
            out.T_with = std::move(tr.T);
            out.t = std::move(tr.t);
            if (opt.series_decimation > 0) {
                out.series.seed = so.seed;
                for (size_t k = 0; k < ts.x_m.size(); k += opt.series_decimation) {
                    out.series.t.push_back(ts.time(k));
                    out.series.x_m.push_back(ts.x_m[k]);
                    out.series.x_a.push_back(ts.x_a[k]);
                }
            }
        }
        {
            auto ts = dynamics::simulate(seg_without, so);
            out.T_without = analysis::band_power_temperature(ts.x_m, ts.dt, res.center, res.bandwidth, cal).T;
        }
        out.warnings = std::move(w.messages);
        return out;
    };
    auto outs = parallel_map(opt.seeds.size(), run_seed, opt.threads);

    std::set<std::string> seen;
    for (auto &o: outs) {
        for (auto &m: o.warnings) {
            if (seen.insert(m).second)
                warn(warnings, m);
        }
    }
    res.t = outs.front().t;
    for (auto &o: outs) {
        res.with_atoms.per_seed.push_back(std::move(o.T_with));
        res.without_atoms.per_seed.push_back(std::move(o.T_without));
        if (opt.series_decimation > 0)
            res.with_atoms.series.push_back(std::move(o.series));
    }
    aggregate(res.with_atoms, outs.size());
    aggregate(res.without_atoms, outs.size());

    double t0 = res.phase_start[res.resonant_phase];
    double t1 = res.phase_start[res.resonant_phase + 1];
    double Tw = analysis::window_enbw(analysis::Window::Hann) * kTwoPi / res.bandwidth;
    res.minimum = analysis::windowed_minimum(res.t, res.with_atoms.mean, config.protocol.average_window, t0, t1);
    res.decay = analysis::fit_exponential_decay(res.t, res.with_atoms.mean, t0 + Tw / 2,
                                                std::min(t0 + opt.decay_fit_span, t1));
    double s = 0;
    size_t n = 0;
    for (size_t i = 0; i < res.t.size(); i++) {
        if (res.t[i] >= t0 + 0.6 * (t1 - t0) && res.t[i] + Tw / 2 <= t1) {
            s += res.without_atoms.mean[i];
            n++;
        }
    }
    res.T_equilibrium_without = n ? s / double(n) : NAN;
    return res;
}

CalibrationDefaults calibration_defaults(const ExperimentConfig &config)
{
    auto op = optomech::evaluate(config, config.lattice.P0);
    return {op.Gamma_opt / op.P_tot, op.T_L / (op.P_tot * op.P_tot), config.membrane.T0};
}

CalibrationData forward_calibration(const CalibrationDefaults &p, double Gamma_m, double P_min, double P_max,
                                    unsigned points, double noise, uint64_t seed)
{
    if (points < 2 || !(P_min > 0) || !(P_max > P_min))
        throw ValidationError("calibrate: need 0 < P_min < P_max and at least two points");
    CalibrationData d;
    std::mt19937_64 rng(seed);
    boost::random::normal_distribution<double> gauss(0.0, 1.0);
    for (unsigned i = 0; i < points; i++) {
        double P = P_min * std::pow(P_max / P_min, double(i) / double(points - 1));
        double T = optomech::calibration_model(P, p.alpha, p.beta, p.T0, Gamma_m);
        if (noise > 0 && seed != 0)
            T *= 1 + noise * gauss(rng);
        d.P_tot.push_back(P);
        d.T_opt.push_back(T);
    }
    return d;
}

analysis::StepModelFixed step_fixed_parameters(const ExperimentConfig &config)
{
    analysis::StepModelFixed f{};
    f.Omega_m = config.membrane.Omega_m;
    f.Gamma_a = config.atoms.Gamma_a;
    f.w0 = config.lattice.w0;
    f.R_a = config.atoms.R_a;
    f.M = config.membrane.M_eff;
    f.finesse = config.cavity.finesse;
    f.r_m = config.membrane.r_m;
    f.eta2 = config.budget.eta2;
    f.t2 = config.budget.t2;
    f.g_fraction = config.cavity.g_fraction;
    f.constants = config.constants;
    return f;
}

GroundStateReport run_groundstate(const ExperimentConfig &config, Warnings *warnings)
{
    auto op = protocol::operating_point(config, config.lattice.P0, config.atoms.Gamma_a, true, 0, warnings);
    GroundStateReport r{};
    r.Omega_a0 = op.Omega_a0;
    r.N_r = op.ensemble.N_r;
    r.g_Nr = op.ensemble.g_Nr;
    r.C = coupling::cooperativity(r.g_Nr, config.budget.eta2, config.budget.t2, config.atoms.Gamma_a,
                                  config.membrane.Gamma_m);
    r.T_bath = op.optics.T_bath;
    auto gs = coupling::ground_state_criterion(r.C, r.T_bath, config.membrane.Omega_m, config.constants);
    r.n_bath = gs.n_bath;
    r.satisfied = gs.satisfied;
    r.n_ss_literature = coupling::kLiteratureSteadyStatePhonons;
    return r;
}

}
