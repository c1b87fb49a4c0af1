#include "symcool/config.hpp"
#include "symcool/errors.hpp"
#include "symcool/tools/io.hpp"
#include "symcool/tools/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace symcool;
using namespace symcool::tools;

namespace {

enum Exit { kOk = 0, kValidation = 2, kNumeric = 3, kFit = 4 };

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out = "out";
    std::string seeds = "1..20";
    std::string figure;
    bool strict = false;
    unsigned threads = 0;
};

void add_common(CLI::App *sub, Common &c, bool seeds = false)
{
    sub->add_option("--config", c.config, "configuration file (default: $SYMCOOL_CONFIG_DIR/paper-baseline.cfg)");
    sub->add_option("--set", c.sets, "override a config key, key=value (repeatable)");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--figure", c.figure, "apply the [figure.<name>] section of the config");
    sub->add_flag("--strict", c.strict, "treat non-converged fits and peaks as failures");
    if (seeds) {
        sub->add_option("--seeds", c.seeds, "seed range A..B");
        sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    }
}

std::string resolve_config(const std::string &given)
{
    const char *env = std::getenv("SYMCOOL_CONFIG_DIR");
    fs::path dir = env ? fs::path(env) : fs::path("configs");
    if (given.empty())
        return (dir / "paper-baseline.cfg").string();
    fs::path p(given);
    if (!fs::exists(p) && p.is_relative() && fs::exists(dir / p))
        return (dir / p).string();
    return given;
}

// Loaded configuration plus everything that identifies the run.
struct Context {
    Common common;
    std::string config_path;
    std::string config_text;
    ExperimentConfig config;
    Manifest manifest;
    fs::path out;
    Warnings warnings;

    Context(const Common &c, const std::string &scenario) : common(c), manifest(scenario) {}

    fs::path output(const std::string &name)
    {
        return out / name;
    }

    void written(const fs::path &p) { manifest.add_output(p); }

    void finish()
    {
        manifest.write(out);
        for (auto &w: warnings.messages)
            std::cerr << "warning: " << w << '\n';
    }
};

Context open(const Common &c, const std::string &scenario, const std::string &params = {})
{
    Context ctx(c, scenario);
    ctx.config_path = resolve_config(c.config);
    ctx.config_text = read_file(ctx.config_path);
    std::vector<Override> ov;
    for (auto &s: c.sets)
        ov.push_back(parse_override(s));
    ctx.config = build_config(parse_config_text(ctx.config_text), c.figure, ov);
    auto report = validate(ctx.config);
    if (!report.empty()) {
        std::string msg = "configuration is invalid:";
        for (auto &v: report)
            msg += "\n  " + v.field + ": " + v.message;
        throw ValidationError(msg);
    }
    ctx.manifest.add_input("config", ctx.config_text);
    ctx.manifest.add_input("figure", c.figure);
    for (auto &s: c.sets)
        ctx.manifest.add_input("set", s);
    ctx.manifest.add_input("parameters", params);
    ctx.out = c.out;
    fs::create_directories(ctx.out);
    return ctx;
}

void print(const std::string &name, double value, const std::string &unit)
{
    std::cout << name << " = " << format_number(value) << (unit.empty() ? "" : " " + unit) << '\n';
}

void emit_summary(Context &ctx, const std::string &file, const std::vector<SummaryRow> &rows)
{
    for (auto &r: rows)
        print(r.quantity, r.value, r.unit == "1" ? "" : r.unit);
    auto p = ctx.output(file);
    write_summary(p, rows);
    ctx.written(p);
}

void fit_rows(std::vector<SummaryRow> &rows, const fit::FitResult &f, const std::vector<std::string> &units)
{
    for (size_t i = 0; i < f.names.size(); i++) {
        rows.push_back({f.names[i], f.values[i], units[i]});
        rows.push_back({f.names[i] + "_sigma", f.sigma[i], units[i]});
    }
    rows.push_back({"residual_norm", f.residual_norm, "1"});
    rows.push_back({"converged", f.converged ? 1.0 : 0.0, "1"});
    rows.push_back({"iterations", double(f.iterations), "1"});
}

int strict_fit(const Common &c, const fit::FitResult &f, const std::string &what)
{
    bool bad = !f.converged || std::any_of(f.sigma.begin(), f.sigma.end(), [] (double s) { return std::isinf(s); });
    if (bad) {
        std::cerr << what << ": " << (f.diagnostic.empty() ? "fit did not converge" : f.diagnostic) << '\n';
        if (c.strict)
            return kFit;
    }
    return kOk;
}

int cmd_spectrum(const Common &c, const SpectrumOptions &o)
{
    auto ctx = open(c, "spectrum", std::to_string(o.positions) + "," + std::to_string(o.frequency_points));
    auto res = run_spectrum(ctx.config, o);
    auto p = ctx.output("spectrum.csv");
    write_csv(p, {{"x_m", "m"}, {"omega", "rad/s"}, {"transmission", "1"}}, {res.x, res.omega, res.transmission});
    ctx.written(p);
    std::vector<double> x, oc, G, F, k, tmo, tmg;
    for (auto &r: res.summary) {
        x.push_back(r.x_m);
        oc.push_back(r.omega_c);
        G.push_back(r.G);
        F.push_back(r.finesse);
        k.push_back(r.kappa);
        tmo.push_back(r.tm_omega);
        tmg.push_back(r.tm_G);
    }
    p = ctx.output("spectrum_summary.csv");
    write_csv(p, {{"x_m", "m"}, {"omega_c", "rad/s"}, {"G", "rad/s/m"}, {"finesse", "1"}, {"kappa", "rad/s"},
                  {"tm_omega", "rad/s"}, {"tm_G", "rad/s/m"}},
              {x, oc, G, F, k, tmo, tmg});
    ctx.written(p);
    auto ends = finesse_endpoints(ctx.config);
    cavity::CavityModel model(ctx.config);
    emit_summary(ctx, "spectrum_endpoints.csv", {
        {"omega_FSR", model.free_spectral_range(), "rad/s"},
        {"G_max", model.max_dispersive_coupling(), "rad/s/m"},
        {"x_high", ends.x_high, "m"},
        {"finesse_high", ends.finesse_high, "1"},
        {"kappa_high", ends.kappa_high, "rad/s"},
        {"x_low", ends.x_low, "m"},
        {"finesse_low", ends.finesse_low, "1"},
        {"kappa_low", ends.kappa_low, "rad/s"},
    });
    for (auto &d: res.diagnostics)
        std::cerr << "peak: " << d << '\n';
    ctx.finish();
    return c.strict && !res.diagnostics.empty() ? kNumeric : kOk;
}

int cmd_lattice(const Common &c, unsigned points)
{
    auto ctx = open(c, "lattice", std::to_string(points));
    auto rep = run_lattice(ctx.config, points, &ctx.warnings);
    double hbar = ctx.config.constants.hbar;
    emit_summary(ctx, "lattice.csv", {
        {"V0", rep.field.V0, "J"},
        {"V0_over_hbar", rep.field.V0 / hbar, "rad/s"},
        {"V_d", rep.field.V_d, "J"},
        {"V_m", rep.field.V_m, "J"},
        {"Omega_a0_calculated", rep.Omega_a0_calculated, "rad/s"},
        {"Omega_a0_used", rep.Omega_a0_used, "rad/s"},
        {"Gamma_sc_well_bottom", rep.Gamma_sc_well, "1/s"},
        {"Gamma_sc_max_depth", rep.Gamma_sc_max, "1/s"},
        {"Pr_over_P0", rep.Pr_over_P0, "1"},
        {"Pr_over_P0_measured", lattice::kMeasuredReflectedPowerRatio, "1"},
    });
    auto p = ctx.output("lattice_radial.csv");
    write_csv(p, {{"r", "m"}, {"Omega_a", "rad/s"}}, {rep.r, rep.Omega_a});
    ctx.written(p);
    ctx.finish();
    return kOk;
}

void write_scan(Context &ctx, const std::string &file, const StepScan &s)
{
    auto p = ctx.output(file);
    write_csv(p, {{"P0", "W"}, {"Omega_a0", "rad/s"}, {"Gamma_sym_int", "1/s"}}, {s.P0, s.Omega_a0, s.Gamma_sym});
    ctx.written(p);
}

int cmd_step_scan(const Common &c, unsigned points, double max_ratio)
{
    auto ctx = open(c, "step-scan", std::to_string(points) + "," + format_number(max_ratio));
    auto s = run_step_scan(ctx.config, points, max_ratio);
    write_scan(ctx, "step_scan.csv", s);
    emit_summary(ctx, "step_scan_summary.csv", {
        {"plateau", s.plateau, "1/s"},
        {"Gamma_sym_at_max_power", s.Gamma_sym.back(), "1/s"},
        {"onset_Omega_a0", s.onset_Omega, "rad/s"},
    });
    ctx.finish();
    return kOk;
}

int cmd_detuning_scan(const Common &c, const std::vector<std::string> &detunings, unsigned points, double max_ratio)
{
    std::string params = std::to_string(points) + "," + format_number(max_ratio);
    for (auto &d: detunings)
        params += ";" + d;
    auto ctx = open(c, "detuning-scan", params);
    std::vector<double> list;
    for (auto &d: detunings)
        list.push_back(parse_quantity(d, Quantity::AngularFrequency));
    if (list.empty()) {
        list = {ctx.config.lattice.Delta_LA, 1.5 * ctx.config.lattice.Delta_LA};
    }
    auto scans = run_detuning_scan(ctx.config, list, points, max_ratio);
    std::vector<double> D, P, O, G;
    std::vector<SummaryRow> rows;
    for (size_t i = 0; i < scans.size(); i++) {
        auto &s = scans[i];
        for (size_t k = 0; k < s.P0.size(); k++) {
            D.push_back(s.Delta_LA);
            P.push_back(s.P0[k]);
            O.push_back(s.Omega_a0[k]);
            G.push_back(s.Gamma_sym[k]);
        }
        auto tag = std::to_string(i);
        rows.push_back({"Delta_LA_" + tag, s.Delta_LA, "rad/s"});
        rows.push_back({"plateau_" + tag, s.plateau, "1/s"});
        rows.push_back({"onset_Omega_a0_" + tag, s.onset_Omega, "rad/s"});
    }
    auto p = ctx.output("detuning_scan_power.csv");
    write_csv(p, {{"Delta_LA", "rad/s"}, {"P0", "W"}, {"Gamma_sym_int", "1/s"}}, {D, P, G});
    ctx.written(p);
    p = ctx.output("detuning_scan_omega.csv");
    write_csv(p, {{"Delta_LA", "rad/s"}, {"Omega_a0", "rad/s"}, {"Gamma_sym_int", "1/s"}}, {D, O, G});
    ctx.written(p);
    emit_summary(ctx, "detuning_scan_summary.csv", rows);
    ctx.finish();
    return kOk;
}

int cmd_cool(const Common &c, unsigned decimation, double fit_span)
{
    auto ctx = open(c, "cool", c.seeds + "," + std::to_string(decimation) + "," + format_number(fit_span));
    CoolOptions o;
    o.seeds = parse_seed_range(c.seeds).list();
    o.threads = c.threads;
    o.series_decimation = decimation;
    o.decay_fit_span = fit_span;
    auto r = run_cool(ctx.config, o, &ctx.warnings);

    auto p = ctx.output("cool_aggregate.csv");
    write_csv(p, {{"t", "s"}, {"T_atoms_mean", "K"}, {"T_atoms_sem", "K"}, {"T_noatoms_mean", "K"},
                  {"T_noatoms_sem", "K"}},
              {r.t, r.with_atoms.mean, r.with_atoms.sem, r.without_atoms.mean, r.without_atoms.sem});
    ctx.written(p);
    for (auto &s: r.with_atoms.series) {
        p = ctx.output("cool_seed_" + std::to_string(s.seed) + ".csv");
        write_csv(p, {{"t", "s"}, {"x_m", "m"}, {"x_a", "m"}}, {s.t, s.x_m, s.x_a});
        ctx.written(p);
    }
    std::vector<SummaryRow> rows = {
        {"seeds", double(o.seeds.size()), "1"},
        {"center", r.center, "rad/s"},
        {"bandwidth", r.bandwidth, "rad/s"},
        {"resonant_phase_start", r.phase_start[r.resonant_phase], "s"},
        {"T_min", r.minimum.value, "K"},
        {"t_min", r.minimum.t, "s"},
        {"decay_rate", r.decay.value("rate"), "1/s"},
        {"decay_rate_sigma", r.decay.uncertainty("rate"), "1/s"},
        {"T_equilibrium_without_atoms", r.T_equilibrium_without, "K"},
        {"expected_T_sym", r.T_sym_expected, "K"},
        {"expected_T_opt", r.T_opt_expected, "K"},
        {"expected_Gamma_tot", r.Gamma_m + r.Gamma_opt + r.Gamma_sym, "1/s"},
        {"expected_Gamma_opt", r.Gamma_opt, "1/s"},
        {"expected_Gamma_sym", r.Gamma_sym, "1/s"},
        {"T_bath", r.T_bath, "K"},
    };
    for (size_t i = 0; i < r.T_plateau_expected.size(); i++)
        rows.push_back({"expected_T_phase_" + ctx.config.protocol.phases[i].name, r.T_plateau_expected[i], "K"});
    emit_summary(ctx, "cool_summary.csv", rows);
    ctx.finish();
    return strict_fit(c, r.decay, "decay fit");
}

int cmd_calibrate(const Common &c, bool forward, std::optional<double> alpha, std::optional<double> beta,
                  std::optional<double> T0, double pmin, double pmax, unsigned points, double noise)
{
    if (!forward)
        throw ValidationError("calibrate only supports --forward; use fit-calibration to fit data");
    std::string params = format_number(pmin) + "," + format_number(pmax) + "," + std::to_string(points) + "," +
        format_number(noise) + "," + c.seeds;
    params += "," + (alpha ? format_number(*alpha) : "-") + "," + (beta ? format_number(*beta) : "-") + "," +
        (T0 ? format_number(*T0) : "-");
    auto ctx = open(c, "calibrate", params);
    auto d = calibration_defaults(ctx.config);
    if (alpha)
        d.alpha = *alpha;
    if (beta)
        d.beta = *beta;
    if (T0)
        d.T0 = *T0;
    auto seed = parse_seed_range(c.seeds).first;
    auto data = forward_calibration(d, ctx.config.membrane.Gamma_m, pmin, pmax, points, noise, seed);
    auto p = ctx.output("calibration.csv");
    write_csv(p, {{"P_tot", "W"}, {"T_opt", "K"}}, {data.P_tot, data.T_opt});
    ctx.written(p);
    emit_summary(ctx, "calibration_parameters.csv", {
        {"alpha", d.alpha, "1/(s W)"}, {"beta", d.beta, "K/W^2"}, {"T0", d.T0, "K"},
        {"Gamma_m", ctx.config.membrane.Gamma_m, "1/s"},
    });
    ctx.finish();
    return kOk;
}

int cmd_psd(const Common &c, const std::string &input, const std::string &column, size_t segment,
            const std::string &window, std::optional<double> lo, std::optional<double> hi)
{
    std::string params = input + "," + column + "," + std::to_string(segment) + "," + window;
    auto ctx = open(c, "psd", params);
    ctx.manifest.add_input("data", read_file(input));
    auto table = read_csv(input);
    auto &t = table.column("t");
    auto &x = table.column(column);
    if (t.size() < 2)
        throw ValidationError("psd: need at least two samples");
    double dt = t[1] - t[0];
    analysis::Window w;
    if (window == "hann")
        w = analysis::Window::Hann;
    else if (window == "rectangular")
        w = analysis::Window::Rectangular;
    else
        throw ValidationError("psd: unknown window '" + window + "'");
    if (segment == 0)
        segment = x.size();
    auto est = analysis::estimate_psd(x, dt, segment, w);
    auto p = ctx.output("psd.csv");
    write_csv(p, {{"omega", "rad/s"}, {"S_x", "m^2/Hz"}}, {est.omega, est.S_x});
    ctx.written(p);
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
    double var = 0;
    for (double v: x)
        var += (v - mean) * (v - mean);
    var /= double(x.size());
    std::vector<SummaryRow> rows = {
        {"segments", double(est.segments), "1"},
        {"df", est.df, "Hz"},
        {"integrated", est.integrated(), "m^2"},
        {"variance", var, "m^2"},
    };
    int status = kOk;
    if (lo && hi) {
        auto f = analysis::fit_lorentzian(est, *lo, *hi);
        fit_rows(rows, f, {"rad/s", "1/s", "m^2/Hz", "m^2/Hz"});
        status = strict_fit(c, f, "Lorentzian fit");
    }
    emit_summary(ctx, "psd_summary.csv", rows);
    ctx.finish();
    return status;
}

int cmd_fit_calibration(const Common &c, const std::string &input, double T_ref)
{
    auto ctx = open(c, "fit-calibration", input + "," + format_number(T_ref));
    ctx.manifest.add_input("data", read_file(input));
    auto table = read_csv(input);
    auto f = analysis::fit_calibration(table.column("P_tot"), table.column("T_opt"), ctx.config.membrane.Gamma_m);
    std::vector<SummaryRow> rows;
    fit_rows(rows, f, {"1/(s W)", "K/W^2", "K"});
    rows.push_back({"rescale_to_T_ref", analysis::calibration_rescale(f, T_ref), "1"});
    emit_summary(ctx, "fit_calibration.csv", rows);
    ctx.finish();
    return strict_fit(c, f, "calibration fit");
}

int cmd_fit_step(const Common &c, const std::string &input, double guess)
{
    auto ctx = open(c, "fit-step", input + "," + format_number(guess));
    ctx.manifest.add_input("data", read_file(input));
    auto table = read_csv(input);
    auto fixed = step_fixed_parameters(ctx.config);
    auto f = analysis::fit_step_model(table.column("Omega_a0"), table.column("Gamma_sym"), fixed, guess);
    std::vector<SummaryRow> rows;
    fit_rows(rows, f, {"1/m^3"});
    rows.push_back({"n_a_imaging", ctx.config.atoms.n_a, "1/m^3"});
    rows.push_back({"ratio_to_imaging", f.values[0] / ctx.config.atoms.n_a, "1"});
    emit_summary(ctx, "fit_step.csv", rows);
    ctx.finish();
    return strict_fit(c, f, "step-model fit");
}

int cmd_groundstate(const Common &c)
{
    auto ctx = open(c, "groundstate");
    auto r = run_groundstate(ctx.config, &ctx.warnings);
    emit_summary(ctx, "groundstate.csv", {
        {"Omega_a0", r.Omega_a0, "rad/s"},
        {"N_r", r.N_r, "1"},
        {"g_Nr", r.g_Nr, "1/s"},
        {"C", r.C, "1"},
        {"T_bath", r.T_bath, "K"},
        {"n_bath", r.n_bath, "1"},
        {"C_exceeds_n_bath", r.satisfied ? 1.0 : 0.0, "1"},
        {"n_ss_literature", r.n_ss_literature, "1"},
    });
    std::cout << "n_ss_literature is the published quantum steady-state phonon number; it is not computed here.\n";
    ctx.finish();
    return kOk;
}

}

int main(int argc, char **argv)
{
    CLI::App app{"Sympathetic cooling of a membrane by laser-cooled atoms"};
    app.require_subcommand(1);
    Common common;
    std::function<int()> action;

    SpectrumOptions spec;
    auto *s = app.add_subcommand("spectrum", "transfer-matrix transmission spectra and finesse map");
    add_common(s, common);
    s->add_option("--positions", spec.positions, "membrane positions over half a wavelength");
    s->add_option("--points", spec.frequency_points, "frequency points per spectrum");
    s->callback([&] { action = [&] { return cmd_spectrum(common, spec); }; });

    unsigned radial = 101;
    s = app.add_subcommand("lattice", "lattice depth, trap frequency and scattering rate");
    add_common(s, common);
    s->add_option("--radial-points", radial, "points of the radial trap-frequency profile");
    s->callback([&] { action = [&] { return cmd_lattice(common, radial); }; });

    unsigned decimation = 1024;
    double fit_span = 0.06;
    s = app.add_subcommand("cool", "simulate the cooling sequence with and without atoms");
    add_common(s, common, true);
    s->add_option("--decimate", decimation, "keep every n-th recorded sample in per-seed CSVs (0: none)");
    s->add_option("--fit-span", fit_span, "span of the decay fit after the resonant phase starts, s");
    s->callback([&] { action = [&] { return cmd_cool(common, decimation, fit_span); }; });

    unsigned scan_points = 201;
    double max_ratio = 2.0;
    s = app.add_subcommand("step-scan", "ensemble cooling rate versus lattice power");
    add_common(s, common);
    s->add_option("--points", scan_points, "grid points");
    s->add_option("--max-ratio", max_ratio, "largest Omega_a0/Omega_m on the grid");
    s->callback([&] { action = [&] { return cmd_step_scan(common, scan_points, max_ratio); }; });

    std::vector<std::string> detunings;
    s = app.add_subcommand("detuning-scan", "step scans for several atom-light detunings");
    add_common(s, common);
    s->add_option("--detuning", detunings, "atom-light detuning with unit, e.g. \"-8 GHz\" (repeatable)");
    s->add_option("--points", scan_points, "grid points per detuning");
    s->add_option("--max-ratio", max_ratio, "largest Omega_a0/Omega_m on the grid");
    s->callback([&] { action = [&] { return cmd_detuning_scan(common, detunings, scan_points, max_ratio); }; });

    bool forward = false;
    std::optional<double> alpha, beta, T0;
    double pmin = 1e-5, pmax = 2e-2, noise = 0;
    unsigned cal_points = 20;
    s = app.add_subcommand("calibrate", "forward temperature-calibration model");
    add_common(s, common);
    s->add_option("--seeds", common.seeds, "the first seed drives the optional noise");
    s->add_flag("--forward", forward, "emit T_opt(P_tot) from the calibration model");
    s->add_option("--alpha", alpha, "1/(s W); default from the optomechanics at lattice.P0");
    s->add_option("--beta", beta, "K/W^2; default from the laser-noise temperature");
    s->add_option("--T0", T0, "K; default membrane.T0");
    s->add_option("--pmin", pmin, "smallest P_tot, W; alpha and T0 separate only where alpha P_tot approaches Gamma_m");
    s->add_option("--pmax", pmax, "largest P_tot, W");
    s->add_option("--points", cal_points, "number of powers");
    s->add_option("--noise", noise, "relative Gaussian noise on T_opt");
    s->callback([&] { action = [&] { return cmd_calibrate(common, forward, alpha, beta, T0, pmin, pmax, cal_points, noise); }; });

    std::string input, column = "x_m", window = "hann";
    size_t segment = 0;
    std::optional<double> fit_lo, fit_hi;
    s = app.add_subcommand("psd", "power spectral density of a recorded series");
    add_common(s, common);
    s->add_option("--input", input, "CSV with a t[s] column")->required();
    s->add_option("--column", column, "column to analyse");
    s->add_option("--segment", segment, "samples per segment (0: whole series)");
    s->add_option("--window", window, "hann or rectangular");
    s->add_option("--fit-lo", fit_lo, "lower edge of a Lorentzian fit, rad/s");
    s->add_option("--fit-hi", fit_hi, "upper edge of a Lorentzian fit, rad/s");
    s->callback([&] { action = [&] { return cmd_psd(common, input, column, segment, window, fit_lo, fit_hi); }; });

    double T_ref = 295;
    s = app.add_subcommand("fit-calibration", "fit T_opt(P_tot) for alpha, beta, T0");
    add_common(s, common);
    s->add_option("--input", input, "CSV with P_tot[W], T_opt[K]")->required();
    s->add_option("--T-ref", T_ref, "temperature the fitted T0 is rescaled to, K");
    s->callback([&] { action = [&] { return cmd_fit_calibration(common, input, T_ref); }; });

    double guess = 0;
    s = app.add_subcommand("fit-step", "fit the ensemble step model for the atom density");
    add_common(s, common);
    s->add_option("--input", input, "CSV with Omega_a0[rad/s], Gamma_sym[1/s]")->required();
    s->add_option("--guess", guess, "initial n_a, 1/m^3 (0: linear estimate)");
    s->callback([&] { action = [&] { return cmd_fit_step(common, input, guess); }; });

    s = app.add_subcommand("groundstate", "cooperativity versus bath occupation");
    add_common(s, common);
    s->callback([&] { action = [&] { return cmd_groundstate(common); }; });

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }
    try {
        return action();
    }
    catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
    catch (const NumericError &e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    }
    catch (const FitError &e) {
        std::cerr << "fit failure: " << e.what() << '\n';
        return kFit;
    }
    catch (const fs::filesystem_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
}
