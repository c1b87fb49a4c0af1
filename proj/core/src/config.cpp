#include "symcool/config.hpp"
#include "symcool/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace symcool {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

struct Suffix {
    std::string_view name;
    Quantity kind;
    double factor;
};

constexpr Suffix suffixes[] = {
    {"GHz", Quantity::AngularFrequency, kTwoPi * 1e9},
    {"MHz", Quantity::AngularFrequency, kTwoPi * 1e6},
    {"kHz", Quantity::AngularFrequency, kTwoPi * 1e3},
    {"Hz", Quantity::AngularFrequency, kTwoPi},
    {"mW", Quantity::Power, 1e-3},
    {"nm", Quantity::Length, 1e-9},
    {"um", Quantity::Length, 1e-6},
    {"mm", Quantity::Length, 1e-3},
    {"uK", Quantity::Temperature, 1e-6},
    {"K", Quantity::Temperature, 1.0},
    {"ng", Quantity::Mass, 1e-12},
};

bool parse_bool(const std::string &key, std::string_view v)
{
    if (v == "yes" || v == "true" || v == "on" || v == "1")
        return true;
    if (v == "no" || v == "false" || v == "off" || v == "0")
        return false;
    throw ValidationError(key + ": expected yes/no, got '" + std::string(v) + "'");
}

std::vector<std::string> split_list(std::string_view v)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch: v) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty())
                out.push_back(std::move(cur));
            cur.clear();
        }
        else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty())
        out.push_back(std::move(cur));
    return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

struct KeySpec {
    std::string_view key;
    Setter set;
};

template<double MembraneMode::*F>
Setter membrane(Quantity q)
{
    return [q] (ExperimentConfig &c, std::string_view v) { c.membrane.*F = parse_quantity(v, q); };
}
template<double CavityGeometry::*F>
Setter cavity(Quantity q)
{
    return [q] (ExperimentConfig &c, std::string_view v) { c.cavity.*F = parse_quantity(v, q); };
}
template<double AtomEnsemble::*F>
Setter atoms(Quantity q)
{
    return [q] (ExperimentConfig &c, std::string_view v) { c.atoms.*F = parse_quantity(v, q); };
}
template<double LatticeParams::*F>
Setter lattice(Quantity q)
{
    return [q] (ExperimentConfig &c, std::string_view v) { c.lattice.*F = parse_quantity(v, q); };
}
template<double LaserNoiseParams::*F>
Setter noise(Quantity q)
{
    return [q] (ExperimentConfig &c, std::string_view v) { c.noise.*F = parse_quantity(v, q); };
}
template<double ProtocolSchedule::*F>
Setter protocol(Quantity q)
{
    return [q] (ExperimentConfig &c, std::string_view v) { c.protocol.*F = parse_quantity(v, q); };
}

const std::vector<KeySpec> &key_table()
{
    using Q = Quantity;
    static const std::vector<KeySpec> table = {
        {"membrane.Omega_m", membrane<&MembraneMode::Omega_m>(Q::AngularFrequency)},
        {"membrane.Gamma_m", membrane<&MembraneMode::Gamma_m>(Q::Rate)},
        {"membrane.M_eff", membrane<&MembraneMode::M_eff>(Q::Mass)},
        {"membrane.Q_m", membrane<&MembraneMode::Q_m>(Q::Plain)},
        {"membrane.T0", membrane<&MembraneMode::T0>(Q::Temperature)},
        {"membrane.rho", membrane<&MembraneMode::rho>(Q::Plain)},
        {"membrane.thickness", membrane<&MembraneMode::thickness>(Q::Length)},
        {"membrane.side", membrane<&MembraneMode::side>(Q::Length)},
        {"membrane.n_refr", membrane<&MembraneMode::n_refr>(Q::Plain)},
        {"membrane.r_m", membrane<&MembraneMode::r_m>(Q::Plain)},
        {"membrane.absorption_frac", membrane<&MembraneMode::absorption_frac>(Q::Plain)},

        {"cavity.length", cavity<&CavityGeometry::length>(Q::Length)},
        {"cavity.R1", cavity<&CavityGeometry::R1>(Q::Plain)},
        {"cavity.R2", cavity<&CavityGeometry::R2>(Q::Plain)},
        {"cavity.wavelength", cavity<&CavityGeometry::wavelength>(Q::Length)},
        {"cavity.membrane_pos", cavity<&CavityGeometry::membrane_pos>(Q::Length)},
        {"cavity.omega_0", cavity<&CavityGeometry::omega_0>(Q::AngularFrequency)},
        {"cavity.front_fraction", cavity<&CavityGeometry::front_fraction>(Q::Plain)},
        {"cavity.finesse", cavity<&CavityGeometry::finesse>(Q::Plain)},
        {"cavity.detuning_over_kappa", cavity<&CavityGeometry::detuning_over_kappa>(Q::Plain)},
        {"cavity.g_fraction", cavity<&CavityGeometry::g_fraction>(Q::Plain)},

        {"atoms.N_atoms", atoms<&AtomEnsemble::N_atoms>(Q::Plain)},
        {"atoms.n_a", atoms<&AtomEnsemble::n_a>(Q::Plain)},
        {"atoms.n_a_fit", atoms<&AtomEnsemble::n_a_fit>(Q::Plain)},
        {"atoms.density", [] (ExperimentConfig &c, std::string_view v) {
            if (v == "fit")
                c.atoms.use_fit_density = true;
            else if (v == "imaging")
                c.atoms.use_fit_density = false;
            else
                throw ValidationError("atoms.density: expected 'fit' or 'imaging'");
        }},
        {"atoms.N_resonant", [] (ExperimentConfig &c, std::string_view v) {
            c.atoms.N_resonant = parse_quantity(v, Q::Plain);
        }},
        {"atoms.R_a", atoms<&AtomEnsemble::R_a>(Q::Length)},
        {"atoms.Gamma_a", atoms<&AtomEnsemble::Gamma_a>(Q::Rate)},
        {"atoms.T_atoms", atoms<&AtomEnsemble::T_atoms>(Q::Temperature)},
        {"atoms.tau_molasses", atoms<&AtomEnsemble::tau_molasses>(Q::Plain)},

        {"budget.eta2", [] (ExperimentConfig &c, std::string_view v) {
            c.budget.eta2 = parse_quantity(v, Q::Plain);
        }},
        {"budget.t2", [] (ExperimentConfig &c, std::string_view v) {
            c.budget.t2 = parse_quantity(v, Q::Plain);
        }},

        {"lattice.P0", lattice<&LatticeParams::P0>(Q::Power)},
        {"lattice.w0", lattice<&LatticeParams::w0>(Q::Length)},
        {"lattice.Delta_LA", lattice<&LatticeParams::Delta_LA>(Q::AngularFrequency)},
        {"lattice.phi", lattice<&LatticeParams::phi>(Q::Plain)},
        {"lattice.trap_calibration", [] (ExperimentConfig &c, std::string_view v) {
            if (v == "measured")
                c.lattice.calibration = TrapCalibration::Measured;
            else if (v == "calculated")
                c.lattice.calibration = TrapCalibration::Calculated;
            else
                throw ValidationError("lattice.trap_calibration: expected 'measured' or 'calculated'");
        }},
        {"lattice.Omega_a0_measured", lattice<&LatticeParams::Omega_a0_measured>(Q::AngularFrequency)},
        {"lattice.P_ref", lattice<&LatticeParams::P_ref>(Q::Power)},
        {"lattice.Delta_ref", lattice<&LatticeParams::Delta_ref>(Q::AngularFrequency)},

        {"noise.S_I", noise<&LaserNoiseParams::S_I>(Q::Plain)},
        {"noise.S_phidot", noise<&LaserNoiseParams::S_phidot>(Q::Plain)},
        {"noise.P_det", noise<&LaserNoiseParams::P_det>(Q::Power)},
        {"noise.dT_abs_per_W", noise<&LaserNoiseParams::dT_abs_per_W>(Q::Plain)},

        {"protocol.bath_temperature", [] (ExperimentConfig &c, std::string_view v) {
            c.protocol.bath_temperature = parse_quantity(v, Q::Temperature);
        }},
        {"protocol.bandwidth", protocol<&ProtocolSchedule::bandwidth>(Q::AngularFrequency)},
        {"protocol.dt", protocol<&ProtocolSchedule::dt>(Q::Plain)},
        {"protocol.record_stride", [] (ExperimentConfig &c, std::string_view v) {
            double s = parse_quantity(v, Q::Plain);
            if (s < 1 || s != std::floor(s))
                throw ValidationError("protocol.record_stride: expected a positive integer");
            c.protocol.record_stride = static_cast<unsigned>(s);
        }},
        {"protocol.T_initial", protocol<&ProtocolSchedule::T_initial>(Q::Temperature)},
        {"protocol.average_window", protocol<&ProtocolSchedule::average_window>(Q::Plain)},
    };
    return table;
}

}

double parse_quantity(std::string_view text, Quantity kind)
{
    text = trim(text);
    double value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc())
        throw ValidationError("not a number: '" + std::string(text) + "'");
    auto rest = trim(std::string_view(res.ptr, text.data() + text.size() - res.ptr));
    if (rest.empty())
        return value;
    for (auto &s: suffixes) {
        if (s.name != rest)
            continue;
        if (s.kind != kind)
            throw ValidationError("unit '" + std::string(rest) + "' does not fit this quantity in '" +
                                  std::string(text) + "'");
        return value * s.factor;
    }
    throw ValidationError("unknown unit suffix '" + std::string(rest) + "'");
}

ConfigText parse_config_text(std::string_view text)
{
    ConfigText out;
    std::string section;
    int lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        lineno++;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("line " + std::to_string(lineno) + ": unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("line " + std::to_string(lineno) + ": expected key = value");
        auto key = std::string(trim(line.substr(0, eq)));
        auto value = std::string(trim(line.substr(eq + 1)));
        if (section.empty())
            throw ValidationError("line " + std::to_string(lineno) + ": key outside of a section");
        auto full = section + "." + key;
        if (!out.values.count(full))
            out.order.push_back(full);
        out.values[full] = value;
    }
    return out;
}

Override parse_override(std::string_view text)
{
    auto eq = text.find('=');
    if (eq == std::string_view::npos)
        throw ValidationError("override '" + std::string(text) + "' is not of the form key=value");
    return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

ExperimentConfig build_config(const ConfigText &text, std::string_view figure,
                              const std::vector<Override> &overrides)
{
    std::map<std::string, std::string> merged;
    for (auto &[k, v]: text.values) {
        if (k.rfind("figure.", 0) != 0) {
            merged[k] = v;
        }
    }
    if (!figure.empty()) {
        auto prefix = "figure." + std::string(figure) + ".";
        bool found = false;
        for (auto &[k, v]: text.values) {
            if (k.rfind(prefix, 0) == 0) {
                merged[k.substr(prefix.size())] = v;
                found = true;
            }
        }
        if (!found) {
            throw ValidationError("no [figure." + std::string(figure) + "] section in config");
        }
    }
    for (auto &o: overrides)
        merged[o.key] = o.value;

    ExperimentConfig c;
    c.cavity.membrane_pos = NAN;
    c.membrane.Gamma_m = NAN;
    c.membrane.Q_m = NAN;
    c.lattice.k_L = NAN;

    std::map<std::string, std::map<std::string, std::string>> phase_keys;
    std::vector<std::string> phase_names;
    for (auto &[k, v]: merged) {
        if (k.rfind("phase.", 0) == 0) {
            auto rest = k.substr(6);
            auto dot = rest.find('.');
            if (dot == std::string::npos)
                throw ValidationError("malformed phase key '" + k + "'");
            phase_keys[rest.substr(0, dot)][rest.substr(dot + 1)] = v;
            continue;
        }
        if (k == "protocol.phases") {
            phase_names = split_list(v);
            continue;
        }
        auto &table = key_table();
        auto it = std::find_if(table.begin(), table.end(), [&] (auto &s) { return s.key == k; });
        if (it == table.end())
            throw ValidationError("unknown config key '" + k + "'");
        try {
            it->set(c, v);
        }
        catch (const ValidationError &e) {
            throw ValidationError(k + ": " + e.what());
        }
    }

    // Derived defaults.
    auto &m = c.membrane;
    if (std::isnan(m.Gamma_m) && !std::isnan(m.Q_m) && m.Q_m > 0)
        m.Gamma_m = m.Omega_m / m.Q_m;
    if (std::isnan(m.Q_m) && !std::isnan(m.Gamma_m) && m.Gamma_m > 0)
        m.Q_m = m.Omega_m / m.Gamma_m;
    if (std::isnan(c.cavity.membrane_pos))
        c.cavity.membrane_pos = c.cavity.wavelength / 8;
    if (std::isnan(c.lattice.k_L) && c.cavity.wavelength > 0)
        c.lattice.k_L = kTwoPi / c.cavity.wavelength;

    for (auto &name: phase_names) {
        auto pk = phase_keys.find(name);
        if (pk == phase_keys.end())
            throw ValidationError("protocol lists phase '" + name + "' without a [phase." + name + "] section");
        Phase p;
        p.name = name;
        p.P0 = c.lattice.P0;
        p.Gamma_a = c.atoms.Gamma_a;
        for (auto &[k, v]: pk->second) {
            auto full = "phase." + name + "." + k;
            if (k == "duration")
                p.duration = parse_quantity(v, Quantity::Plain);
            else if (k == "P0")
                p.P0 = parse_quantity(v, Quantity::Power);
            else if (k == "Gamma_a")
                p.Gamma_a = parse_quantity(v, Quantity::Rate);
            else if (k == "atoms")
                p.atoms_present = parse_bool(full, v);
            else if (k == "atom_lifetime")
                p.atom_lifetime = parse_quantity(v, Quantity::Plain);
            else
                throw ValidationError("unknown config key '" + full + "'");
        }
        c.protocol.phases.push_back(std::move(p));
    }
    return c;
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig load_config(const std::string &path, std::string_view figure,
                             const std::vector<Override> &overrides)
{
    return build_config(parse_config_text(read_file(path)), figure, overrides);
}

}
