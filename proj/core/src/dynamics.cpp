#include "symcool/dynamics.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace symcool::dynamics {

using cplx = std::complex<double>;

double CoupledOscillatorSystem::thermal_force_psd(const PhysicalConstants &k) const
{
    return 4 * membrane.M * membrane.Gamma_m * k.k_B * membrane.T_bath;
}

double CoupledOscillatorSystem::coupling_rate() const
{
    if (!coupled())
        return 0;
    return std::abs(K) / std::sqrt(4 * membrane.M * membrane.Omega * atoms.mass * atoms.Omega);
}

double CoupledOscillatorSystem::sympathetic_damping() const
{
    if (!coupled() || atoms.Gamma <= 0)
        return 0;
    double g = coupling_rate();
    double det = atoms.Omega - membrane.Omega;
    return g * g * asymmetry * atoms.Gamma / (det * det + atoms.Gamma * atoms.Gamma / 4);
}

double CoupledOscillatorSystem::frequency_pull() const
{
    if (!coupled() || atoms.Gamma <= 0)
        return 0;
    return (atoms.Omega - membrane.Omega) * sympathetic_damping() / atoms.Gamma;
}

Susceptibilities analytic_susceptibilities(const CoupledOscillatorSystem &sys, double Omega, Warnings *warnings)
{
    auto &m = sys.membrane;
    auto &a = sys.atoms;
    if (m.Omega < 10 * m.Gamma_total() || (sys.coupled() && a.Omega < 10 * a.Gamma))
        warn(warnings, "Lorentzian susceptibilities assume Omega >> Gamma for both oscillators");
    Susceptibilities s;
    s.chi_m = 1.0 / (2 * m.M * m.Omega * cplx(m.Omega - Omega, -m.Gamma_total() / 2));
    if (!sys.coupled()) {
        s.chi_a = 0;
        s.chi_eff = s.chi_m;
        return s;
    }
    s.chi_a = 1.0 / (2 * a.mass * a.Omega * cplx(a.Omega - Omega, -a.Gamma / 2));
    s.chi_eff = 1.0 / (1.0 / s.chi_m - sys.asymmetry * sys.K * sys.K * s.chi_a);
    return s;
}

cplx reduced_susceptibility(const CoupledOscillatorSystem &sys, double Omega)
{
    auto &m = sys.membrane;
    double width = m.Gamma_total() + sys.sympathetic_damping();
    return 1.0 / (2 * m.M * m.Omega * cplx(m.Omega - sys.frequency_pull() - Omega, -width / 2));
}

Spectrum analytic_spectrum(const CoupledOscillatorSystem &sys, std::span<const double> grid,
                           const PhysicalConstants &k)
{
    double width = sys.membrane.Gamma_total() + sys.sympathetic_damping();
    double span = grid.empty() ? 0 : grid.back() - grid.front();
    if (span < 20 * width) {
        throw ValidationError("analytic_spectrum: grid covers " + std::to_string(span / width) +
                              " linewidths, need at least 20");
    }
    Spectrum out;
    double S_F = sys.thermal_force_psd(k);
    out.omega.assign(grid.begin(), grid.end());
    out.S_x.resize(grid.size());
    for (size_t i = 0; i < grid.size(); i++)
        out.S_x[i] = std::norm(analytic_susceptibilities(sys, grid[i]).chi_eff) * S_F;
    return out;
}

std::array<cplx, 2> normal_mode_roots(const CoupledOscillatorSystem &sys)
{
    cplx A(sys.membrane.Omega, -sys.membrane.Gamma_total() / 2);
    cplx B(sys.atoms.Omega, -sys.atoms.Gamma / 2);
    double g = sys.coupling_rate();
    cplx root = std::sqrt((A - B) * (A - B) / 4.0 + sys.asymmetry * g * g);
    return {(A + B) / 2.0 - root, (A + B) / 2.0 + root};
}

namespace {

double max_frequency(std::span<const Segment> segments)
{
    double w = 0;
    for (auto &s: segments) {
        w = std::max(w, s.system.membrane.Omega);
        if (s.system.coupled())
            w = std::max(w, s.system.atoms.Omega);
    }
    return w;
}

struct Rotation {
    double c, s, w;
    Rotation(double omega, double h)
        : c(std::cos(omega * h)), s(std::sin(omega * h)), w(omega)
    {}
    void apply(double &x, double &v) const
    {
        double x1 = c * x + s * v / w;
        v = -w * s * x + c * v;
        x = x1;
    }
};

struct Recorder {
    TimeSeries &ts;
    bool velocity;
    void operator()(const State &st)
    {
        ts.x_m.push_back(st.x_m);
        ts.x_a.push_back(st.x_a);
        if (velocity)
            ts.v_m.push_back(st.v_m);
    }
};

double energy(const CoupledOscillatorSystem &sys, const State &st)
{
    auto &m = sys.membrane;
    double e = 0.5 * m.M * (st.v_m * st.v_m + m.Omega * m.Omega * st.x_m * st.x_m);
    if (sys.atoms.mass > 0) {
        auto &a = sys.atoms;
        e += 0.5 * a.mass * (st.v_a * st.v_a + a.Omega * a.Omega * st.x_a * st.x_a);
    }
    return e;
}

template<bool Coupled, typename Rng>
void run_segment(const Segment &seg, double dt, long steps, State &st, double &atom_scale, Rng &rng,
                 unsigned stride, unsigned long &counter, Recorder &rec, const PhysicalConstants &k,
                 double energy_limit)
{
    auto &sys = seg.system;
    auto &m = sys.membrane;
    double h = dt / 2;
    Rotation rot_m(m.Omega, h);
    Rotation rot_a(Coupled ? sys.atoms.Omega : 1.0, h);
    double G = m.Gamma_total();
    double damp_m = std::exp(-G * dt);
    double S_F = sys.thermal_force_psd(k);
    double var = G > 0 ? S_F / (2 * m.M * m.M) * (-std::expm1(-2 * G * dt)) / (2 * G)
                       : S_F / (2 * m.M * m.M) * dt;
    double sigma = std::sqrt(var);
    double damp_a = Coupled ? std::exp(-sys.atoms.Gamma * dt) : 1.0;
    double acc_m0 = Coupled ? -sys.asymmetry * sys.K / m.M : 0.0;
    double acc_a = Coupled ? -sys.K / sys.atoms.mass : 0.0;
    double decay = seg.atom_lifetime > 0 ? std::exp(-dt / seg.atom_lifetime) : 1.0;
    boost::random::normal_distribution<double> normal;

    for (long i = 0; i < steps; i++) {
        if constexpr (Coupled) {
            double acc_m = acc_m0 * atom_scale;
            st.v_m += h * acc_m * st.x_a;
            st.v_a += h * acc_a * st.x_m;
            rot_m.apply(st.x_m, st.v_m);
            rot_a.apply(st.x_a, st.v_a);
            st.v_m = damp_m * st.v_m + sigma * normal(rng);
            st.v_a *= damp_a;
            rot_m.apply(st.x_m, st.v_m);
            rot_a.apply(st.x_a, st.v_a);
            atom_scale *= decay;
            acc_m = acc_m0 * atom_scale;
            st.v_m += h * acc_m * st.x_a;
            st.v_a += h * acc_a * st.x_m;
        }
        else {
            rot_m.apply(st.x_m, st.v_m);
            st.v_m = damp_m * st.v_m + sigma * normal(rng);
            rot_m.apply(st.x_m, st.v_m);
            atom_scale *= decay;
        }
        if (++counter % stride == 0)
            rec(st);
        if ((i & 0xffff) == 0xffff) {
            double e = energy(sys, st);
            if (!std::isfinite(e) || e > energy_limit) {
                throw NumericError("integrator unstable in segment '" + seg.name + "': energy " +
                                   std::to_string(e) + " J exceeds " + std::to_string(energy_limit) + " J");
            }
        }
    }
}

}

double default_time_step(std::span<const Segment> segments)
{
    return kTwoPi / (40 * max_frequency(segments));
}

double max_time_step(std::span<const Segment> segments)
{
    return kTwoPi / (20 * max_frequency(segments));
}

TimeSeries simulate(std::span<const Segment> segments, const SimulationOptions &opt)
{
    if (segments.empty())
        throw ValidationError("simulate: empty protocol");
    for (auto &s: segments) {
        if (!(s.duration > 0))
            throw ValidationError("simulate: segment '" + s.name + "' has non-positive duration");
        if (!(s.system.membrane.M > 0 && s.system.membrane.Omega > 0))
            throw ValidationError("simulate: membrane mass and frequency must be positive");
        if (s.system.coupled() && !(s.system.atoms.Omega > 0))
            throw ValidationError("simulate: coupled atoms need a positive trap frequency");
    }
    double dt = opt.dt > 0 ? opt.dt : default_time_step(segments);
    if (dt > max_time_step(segments) * (1 + 1e-12))
        throw ValidationError("simulate: dt exceeds 2 pi/(20 Omega_max)");
    unsigned stride = std::max(1u, opt.record_stride);
    auto &k = opt.constants;

    std::mt19937_64 rng(opt.seed);
    State st;
    auto &first = segments.front().system.membrane;
    double T_max = opt.T_initial;
    for (auto &s: segments)
        T_max = std::max(T_max, s.system.membrane.T_bath);
    if (opt.initial) {
        st = *opt.initial;
    }
    else {
        double T = opt.T_initial > 0 ? opt.T_initial : first.T_bath;
        boost::random::normal_distribution<double> normal;
        double sv = std::sqrt(k.k_B * T / first.M);
        st.x_m = sv / first.Omega * normal(rng);
        st.v_m = sv * normal(rng);
    }

    TimeSeries ts;
    ts.dt = dt * stride;
    ts.integration_dt = dt;
    ts.seed = opt.seed;
    long total = 0;
    for (auto &s: segments)
        total += std::lround(s.duration / dt);
    ts.x_m.reserve(total / stride + 1);
    ts.x_a.reserve(total / stride + 1);
    Recorder rec{ts, opt.record_velocity};
    rec(st);

    double limit = 1e12 * std::max({k.k_B * std::max(T_max, 1.0), energy(segments.front().system, st)});
    double atom_scale = 1;
    unsigned long counter = 0;
    for (auto &seg: segments) {
        ts.segment_start.push_back(ts.x_m.size() - 1);
        long steps = std::lround(seg.duration / dt);
        if (seg.system.coupled())
            run_segment<true>(seg, dt, steps, st, atom_scale, rng, stride, counter, rec, k, limit);
        else
            run_segment<false>(seg, dt, steps, st, atom_scale, rng, stride, counter, rec, k, limit);
    }
    ts.final_state = st;
    return ts;
}

RingdownResult ringdown(const CoupledOscillatorSystem &sys, double amplitude, double dt, uint64_t seed,
                        double duration, const PhysicalConstants &k)
{
    auto &m = sys.membrane;
    double expected = m.Gamma_total() + sys.sympathetic_damping();
    if (!(expected > 0))
        throw ValidationError("ringdown: system has no damping");
    double thermal = std::sqrt(k.k_B * std::max(m.T_bath, 1e-9) / (m.M * m.Omega * m.Omega));
    if (amplitude < 30 * thermal)
        throw ValidationError("ringdown: excitation must be much larger than the thermal amplitude");
    if (duration <= 0)
        duration = 3 / expected;

    Segment seg{"ringdown", duration, sys, 0};
    SimulationOptions opt;
    opt.dt = dt;
    opt.seed = seed;
    opt.initial = State{amplitude, 0, 0, 0};
    opt.record_velocity = true;
    opt.constants = k;
    std::span<const Segment> segs(&seg, 1);
    double step = opt.dt > 0 ? opt.dt : default_time_step(segs);
    // Record about 16 samples per mechanical period and average energy over
    // blocks of a few periods.
    unsigned stride = std::max(1u, static_cast<unsigned>(kTwoPi / m.Omega / 16 / step));
    opt.record_stride = stride;
    auto ts = simulate(segs, opt);

    double period = kTwoPi / m.Omega;
    size_t block = std::max<size_t>(1, static_cast<size_t>(std::round(4 * period / ts.dt)));
    size_t nblocks = std::max<size_t>(1, std::min<size_t>(ts.x_m.size() / block, 400));
    block = ts.x_m.size() / nblocks;
    RingdownResult r;
    for (size_t b = 0; b < nblocks; b++) {
        double e = 0;
        for (size_t i = b * block; i < (b + 1) * block; i++) {
            double x = ts.x_m[i];
            double v = ts.v_m[i];
            e += 0.5 * m.M * (m.Omega * m.Omega * x * x + v * v);
        }
        r.t.push_back(ts.dt * (static_cast<double>(b * block) + static_cast<double>(block - 1) / 2));
        r.energy.push_back(e / static_cast<double>(block));
    }
    // Straight-line fit of log energy.
    double n = static_cast<double>(r.t.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (size_t i = 0; i < r.t.size(); i++) {
        double y = std::log(r.energy[i]);
        st += r.t[i];
        sy += y;
        stt += r.t[i] * r.t[i];
        sty += r.t[i] * y;
    }
    double slope = (n * sty - st * sy) / (n * stt - st * st);
    double icpt = (sy - slope * st) / n;
    double ss_res = 0, ss_tot = 0;
    for (size_t i = 0; i < r.t.size(); i++) {
        double y = std::log(r.energy[i]);
        double f = icpt + slope * r.t[i];
        ss_res += (y - f) * (y - f);
        ss_tot += (y - sy / n) * (y - sy / n);
    }
    r.rate = -slope;
    r.r_squared = ss_tot > 0 ? 1 - ss_res / ss_tot : 0;
    r.poor_fit = r.r_squared < 0.99;
    return r;
}

}
