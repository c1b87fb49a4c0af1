#include "symcool/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace symcool::fit {

double FitResult::value(std::string_view name) const
{
    for (size_t i = 0; i < names.size(); i++) {
        if (names[i] == name)
            return values[i];
    }
    return NAN;
}

double FitResult::uncertainty(std::string_view name) const
{
    for (size_t i = 0; i < names.size(); i++) {
        if (names[i] == name)
            return sigma[i];
    }
    return NAN;
}

namespace {

double cost_of(const ResidualFn &f, std::span<const double> p, std::vector<double> &r)
{
    f(p, r);
    double c = 0;
    for (double v: r)
        c += v * v;
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd jacobian(const ResidualFn &f, const std::vector<double> &p, const std::vector<double> &r0)
{
    size_t n = r0.size();
    size_t m = p.size();
    Eigen::MatrixXd J(n, m);
    std::vector<double> q = p;
    std::vector<double> r(n);
    for (size_t j = 0; j < m; j++) {
        double h = 1e-7 * std::max(std::abs(p[j]), 1e-8);
        q[j] = p[j] + h;
        f(q, r);
        for (size_t i = 0; i < n; i++)
            J(i, j) = (r[i] - r0[i]) / h;
        q[j] = p[j];
    }
    return J;
}

void fill_covariance(FitResult &res, const ResidualFn &f, size_t n)
{
    size_t m = res.values.size();
    std::vector<double> r(n);
    double cost = cost_of(f, res.values, r);
    res.residual_norm = std::sqrt(cost);
    auto J = jacobian(f, res.values, r);
    Eigen::MatrixXd JtJ = J.transpose() * J;
    double s2 = n > m ? cost / double(n - m) : 0.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
    res.sigma.assign(m, std::numeric_limits<double>::infinity());
    if (!lu.isInvertible()) {
        res.diagnostic += (res.diagnostic.empty() ? "" : "; ") + std::string("singular normal matrix");
        return;
    }
    Eigen::MatrixXd cov = lu.inverse() * s2;
    for (size_t j = 0; j < m; j++)
        res.sigma[j] = std::sqrt(std::max(cov(j, j), 0.0));
}

}

FitResult levenberg_marquardt(const ResidualFn &f, size_t n, std::vector<double> p,
                              std::vector<std::string> names, const Options &opt)
{
    FitResult res;
    res.names = std::move(names);
    size_t m = p.size();
    std::vector<double> r(n), rt(n);
    double cost = cost_of(f, p, r);
    if (!std::isfinite(cost)) {
        res.values = p;
        res.sigma.assign(m, std::numeric_limits<double>::infinity());
        res.diagnostic = "non-finite residuals at the initial guess";
        return res;
    }
    double lambda = -1;
    int it = 0;
    for (; it < opt.max_iterations; it++) {
        if (cost == 0) {
            res.converged = true;
            break;
        }
        auto J = jacobian(f, p, r);
        Eigen::Map<Eigen::VectorXd> rv(r.data(), n);
        Eigen::MatrixXd A = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * rv;
        Eigen::VectorXd D = A.diagonal().cwiseMax(1e-30 * A.diagonal().maxCoeff());
        if (lambda < 0)
            lambda = 1e-3;
        bool improved = false;
        double new_cost = cost;
        std::vector<double> q(m);
        for (int tries = 0; tries < 40; tries++) {
            Eigen::MatrixXd Ad = A;
            Ad.diagonal() += lambda * D;
            Eigen::VectorXd step = Ad.ldlt().solve(-g);
            for (size_t j = 0; j < m; j++)
                q[j] = p[j] + step[j];
            new_cost = cost_of(f, q, rt);
            if (new_cost < cost) {
                improved = true;
                lambda = std::max(lambda / 3, 1e-12);
                break;
            }
            lambda *= 4;
        }
        if (!improved) {
            // No downhill step even with heavy damping: at a minimum to
            // working precision.
            res.converged = true;
            break;
        }
        double rel = (cost - new_cost) / cost;
        p = q;
        std::swap(r, rt);
        cost = new_cost;
        if (rel < opt.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.iterations = it;
    res.values = p;
    if (!res.converged)
        res.diagnostic = "maximum iterations reached";
    fill_covariance(res, f, n);
    return res;
}

FitResult nelder_mead(const ResidualFn &f, size_t n, std::vector<double> p0, std::vector<std::string> names,
                      const Options &opt)
{
    size_t m = p0.size();
    std::vector<double> r(n);
    std::vector<std::vector<double>> simplex(m + 1, p0);
    for (size_t j = 0; j < m; j++)
        simplex[j + 1][j] = p0[j] != 0 ? p0[j] * 1.05 : 1e-3;
    std::vector<double> cost(m + 1);
    for (size_t i = 0; i <= m; i++)
        cost[i] = cost_of(f, simplex[i], r);

    FitResult res;
    res.names = std::move(names);
    int max_it = opt.max_iterations * 50;
    int it = 0;
    std::vector<size_t> order(m + 1);
    for (; it < max_it; it++) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&] (size_t a, size_t b) { return cost[a] < cost[b]; });
        double best = cost[order[0]];
        double worst = cost[order[m]];
        if (worst - best <= opt.tolerance * (std::abs(best) + 1e-300)) {
            res.converged = true;
            break;
        }
        std::vector<double> centroid(m, 0.0);
        for (size_t i = 0; i < m; i++)
            for (size_t j = 0; j < m; j++)
                centroid[j] += simplex[order[i]][j] / double(m);
        auto &xw = simplex[order[m]];
        auto point = [&] (double t) {
            std::vector<double> x(m);
            for (size_t j = 0; j < m; j++)
                x[j] = centroid[j] + t * (xw[j] - centroid[j]);
            return x;
        };
        auto xr = point(-1);
        double cr = cost_of(f, xr, r);
        if (cr < best) {
            auto xe = point(-2);
            double ce = cost_of(f, xe, r);
            if (ce < cr) {
                xw = xe;
                cost[order[m]] = ce;
            }
            else {
                xw = xr;
                cost[order[m]] = cr;
            }
            continue;
        }
        if (cr < cost[order[m - 1]]) {
            xw = xr;
            cost[order[m]] = cr;
            continue;
        }
        auto xc = cr < worst ? point(-0.5) : point(0.5);
        double cc = cost_of(f, xc, r);
        if (cc < std::min(cr, worst)) {
            xw = xc;
            cost[order[m]] = cc;
            continue;
        }
        auto &xb = simplex[order[0]];
        for (size_t i = 1; i <= m; i++) {
            auto &xi = simplex[order[i]];
            for (size_t j = 0; j < m; j++)
                xi[j] = xb[j] + 0.5 * (xi[j] - xb[j]);
            cost[order[i]] = cost_of(f, xi, r);
        }
    }
    size_t bi = std::min_element(cost.begin(), cost.end()) - cost.begin();
    res.values = simplex[bi];
    res.iterations = it;
    res.residual_norm = std::sqrt(cost[bi]);
    res.sigma.assign(m, 0.0);
    if (!res.converged)
        res.diagnostic = "simplex did not contract within the iteration limit";
    return res;
}

FitResult curve_fit(const Model &model, std::span<const double> x, std::span<const double> y,
                    std::vector<double> initial, std::vector<std::string> names, std::span<const double> w,
                    const Options &opt, int resamples, uint64_t seed)
{
    size_t n = x.size();
    auto make = [&] (std::span<const size_t> idx) -> ResidualFn {
        std::vector<size_t> sel(idx.begin(), idx.end());
        return [&model, x, y, w, sel] (std::span<const double> p, std::span<double> out) {
            for (size_t k = 0; k < sel.size(); k++) {
                size_t i = sel[k];
                double wi = w.empty() ? 1.0 : w[i];
                out[k] = (model(x[i], p) - y[i]) * wi;
            }
        };
    };
    std::vector<size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    auto res = levenberg_marquardt(make(all), n, initial, names, opt);
    bool finite = std::all_of(res.values.begin(), res.values.end(), [] (double v) { return std::isfinite(v); });
    if (res.converged && finite)
        return res;

    auto nm = nelder_mead(make(all), n, initial, names, opt);
    nm.diagnostic = "Levenberg-Marquardt failed (" + res.diagnostic + "); simplex fallback" +
        (nm.diagnostic.empty() ? "" : ": " + nm.diagnostic);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    size_t m = initial.size();
    std::vector<double> sum(m, 0.0), sum2(m, 0.0);
    int good = 0;
    for (int b = 0; b < resamples; b++) {
        std::vector<size_t> idx(n);
        for (auto &i: idx)
            i = pick(rng);
        auto fb = nelder_mead(make(idx), n, nm.values, names, opt);
        for (size_t j = 0; j < m; j++) {
            sum[j] += fb.values[j];
            sum2[j] += fb.values[j] * fb.values[j];
        }
        good++;
    }
    for (size_t j = 0; j < m && good > 1; j++) {
        double mean = sum[j] / good;
        nm.sigma[j] = std::sqrt(std::max(sum2[j] / good - mean * mean, 0.0) * good / (good - 1));
    }
    return nm;
}

}
