#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symcool::fit {

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<double> sigma; // 1-sigma; +inf marks an unidentifiable parameter
    double residual_norm = 0;  // sqrt of the sum of squared residuals
    bool converged = false;
    int iterations = 0;
    std::string diagnostic;

    double value(std::string_view name) const;
    double uncertainty(std::string_view name) const;
};

// residuals(params, out): fills `out` (size n) with weighted model - data.
using ResidualFn = std::function<void(std::span<const double>, std::span<double>)>;

struct Options {
    int max_iterations = 200;
    double tolerance = 1e-12; // relative change in the cost
};

// Damped Gauss-Newton (Levenberg-Marquardt) with a forward-difference
// Jacobian and Marquardt's diagonal scaling.  Uncertainties come from
// s^2 (J^T J)^-1 at the optimum with s^2 = RSS/(n - p).
FitResult levenberg_marquardt(const ResidualFn &residuals, size_t n, std::vector<double> initial,
                              std::vector<std::string> names, const Options &options = {});

// Derivative-free fallback.  Uncertainties are left at zero.
FitResult nelder_mead(const ResidualFn &residuals, size_t n, std::vector<double> initial,
                      std::vector<std::string> names, const Options &options = {});

using Model = std::function<double(double x, std::span<const double> p)>;

// Fits y ~ model(x, p) with residuals (model - y) * w.  Empty weights mean 1.
// Falls back to the simplex when LM fails; the fallback reports bootstrap
// uncertainties from `resamples` resampled data sets.
FitResult curve_fit(const Model &model, std::span<const double> x, std::span<const double> y,
                    std::vector<double> initial, std::vector<std::string> names,
                    std::span<const double> weights = {}, const Options &options = {},
                    int resamples = 100, uint64_t seed = 12345);

}
