#pragma once

#include <span>
#include <string>
#include <vector>

#include "jumpgauss/coeffs.hpp"
#include "jumpgauss/schemes.hpp"

namespace jumpgauss::stats {

struct ErrorEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
    std::string test_function;
};

/// Paired weak-error estimate |E phi(A) - E phi(B)| from a coupled run:
/// mean of per-path differences phi(A_i) - phi(B_i) with the paired-sample
/// standard error.
ErrorEstimate weak_error(const coeffs::TestFunction& phi,
                         const schemes::CoupledResult& coupled,
                         schemes::SchemeId scheme_a, schemes::SchemeId scheme_b);

/// Same estimator over two raw terminal vectors (paired by index).
ErrorEstimate paired_weak_error(const coeffs::TestFunction& phi,
                                std::span<const double> a, std::span<const double> b);

struct KdeDensity {
    double lo = 0.0;
    double step = 0.0;
    double bandwidth = 0.0;
    std::vector<double> values;

    double hi() const { return lo + step * (values.size() - 1); }
    /// Linear interpolation; zero outside the grid.
    double at(double x) const;
    /// Trapezoid integral over the grid.
    double integral() const;
};

struct KdeOptions {
    std::size_t grid_size = 2048;
    double bandwidth = 0.0;  // 0 = Silverman: 0.9 min(sd, IQR/1.34) N^{-1/5}
};

/// Gaussian-kernel density on a uniform grid covering [min-3h, max+3h].
KdeDensity kde(std::span<const double> samples, const KdeOptions& opt = {});

/// Total variation distance 1/2 integral |p - q| on the merged grid.
double tv_from_kde(const KdeDensity& p, const KdeDensity& q);

struct KsResult {
    double statistic = 0.0;
    double critical_1pct = 0.0;
    bool reject = false;
};

/// Two-sample Kolmogorov-Smirnov statistic with the asymptotic 1% critical
/// value c * sqrt((n+m)/(n m)), c = sqrt(-ln(0.005)/2).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct RatePoint {
    double eps = 0.0;
    double error = 0.0;
    double std_error = 0.0;  // 0 = no noise-floor information
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<double> residuals;  // per used point, log-space
    std::vector<bool> used;         // per input point
    int n_used = 0;
};

/// Least squares on (log eps, log error). Points with |error| below twice
/// their standard error are excluded (the log of noise carries no signal);
/// fewer than 3 usable points is an error.
RateFit rate_fit(std::span<const RatePoint> points);
RateFit rate_fit(std::span<const double> eps_list, std::span<const double> errors);

/// Sample mean and (n-1)-normalized variance helpers used across tests.
double mean(std::span<const double> xs);
double variance(std::span<const double> xs);

} // namespace jumpgauss::stats
