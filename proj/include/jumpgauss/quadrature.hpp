#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "jumpgauss/errors.hpp"

namespace jumpgauss {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1].
// Column 0: abscissa, column 1: Gauss weight (0 for Kronrod-only nodes),
// column 2: Kronrod weight. Symmetric nodes are folded.
inline constexpr double kGk15[8][3] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978553},
    {0.207784955007898468, 0.0,                  0.204432940075298892},
    {0.586087235467691130, 0.0,                  0.169004726639267903},
    {0.864864423359769073, 0.0,                  0.104790010322250184},
    {0.991455371120812639, 0.0,                  0.022935322010529225},
};

template <class F>
inline void gk15(const F& f, double a, double b, double& value, double& err,
                 double& resabs_out) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv[8];
    double fw[8];
    fv[0] = f(mid);
    fw[0] = 0.0;
    double gauss = kGk15[0][1] * fv[0];
    double kronrod = kGk15[0][2] * fv[0];
    double resabs = kGk15[0][2] * std::fabs(fv[0]);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kGk15[i][0];
        fv[i] = f(mid + dx);
        fw[i] = f(mid - dx);
        gauss += kGk15[i][1] * (fv[i] + fw[i]);
        kronrod += kGk15[i][2] * (fv[i] + fw[i]);
        resabs += kGk15[i][2] * (std::fabs(fv[i]) + std::fabs(fw[i]));
    }
    // QUADPACK QK15 error estimate: deviation-scaled difference between the
    // Gauss and Kronrod rules, floored at the attainable roundoff.
    const double reskh = kronrod * 0.5;
    double resasc = kGk15[0][2] * std::fabs(fv[0] - reskh);
    for (int i = 1; i < 8; ++i)
        resasc += kGk15[i][2] * (std::fabs(fv[i] - reskh) + std::fabs(fw[i] - reskh));
    const double ah = std::fabs(half);
    value = kronrod * half;
    resabs *= ah;
    resasc *= ah;
    err = std::fabs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        err = std::max(eps50 * resabs, err);
    resabs_out = resabs;
}

struct Interval {
    double a, b, value, err, resabs;
    bool operator<(const Interval& o) const { return err < o.err; }
};

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
/// Splits the interval with the largest local error estimate until the
/// combined estimate meets abs_tol or rel_tol, or the subdivision limit
/// is reached (quadrature_error).
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    const QuadratureOptions& opt = {}) {
    if (!(a <= b)) throw std::domain_error("integrate_adaptive: requires a <= b");
    QuadratureResult res;
    if (a == b) return res;

    std::priority_queue<detail::Interval> work;
    detail::Interval whole{a, b, 0.0, 0.0, 0.0};
    detail::gk15(f, a, b, whole.value, whole.err, whole.resabs);
    double total = whole.value;
    double total_err = whole.err;
    double total_resabs = whole.resabs;
    work.push(whole);

    // Roundoff on Sum |f| bounds the attainable accuracy; past it, further
    // splitting cannot help.
    const double eps100 = 100.0 * std::numeric_limits<double>::epsilon();
    auto tolerance = [&] {
        return std::max({opt.abs_tol, opt.rel_tol * std::fabs(total),
                         eps100 * total_resabs});
    };

    int splits = 0;
    while (total_err > tolerance()) {
        if (work.empty()) break;
        if (splits >= opt.max_subdivisions) {
            throw quadrature_error("adaptive quadrature did not converge after " +
                                   std::to_string(splits) + " subdivisions (err=" +
                                   std::to_string(total_err) + ")");
        }
        detail::Interval top = work.top();
        work.pop();
        const double mid = 0.5 * (top.a + top.b);
        if (mid <= top.a || mid >= top.b) {
            // Not splittable in double precision; accept its value as-is.
            total_err -= top.err;
            continue;
        }
        detail::Interval left{top.a, mid, 0.0, 0.0, 0.0}, right{mid, top.b, 0.0, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.err, left.resabs);
        detail::gk15(f, right.a, right.b, right.value, right.err, right.resabs);
        total += left.value + right.value - top.value;
        total_err += left.err + right.err - top.err;
        total_resabs += left.resabs + right.resabs - top.resabs;
        work.push(left);
        work.push(right);
        ++splits;
    }
    res.value = total;
    res.error_estimate = total_err;
    res.subdivisions = splits;
    return res;
}

} // namespace jumpgauss
