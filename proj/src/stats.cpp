#include "jumpgauss/stats.hpp"

#include <algorithm>
#include <cmath>

namespace jumpgauss::stats {

namespace {
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
// sqrt(-ln(alpha/2)/2) at alpha = 0.01
constexpr double kKs1pct = 1.6276236307187293;
}

double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

ErrorEstimate paired_weak_error(const coeffs::TestFunction& phi,
                                std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::domain_error("paired samples differ in length");
    if (a.size() < 100) throw std::domain_error("paired weak error requires N >= 100");
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = phi.phi(a[i]) - phi.phi(b[i]);
    ErrorEstimate est;
    est.test_function = phi.name;
    est.n = static_cast<std::int64_t>(diff.size());
    est.estimate = mean(diff);
    est.std_error = std::sqrt(variance(diff) / static_cast<double>(diff.size()));
    return est;
}

ErrorEstimate weak_error(const coeffs::TestFunction& phi,
                         const schemes::CoupledResult& coupled,
                         schemes::SchemeId scheme_a, schemes::SchemeId scheme_b) {
    const std::size_t ja = coupled.column(scheme_a.kind, scheme_a.eps);
    const std::size_t jb = coupled.column(scheme_b.kind, scheme_b.eps);
    const std::size_t ncol = coupled.schemes.size();
    if (coupled.paths < 100) throw std::domain_error("weak_error requires N >= 100");
    std::vector<double> diff(coupled.paths);
    for (std::int64_t p = 0; p < coupled.paths; ++p) {
        const double xa = coupled.terminals[p * ncol + ja];
        const double xb = coupled.terminals[p * ncol + jb];
        diff[p] = phi.phi(xa) - phi.phi(xb);
    }
    ErrorEstimate est;
    est.test_function = phi.name;
    est.n = coupled.paths;
    est.estimate = mean(diff);
    est.std_error = ja == jb ? 0.0
                             : std::sqrt(variance(diff) / static_cast<double>(diff.size()));
    return est;
}

double KdeDensity::at(double x) const {
    if (values.empty() || step <= 0.0) return 0.0;
    const double pos = (x - lo) / step;
    if (pos < 0.0 || pos > static_cast<double>(values.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values.size()) return values.back();
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

double KdeDensity::integral() const {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * step;
}

KdeDensity kde(std::span<const double> samples, const KdeOptions& opt) {
    if (samples.size() < 1000) throw std::domain_error("kde requires N >= 1000 samples");
    const auto n = static_cast<double>(samples.size());

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double sd = std::sqrt(variance(sorted));
    const double q1 = sorted[static_cast<std::size_t>(0.25 * (sorted.size() - 1))];
    const double q3 = sorted[static_cast<std::size_t>(0.75 * (sorted.size() - 1))];
    const double iqr = (q3 - q1) / 1.34;

    double h = opt.bandwidth;
    if (h <= 0.0) {
        double scale = 0.0;
        if (sd > 0.0 && iqr > 0.0) scale = std::min(sd, iqr);
        else scale = std::max(sd, iqr);
        if (scale <= 0.0) throw degenerate_sample_error("kde: samples have zero spread");
        h = 0.9 * scale * std::pow(n, -0.2);
    }

    KdeDensity d;
    d.bandwidth = h;
    const double lo = sorted.front() - 3.0 * h;
    const double hi = sorted.back() + 3.0 * h;
    const std::size_t m = std::max<std::size_t>(opt.grid_size, 16);
    d.lo = lo;
    d.step = (hi - lo) / static_cast<double>(m - 1);
    d.values.assign(m, 0.0);

    // Linear binning followed by discrete convolution with the Gaussian
    // kernel, truncated where it falls below machine noise.
    std::vector<double> bins(m, 0.0);
    for (const double x : sorted) {
        const double pos = (x - lo) / d.step;
        auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= m) i = m - 2;
        const double w = pos - static_cast<double>(i);
        bins[i] += 1.0 - w;
        bins[i + 1] += w;
    }
    const auto radius = static_cast<std::int64_t>(std::ceil(8.5 * h / d.step));
    std::vector<double> kernel(radius + 1);
    for (std::int64_t r = 0; r <= radius; ++r) {
        const double u = static_cast<double>(r) * d.step / h;
        kernel[r] = kInvSqrt2Pi * std::exp(-0.5 * u * u) / (n * h);
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (bins[i] == 0.0) continue;
        const double w = bins[i];
        const auto ii = static_cast<std::int64_t>(i);
        const std::int64_t r0 = std::max<std::int64_t>(0, ii - radius);
        const std::int64_t r1 = std::min<std::int64_t>(m - 1, ii + radius);
        for (std::int64_t j = r0; j <= r1; ++j)
            d.values[j] += w * kernel[std::llabs(j - ii)];
    }
    return d;
}

double tv_from_kde(const KdeDensity& p, const KdeDensity& q) {
    if (p.values.empty() || q.values.empty())
        throw std::domain_error("tv_from_kde: empty density");
    const double lo = std::min(p.lo, q.lo);
    const double hi = std::max(p.hi(), q.hi());
    const double step = std::min(p.step, q.step);
    const auto m = static_cast<std::size_t>((hi - lo) / step) + 2;
    double acc = 0.0;
    double prev = std::fabs(p.at(lo) - q.at(lo));
    for (std::size_t i = 1; i < m; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        const double cur = std::fabs(p.at(x) - q.at(x));
        acc += 0.5 * (prev + cur) * step;
        prev = cur;
    }
    return 0.5 * acc;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::domain_error("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double stat = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        stat = std::max(stat, std::fabs(static_cast<double>(i) / na -
                                        static_cast<double>(j) / nb));
    }
    KsResult r;
    r.statistic = stat;
    r.critical_1pct = kKs1pct * std::sqrt((na + nb) / (na * nb));
    r.reject = stat > r.critical_1pct;
    return r;
}

RateFit rate_fit(std::span<const RatePoint> points) {
    std::vector<double> lx, ly;
    RateFit fit;
    fit.used.assign(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.eps > 0.0)) throw std::domain_error("rate_fit: eps must be > 0");
        const double e = std::fabs(p.error);
        if (e <= 0.0) continue;                        // log undefined
        if (p.std_error > 0.0 && e < 2.0 * p.std_error) continue;  // noise floor
        fit.used[i] = true;
        lx.push_back(std::log(p.eps));
        ly.push_back(std::log(e));
    }
    const auto n = static_cast<int>(lx.size());
    if (n < 3)
        throw insufficient_data_error("rate_fit needs >= 3 points above the noise floor, got " +
                                      std::to_string(n));
    const double mx = mean(lx);
    const double my = mean(ly);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.n_used = n;
    fit.residuals.resize(n);
    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        fit.residuals[i] = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += fit.residuals[i] * fit.residuals[i];
    }
    fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    return fit;
}

RateFit rate_fit(std::span<const double> eps_list, std::span<const double> errors) {
    if (eps_list.size() != errors.size())
        throw std::domain_error("rate_fit: eps and error lists differ in length");
    std::vector<RatePoint> pts(eps_list.size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {eps_list[i], errors[i], 0.0};
    return rate_fit(pts);
}

} // namespace jumpgauss::stats
