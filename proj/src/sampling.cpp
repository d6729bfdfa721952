#include "jumpgauss/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "jumpgauss/quadrature.hpp"

namespace jumpgauss::sampling {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::int64_t kRejectionCap = 1000000;
}

double psi(double t) {
    const double u = std::fabs(t);
    if (u <= 0.25) return 1.0;
    if (u > 0.5) return 0.0;
    const double w = 4.0 * u - 1.0;
    const double denom = 1.0 - w * w;
    if (denom <= 0.0) return 0.0;  // |t| == 1/2 boundary
    return std::exp(1.0 - 1.0 / denom);
}

double m_psi() {
    static const double value = [] {
        QuadratureOptions opt;
        opt.abs_tol = 1e-14;
        opt.rel_tol = 1e-13;
        return integrate_adaptive([](double t) { return psi(t); }, -0.5, 0.5, opt).value;
    }();
    return value;
}

std::int64_t sample_poisson(double mean, RngStream& stream) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::domain_error("sample_poisson: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // Sequential inversion of the CDF.
        const double u = stream.next_uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::int64_t k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (k > 10000) break;  // u within rounding of 1
        }
        return k;
    }
    // Hoermann's transformed rejection with squeeze (PTRD).
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double U = stream.next_uniform() - 0.5;
        double V = stream.next_uniform_pos();
        const double us = 0.5 - std::fabs(U);
        const double kf = std::floor((2.0 * a / us + b) * U + mean + 0.43);
        if (us >= 0.07 && V <= v_r) return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && V > us)) continue;
        const double k = kf;
        const double lhs = std::log(V * inv_alpha / (a / (us * us) + b));
        const double rhs = k * std::log(mean) - mean - std::lgamma(k + 1.0);
        if (lhs <= rhs) return static_cast<std::int64_t>(kf);
    }
}

double gaussian_increment(double variance, RngStream& stream) {
    if (!(variance >= 0.0) || !std::isfinite(variance))
        throw std::domain_error("gaussian_increment: variance must be finite and >= 0");
    if (variance == 0.0) return 0.0;
    const double u1 = stream.next_uniform_pos();
    const double u2 = stream.next_uniform();
    return std::sqrt(-2.0 * std::log(u1) * variance) * std::cos(kTwoPi * u2);
}

double sample_band_size(const measures::LevyMeasureModel& model, int k, RngStream& stream) {
    if (model.family() == measures::Family::power_law)
        return model.nu_band_quantile(k, stream.next_uniform());
    const double sup = model.nu_band_density_sup(k);
    for (std::int64_t i = 0; i < kRejectionCap; ++i) {
        const double z = k + stream.next_uniform();
        const double u = stream.next_uniform();
        if (u * sup <= model.nu_density(z)) return z;
    }
    throw sampler_error("band-size rejection sampler exceeded its iteration cap");
}

SplitDraw sample_split(const measures::LevyMeasureModel& model,
                       const measures::Band& band, RngStream& stream) {
    const int k = band.k;
    const double eps_k = band.epsilon;
    const double center = k + 0.5;
    SplitDraw d;
    d.xi = stream.next_uniform() < eps_k * m_psi() ? 1 : 0;

    // V: bump law on the band, by rejection against the uniform proposal.
    for (std::int64_t i = 0;; ++i) {
        if (i >= kRejectionCap)
            throw sampler_error("bump rejection sampler exceeded its iteration cap");
        const double t = k + stream.next_uniform();
        if (stream.next_uniform() <= psi(t - center)) {
            d.v = t;
            break;
        }
    }

    // U: complement law; proposal is the band law itself. Acceptance
    // probability 1 - eps_k psi_k(z)/p_Z(z) is in [0,1] exactly when the
    // minorization holds on the band.
    for (std::int64_t i = 0;; ++i) {
        if (i >= kRejectionCap)
            throw sampler_error("complement rejection sampler exceeded its iteration cap");
        const double z = sample_band_size(model, k, stream);
        const double p_z = model.nu_density(z) / band.mass;
        const double acc = 1.0 - eps_k * psi(z - center) / p_z;
        if (acc < -1e-12 || acc > 1.0 + 1e-12)
            throw minorization_error(
                "complement-law acceptance probability outside [0,1]: band " +
                std::to_string(k) + ", z=" + std::to_string(z));
        if (stream.next_uniform() < std::clamp(acc, 0.0, 1.0)) {
            d.u = z;
            break;
        }
    }

    d.composite = d.xi ? d.v : d.u;
    return d;
}

BandJumpSet sample_band_jumps(const measures::LevyMeasureModel& model, int k,
                              double band_mass, double t,
                              RngStream& count_stream, RngStream& time_stream,
                              RngStream& mark_stream) {
    BandJumpSet set;
    set.k = k;
    const std::int64_t n = sample_poisson(band_mass * t, count_stream);
    set.times.resize(n);
    set.sizes.resize(n);
    for (std::int64_t i = 0; i < n; ++i) set.times[i] = t * time_stream.next_uniform();
    std::sort(set.times.begin(), set.times.end());
    for (std::int64_t i = 0; i < n; ++i) set.sizes[i] = sample_band_size(model, k, mark_stream);
    return set;
}

} // namespace jumpgauss::sampling
