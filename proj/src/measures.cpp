#include "jumpgauss/measures.hpp"

#include <cmath>
#include <iostream>

#include "jumpgauss/sampling.hpp"

namespace jumpgauss::measures {

LevyMeasureModel LevyMeasureModel::power_law(double b, QuadratureOptions quad) {
    if (!(b >= 0.0 && b < 1.0))
        throw std::domain_error("power-law exponent must satisfy 0 <= b < 1");
    LevyMeasureModel m;
    m.family_ = Family::power_law;
    m.b_ = b;
    m.tail_coef_ = 1.0;
    m.quad_ = quad;
    m.density_ = [b](double z) { return std::pow(z, -(1.0 + b)); };
    return m;
}

LevyMeasureModel LevyMeasureModel::custom(std::function<double(double)> density,
                                          double tail_exponent, double tail_coef,
                                          QuadratureOptions quad) {
    if (!(tail_exponent >= 0.0 && tail_exponent < 1.0))
        throw std::domain_error("declared tail exponent must satisfy 0 <= b < 1");
    LevyMeasureModel m;
    m.family_ = Family::custom;
    m.b_ = tail_exponent;
    m.tail_coef_ = tail_coef;
    m.quad_ = quad;
    m.density_ = std::move(density);
    return m;
}

double LevyMeasureModel::density(double z) const {
    if (!(z > 0.0 && z <= 1.0)) throw std::domain_error("mu density defined on (0,1]");
    const double d = density_(z);
    if (d < 0.0) throw std::domain_error("mu density must be nonnegative");
    return d;
}

double LevyMeasureModel::integrate_mu(const std::function<double(double)>& f,
                                      double a, double b) const {
    return integrate_mu_with(f, a, b, quad_);
}

double LevyMeasureModel::integrate_mu_with(const std::function<double(double)>& f,
                                           double a, double b,
                                           const QuadratureOptions& opt) const {
    if (!(a > 0.0))
        throw std::domain_error("integrate_mu: lower bound must be > 0; "
                                "handle the limit at 0 analytically");
    if (!(a <= b && b <= 1.0))
        throw std::domain_error("integrate_mu: requires 0 < a <= b <= 1");
    auto integrand = [&](double z) { return f(z) * density_(z); };
    return integrate_adaptive(integrand, a, b, opt).value;
}

double LevyMeasureModel::integrate_nu(const std::function<double(double)>& g,
                                      double a, double b) const {
    if (!(a >= 1.0 && a <= b))
        throw std::domain_error("integrate_nu: requires 1 <= a <= b");
    auto integrand = [&](double z) { return g(z) * nu_density(z); };
    return integrate_adaptive(integrand, a, b, quad_).value;
}

double LevyMeasureModel::eta_p(double p, double eps, const Envelope& envelope) const {
    if (!(p >= 1.0)) throw std::domain_error("eta_p: requires p >= 1");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("eta_p: requires eps in [0,1]");
    if (eps == 0.0) return 0.0;
    if (envelope.scale == 0.0 && envelope.exact_power) return 0.0;
    if (family_ == Family::power_law && envelope.exact_power) {
        const double expo = p * envelope.power - b_;
        if (expo <= 0.0)
            throw divergence_error("eta_p diverges: p*power - b <= 0");
        return std::pow(envelope.scale, p) * std::pow(eps, expo) / expo;
    }
    return eta_p_quadrature(p, eps, envelope);
}

double LevyMeasureModel::eta_p_quadrature(double p, double eps, const Envelope& envelope) const {
    if (!(p >= 1.0)) throw std::domain_error("eta_p: requires p >= 1");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("eta_p: requires eps in [0,1]");
    if (eps == 0.0) return 0.0;
    // Declared-power behavior near 0 gives the tail over (0, floor] in closed
    // form; the quadrature covers [floor, eps].
    const double expo = p * envelope.power - b_;
    if (expo <= 0.0 && envelope.scale != 0.0)
        throw divergence_error("eta_p diverges: p*power - b <= 0");
    double tail = 0.0;
    if (envelope.scale != 0.0 && eps > kSingularFloor)
        tail = std::pow(envelope.scale, p) * tail_coef_ *
               std::pow(kSingularFloor, expo) / expo;
    const double lo = std::min(eps, kSingularFloor);
    if (lo == eps) {
        // eps at or below the floor: closed-form tail only.
        return envelope.scale == 0.0
                   ? 0.0
                   : std::pow(envelope.scale, p) * tail_coef_ * std::pow(eps, expo) / expo;
    }
    auto integrand = [&](double z) {
        return std::pow(std::fabs(envelope(z)), p) * density_(z);
    };
    return integrate_adaptive(integrand, lo, eps, quad_).value + tail;
}

double LevyMeasureModel::nu_density(double z) const {
    if (!(z >= 1.0)) throw std::domain_error("nu density defined on [1,infty)");
    if (family_ == Family::power_law) return std::pow(z, b_ - 1.0);
    return density_(1.0 / z) / (z * z);
}

double LevyMeasureModel::band_mass(int k) const {
    if (k < 1) throw std::domain_error("band index must be >= 1");
    return nu_mass(static_cast<double>(k), static_cast<double>(k) + 1.0);
}

double LevyMeasureModel::nu_mass(double a, double b) const {
    if (!(a >= 1.0 && a <= b)) throw std::domain_error("nu_mass: requires 1 <= a <= b");
    if (family_ == Family::power_law) {
        if (b_ == 0.0) return std::log(b / a);
        return (std::pow(b, b_) - std::pow(a, b_)) / b_;
    }
    return integrate_nu([](double) { return 1.0; }, a, b);
}

double LevyMeasureModel::nu_band_moment(int k, int m) const {
    if (k < 1) throw std::domain_error("band index must be >= 1");
    const double a = k, b = k + 1.0;
    if (family_ == Family::power_law) {
        const double e = b_ + m;  // integrand z^m * z^{b-1} = z^{e-1}
        if (e == 0.0) return std::log(b / a);
        return (std::pow(b, e) - std::pow(a, e)) / e;
    }
    return integrate_nu([m](double z) { return std::pow(z, m); }, a, b);
}

double LevyMeasureModel::nu_band_quantile(int k, double u) const {
    if (k < 1) throw std::domain_error("band index must be >= 1");
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile argument must be in [0,1]");
    if (family_ != Family::power_law)
        throw error("nu_band_quantile: closed-form inverse CDF exists only for "
                    "the power-law family; use rejection sampling instead");
    const double kk = k;
    if (b_ == 0.0) return kk * std::pow((kk + 1.0) / kk, u);
    const double lo = std::pow(kk, b_);
    const double hi = std::pow(kk + 1.0, b_);
    return std::pow(lo + u * (hi - lo), 1.0 / b_);
}

double LevyMeasureModel::nu_band_density_sup(int k) const {
    if (k < 1) throw std::domain_error("band index must be >= 1");
    if (family_ == Family::power_law) {
        // z^{b-1} decreases on the band for b < 1.
        return nu_density(static_cast<double>(k));
    }
    double sup = 0.0;
    const int n = 257;
    for (int i = 0; i < n; ++i) {
        const double z = k + static_cast<double>(i) / (n - 1);
        sup = std::max(sup, nu_density(std::max(1.0, z)));
    }
    return sup * 1.02;  // safety margin over the grid scan
}

double LevyMeasureModel::splitting_epsilon(int k, double eps_star, double alpha1) const {
    if (k < 1) throw std::domain_error("band index must be >= 1");
    if (!(eps_star > 0.0)) throw std::domain_error("eps_star must be > 0");
    if (!(alpha1 > 0.0 && alpha1 <= 1.0)) throw std::domain_error("alpha1 must be in (0,1]");

    const double mpsi = jumpgauss::sampling::m_psi();
    const double guard = (1.0 - 1e-6) / mpsi;
    double eps_k = std::min(eps_star / std::pow(k + 1.0, 1.0 - alpha1), guard);

    // Minorization check on a grid of subintervals of [k, k+1]:
    // nu(a,b) >= eps_k * m_k * (b-a) must hold for every subinterval.
    const double mk = band_mass(k);
    const int grid = 64;
    double bound = guard;
    for (int i = 0; i < grid; ++i) {
        const double a = k + static_cast<double>(i) / grid;
        const double b = k + static_cast<double>(i + 1) / grid;
        const double mass = nu_mass(a, b);
        bound = std::min(bound, mass / (mk * (b - a)));
        // Pointwise density is a sharper witness where it is available.
        bound = std::min(bound, nu_density(b) / mk);
    }
    bound = std::min(bound, nu_density(static_cast<double>(k)) / mk);
    if (eps_k > bound) {
        const double reduced = bound * (1.0 - 1e-9);
        std::cerr << "[jumpgauss] warning: band " << k
                  << " minorization fails at eps_k=" << eps_k
                  << "; reduced to " << reduced << "\n";
        eps_k = reduced;
    }
    return eps_k;
}

BandDecomposition::BandDecomposition(const LevyMeasureModel& model, int cutoff_M,
                                     double eps_star, double alpha1)
    : cutoff_(cutoff_M), eps_star_(eps_star), alpha1_(alpha1) {
    if (cutoff_M < 2) throw std::domain_error("band cutoff M must be >= 2");
    bands_.reserve(cutoff_M - 1);
    for (int k = 1; k < cutoff_M; ++k) {
        Band b;
        b.k = k;
        b.mass = model.band_mass(k);
        if (!(b.mass > 0.0)) throw std::domain_error("band mass must be positive");
        b.epsilon = model.splitting_epsilon(k, eps_star, alpha1);
        bands_.push_back(b);
    }
}

const Band& BandDecomposition::band(int k) const {
    if (k < 1 || k > static_cast<int>(bands_.size()))
        throw lookup_error("band index out of range: " + std::to_string(k));
    return bands_[k - 1];
}

} // namespace jumpgauss::measures
