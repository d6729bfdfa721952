#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "jumpgauss/errors.hpp"
#include "jumpgauss/quadrature.hpp"

namespace jumpgauss::measures {

/// Floor below which integrands are treated analytically rather than fed to
/// the adaptive quadrature: the measure may be singular at 0, and quadrature
/// alone cannot certify convergence there.
inline constexpr double kSingularFloor = 1e-12;

enum class Family { power_law, custom };

/// Envelope of a jump coefficient in the small-jump coordinate z in (0,1]:
/// cbar(z) >= |c(s,z,x)| for all s, x. The declared behavior near 0 is
/// cbar(z) ~ scale * z^power, used for closed forms and singular tails.
struct Envelope {
    std::function<double(double)> fn;
    double scale = 1.0;
    double power = 1.0;
    bool exact_power = false;  // true when fn(z) == scale * z^power exactly

    double operator()(double z) const { return fn ? fn(z) : scale * std::pow(z, power); }

    static Envelope linear(double sigma_bar) {
        Envelope e;
        e.scale = sigma_bar;
        e.power = 1.0;
        e.exact_power = true;
        e.fn = [sigma_bar](double z) { return sigma_bar * z; };
        return e;
    }
};

/// A sigma-finite jump-intensity measure mu on (0,1] with infinite mass
/// allowed at 0, its image nu on [1,infty) under z -> 1/z, and the band
/// machinery nu needs. Immutable after construction; concurrent reads are
/// safe.
class LevyMeasureModel {
public:
    /// mu(dz) = z^{-(1+b)} dz on (0,1], 0 <= b < 1.
    static LevyMeasureModel power_law(double b, QuadratureOptions quad = {});

    /// Custom density d(mu)/dz on (0,1]. tail_exponent/tail_coef declare the
    /// near-0 behavior density(z) ~ tail_coef * z^{-(1+tail_exponent)}, which
    /// handles the singular region below kSingularFloor analytically.
    static LevyMeasureModel custom(std::function<double(double)> density,
                                   double tail_exponent, double tail_coef,
                                   QuadratureOptions quad = {});

    Family family() const { return family_; }
    double exponent() const { return b_; }
    const QuadratureOptions& quad() const { return quad_; }

    /// d(mu)/dz at z in (0,1].
    double density(double z) const;

    /// Integral of f against mu over (a,b], 0 < a <= b <= 1.
    double integrate_mu(const std::function<double(double)>& f, double a, double b) const;

    /// Same integral under caller-supplied quadrature settings.
    double integrate_mu_with(const std::function<double(double)>& f, double a, double b,
                             const QuadratureOptions& opt) const;

    /// Integral of g against nu over [a,b), 1 <= a <= b.
    double integrate_nu(const std::function<double(double)>& g, double a, double b) const;

    /// p-th small-jump moment of the envelope: integral of cbar(z)^p mu(dz)
    /// over (0,eps]. Closed form for the power-law family with an exact-power
    /// envelope, else quadrature with an analytic singular tail.
    double eta_p(double p, double eps, const Envelope& envelope) const;

    /// Always-quadrature route for eta_p; independent check of the closed form.
    double eta_p_quadrature(double p, double eps, const Envelope& envelope) const;

    /// d(nu)/dz at z >= 1; equals density(1/z)/z^2.
    double nu_density(double z) const;

    /// m_k = nu([k, k+1)), k >= 1.
    double band_mass(int k) const;

    /// Integral of z^m nu(dz) over [k, k+1); closed form for power law.
    double nu_band_moment(int k, int m) const;

    /// nu-measure of (a,b) for k <= a <= b <= k+1 (band-local mass).
    double nu_mass(double a, double b) const;

    /// Inverse CDF of the normalized band law on [k, k+1); power-law only.
    double nu_band_quantile(int k, double u) const;

    /// Sup of nu_density over [k, k+1] (rejection envelope for custom laws).
    double nu_band_density_sup(int k) const;

    /// Splitting constant for band k: eps_star/(k+1)^{1-alpha1}, clamped so
    /// that eps_k * m(psi) < 1, then reduced if the band minorization
    /// nu(a,b) >= eps_k * m_k * (b-a) fails on a grid of subintervals
    /// (reduction is logged to stderr).
    double splitting_epsilon(int k, double eps_star, double alpha1) const;

private:
    LevyMeasureModel() = default;
    Family family_ = Family::power_law;
    double b_ = 0.5;          // power-law exponent, or declared tail exponent
    double tail_coef_ = 1.0;  // density(z) ~ tail_coef * z^{-(1+b)} near 0
    std::function<double(double)> density_;
    QuadratureOptions quad_;
};

struct Band {
    int k = 0;
    double mass = 0.0;     // m_k = nu(I_k)
    double epsilon = 0.0;  // splitting constant eps_k
};

/// Bands I_k = [k, k+1) for k = 1..M-1 with their masses and splitting
/// constants. The region z >= M belongs to the Gaussian part and carries no
/// band.
class BandDecomposition {
public:
    BandDecomposition(const LevyMeasureModel& model, int cutoff_M,
                      double eps_star, double alpha1);

    int cutoff() const { return cutoff_; }
    double eps_star() const { return eps_star_; }
    double alpha1() const { return alpha1_; }
    const std::vector<Band>& bands() const { return bands_; }
    const Band& band(int k) const;

private:
    int cutoff_;
    double eps_star_;
    double alpha1_;
    std::vector<Band> bands_;
};

} // namespace jumpgauss::measures
