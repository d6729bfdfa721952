#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jumpgauss/measures.hpp"

namespace jumpgauss::coeffs {

using measures::Envelope;

/// Jump coefficient c(s, z, x): time s, jump mark z in (0,1], state x.
/// When factorized, c(s,z,x) = sigma(x) * z exactly and the drift/diffusion
/// functionals collapse to closed forms. Immutable after construction.
class JumpCoefficient {
public:
    using Fn = std::function<double(double s, double z, double x)>;
    using Sigma = std::function<double(double x)>;

    /// General coefficient with optional partial derivatives.
    JumpCoefficient(Fn c, Fn dc_dx, Fn dc_dz, Envelope envelope);

    /// Factorized coefficient c(s,z,x) = sigma(x) * z with bounds
    /// sigma_lo <= sigma <= sigma_hi; the envelope is sigma_hi * z.
    static JumpCoefficient factorized(Sigma sigma, Sigma dsigma,
                                      double sigma_lo, double sigma_hi,
                                      std::string name = "factorized");

    /// Named presets: "sigma-tanh" (sigma = 2 + tanh x), "identity"
    /// (sigma = 1, i.e. additive c = z), "zero". Unknown names are rejected.
    static JumpCoefficient preset(std::string_view name);

    double c(double s, double z, double x) const { return c_(s, z, x); }
    bool has_derivatives() const { return static_cast<bool>(dc_dx_); }
    double dc_dx(double s, double z, double x) const;
    double dc_dz(double s, double z, double x) const;

    const Envelope& envelope() const { return envelope_; }
    bool factorized_form() const { return factorized_; }
    double sigma(double x) const;
    double sigma_lo() const { return sigma_lo_; }
    double sigma_hi() const { return sigma_hi_; }
    const std::string& name() const { return name_; }

private:
    JumpCoefficient() = default;
    Fn c_, dc_dx_, dc_dz_;
    Envelope envelope_;
    bool factorized_ = false;
    Sigma sigma_, dsigma_;
    double sigma_lo_ = 0.0, sigma_hi_ = 0.0;
    std::string name_ = "custom";
};

/// Small-jump drift: integral of c(s,z,x) mu(dz) over (0,eps].
double drift_b_eps(const JumpCoefficient& coef, const measures::LevyMeasureModel& model,
                   double s, double x, double eps);

/// Small-jump variance rate: integral of c(s,z,x)^2 mu(dz) over (0,eps].
double diffusion_a_eps(const JumpCoefficient& coef, const measures::LevyMeasureModel& model,
                       double s, double x, double eps);

/// Test function with analytic derivatives up to order three and declared
/// sup-norm bounds (norm_l = bound on sup_x sum_{|beta|<=l} |phi^(beta)(x)|).
struct TestFunction {
    std::string name;
    std::function<double(double)> phi, d1, d2, d3;
    double norm_1inf = 0.0;
    double norm_3inf = 0.0;
};

/// The fixed bank used by weak-error and generator experiments:
/// sin, cos, exp(-x^2/2), 1/(1+x^2), tanh.
const std::vector<TestFunction>& test_bank();

/// Look up a bank member by name; throws lookup_error for unknown names.
const TestFunction& test_function(std::string_view name);

/// Advisory spot-check of the coefficient hypotheses on a grid of
/// (s, z, x) points given in the nu coordinate (z >= 1): envelope bound
/// |c~| <= cbar, and ellipticity |d_z c~|^2 >= c_lower, |c~|^2 >= c_lower
/// when a lower envelope is supplied.
struct HypothesisCheck {
    std::string hypothesis;
    bool pass = true;
    double worst_margin = 0.0;  // most negative (bound - |value|) style margin
    std::array<double, 3> worst_point{0.0, 0.0, 0.0};
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass() const;
};

HypothesisReport hypothesis_spot_check(
    const JumpCoefficient& coef,
    const std::vector<std::array<double, 3>>& grid_szx,
    const std::function<double(double)>& c_lower = nullptr);

} // namespace jumpgauss::coeffs
