#include "jumpgauss/coeffs.hpp"

#include <cmath>

namespace jumpgauss::coeffs {

JumpCoefficient::JumpCoefficient(Fn c, Fn dc_dx, Fn dc_dz, Envelope envelope)
    : c_(std::move(c)), dc_dx_(std::move(dc_dx)), dc_dz_(std::move(dc_dz)),
      envelope_(std::move(envelope)) {}

JumpCoefficient JumpCoefficient::factorized(Sigma sigma, Sigma dsigma,
                                            double sigma_lo, double sigma_hi,
                                            std::string name) {
    JumpCoefficient jc;
    jc.factorized_ = true;
    jc.sigma_ = sigma;
    jc.dsigma_ = std::move(dsigma);
    jc.sigma_lo_ = sigma_lo;
    jc.sigma_hi_ = sigma_hi;
    jc.name_ = std::move(name);
    jc.envelope_ = Envelope::linear(std::max(std::fabs(sigma_lo), std::fabs(sigma_hi)));
    jc.c_ = [sigma](double, double z, double x) { return sigma(x) * z; };
    jc.dc_dx_ = [d = jc.dsigma_](double, double z, double x) { return d(x) * z; };
    jc.dc_dz_ = [sigma](double, double, double x) { return sigma(x); };
    return jc;
}

JumpCoefficient JumpCoefficient::preset(std::string_view name) {
    if (name == "sigma-tanh") {
        auto s = [](double x) { return 2.0 + std::tanh(x); };
        auto ds = [](double x) { const double t = std::tanh(x); return 1.0 - t * t; };
        return factorized(s, ds, 1.0, 3.0, "sigma-tanh");
    }
    if (name == "identity") {
        return factorized([](double) { return 1.0; }, [](double) { return 0.0; },
                          1.0, 1.0, "identity");
    }
    if (name == "zero") {
        return factorized([](double) { return 0.0; }, [](double) { return 0.0; },
                          0.0, 0.0, "zero");
    }
    throw lookup_error("unsupported coefficient preset: " + std::string(name));
}

double JumpCoefficient::dc_dx(double s, double z, double x) const {
    if (!dc_dx_) throw error("coefficient has no d/dx derivative");
    return dc_dx_(s, z, x);
}

double JumpCoefficient::dc_dz(double s, double z, double x) const {
    if (!dc_dz_) throw error("coefficient has no d/dz derivative");
    return dc_dz_(s, z, x);
}

double JumpCoefficient::sigma(double x) const {
    if (!factorized_) throw error("sigma() requires a factorized coefficient");
    return sigma_(x);
}

namespace {

// Contribution of (0, floor] to the integral of c^p against mu, with
// c extrapolated below the floor by the envelope's declared power, scaled
// to match the coefficient at the floor. Exact for factorized coefficients
// over power-law measures.
double sub_floor_moment(const JumpCoefficient& coef, const measures::LevyMeasureModel& model,
                        double s, double x, int p, double upto) {
    const double gamma = coef.envelope().power;
    const double expo = p * gamma - model.exponent();
    const double c_at = coef.c(s, upto, x);
    if (c_at == 0.0) return 0.0;
    if (expo <= 0.0) throw divergence_error("small-jump moment diverges near 0");
    const double scale = c_at / std::pow(upto, gamma);
    return std::pow(scale, p) * std::pow(upto, expo) / expo;
}

} // namespace

double drift_b_eps(const JumpCoefficient& coef, const measures::LevyMeasureModel& model,
                   double s, double x, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("drift_b_eps: eps in (0,1]");
    if (coef.factorized_form() && model.family() == measures::Family::power_law) {
        const double b = model.exponent();
        return coef.sigma(x) * std::pow(eps, 1.0 - b) / (1.0 - b);
    }
    const double floor = std::min(eps, measures::kSingularFloor);
    double value = sub_floor_moment(coef, model, s, x, 1, floor);
    if (eps > floor)
        value += model.integrate_mu([&](double z) { return coef.c(s, z, x); }, floor, eps);
    return value;
}

double diffusion_a_eps(const JumpCoefficient& coef, const measures::LevyMeasureModel& model,
                       double s, double x, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("diffusion_a_eps: eps in (0,1]");
    if (coef.factorized_form() && model.family() == measures::Family::power_law) {
        const double b = model.exponent();
        const double sig = coef.sigma(x);
        return sig * sig * std::pow(eps, 2.0 - b) / (2.0 - b);
    }
    const double floor = std::min(eps, measures::kSingularFloor);
    double value = sub_floor_moment(coef, model, s, x, 2, floor);
    if (eps > floor)
        value += model.integrate_mu(
            [&](double z) { const double v = coef.c(s, z, x); return v * v; }, floor, eps);
    return value;
}

namespace {

TestFunction make_tf(std::string name, std::function<double(double)> f,
                     std::function<double(double)> d1, std::function<double(double)> d2,
                     std::function<double(double)> d3, double n1, double n3) {
    TestFunction tf;
    tf.name = std::move(name);
    tf.phi = std::move(f);
    tf.d1 = std::move(d1);
    tf.d2 = std::move(d2);
    tf.d3 = std::move(d3);
    tf.norm_1inf = n1;
    tf.norm_3inf = n3;
    return tf;
}

std::vector<TestFunction> build_bank() {
    std::vector<TestFunction> bank;
    bank.push_back(make_tf(
        "sin", [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
        [](double x) { return -std::sin(x); }, [](double x) { return -std::cos(x); },
        1.5, 3.0));
    bank.push_back(make_tf(
        "cos", [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); },
        [](double x) { return -std::cos(x); }, [](double x) { return std::sin(x); },
        1.5, 3.0));
    auto g = [](double x) { return std::exp(-0.5 * x * x); };
    bank.push_back(make_tf(
        "gauss", g, [g](double x) { return -x * g(x); },
        [g](double x) { return (x * x - 1.0) * g(x); },
        [g](double x) { return x * (3.0 - x * x) * g(x); }, 2.0, 3.5));
    auto r = [](double x) { return 1.0 / (1.0 + x * x); };
    bank.push_back(make_tf(
        "runge", r, [r](double x) { const double q = r(x); return -2.0 * x * q * q; },
        [r](double x) {
            const double q = r(x);
            return (6.0 * x * x - 2.0) * q * q * q;
        },
        [r](double x) {
            const double q = r(x);
            return 24.0 * x * (1.0 - x * x) * q * q * q * q;
        },
        2.0, 7.5));
    bank.push_back(make_tf(
        "tanh", [](double x) { return std::tanh(x); },
        [](double x) { const double t = std::tanh(x); return 1.0 - t * t; },
        [](double x) {
            const double t = std::tanh(x);
            return -2.0 * t * (1.0 - t * t);
        },
        [](double x) {
            const double t = std::tanh(x);
            return (6.0 * t * t - 2.0) * (1.0 - t * t);
        },
        2.0, 4.0));
    return bank;
}

} // namespace

const std::vector<TestFunction>& test_bank() {
    static const std::vector<TestFunction> bank = build_bank();
    return bank;
}

const TestFunction& test_function(std::string_view name) {
    for (const auto& tf : test_bank())
        if (tf.name == name) return tf;
    throw lookup_error("unknown test function: " + std::string(name));
}

bool HypothesisReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

HypothesisReport hypothesis_spot_check(
    const JumpCoefficient& coef,
    const std::vector<std::array<double, 3>>& grid_szx,
    const std::function<double(double)>& c_lower) {
    if (grid_szx.empty()) throw std::domain_error("hypothesis_spot_check: empty grid");

    HypothesisCheck envelope{"envelope", true, 0.0, {}};
    HypothesisCheck ellip_c{"ellipticity-c", true, 0.0, {}};
    HypothesisCheck ellip_dz{"ellipticity-dz", true, 0.0, {}};
    bool first = true;

    for (const auto& p : grid_szx) {
        const double s = p[0], znu = p[1], x = p[2];
        const double zmu = 1.0 / znu;  // grid points are given in the nu coordinate
        const double cval = coef.c(s, zmu, x);

        const double margin_env = coef.envelope()(zmu) - std::fabs(cval);
        if (first || margin_env < envelope.worst_margin) {
            envelope.worst_margin = margin_env;
            envelope.worst_point = p;
        }
        if (margin_env < -1e-12) envelope.pass = false;

        if (c_lower) {
            const double lower = c_lower(znu);
            const double m_c = cval * cval - lower;
            if (first || m_c < ellip_c.worst_margin) {
                ellip_c.worst_margin = m_c;
                ellip_c.worst_point = p;
            }
            if (m_c < -1e-12) ellip_c.pass = false;

            if (coef.has_derivatives()) {
                // c~(s,z,x) = c(s,1/z,x), so d/dz c~ = -z^{-2} (d/dz c)(s,1/z,x).
                const double dz = -coef.dc_dz(s, zmu, x) / (znu * znu);
                const double m_dz = dz * dz - lower;
                if (first || m_dz < ellip_dz.worst_margin) {
                    ellip_dz.worst_margin = m_dz;
                    ellip_dz.worst_point = p;
                }
                if (m_dz < -1e-12) ellip_dz.pass = false;
            }
        }
        first = false;
    }

    HypothesisReport report;
    report.checks.push_back(envelope);
    if (c_lower) {
        report.checks.push_back(ellip_c);
        if (coef.has_derivatives()) report.checks.push_back(ellip_dz);
    }
    return report;
}

} // namespace jumpgauss::coeffs
