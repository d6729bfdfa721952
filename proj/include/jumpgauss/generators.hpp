#pragma once

#include <span>
#include <string>
#include <vector>

#include "jumpgauss/coeffs.hpp"
#include "jumpgauss/measures.hpp"

namespace jumpgauss::generators {

/// Full generator of the jump dynamics applied to phi at (s, x):
/// integral of phi(x + c(s,z,x)) - phi(x) against mu over (0,1].
/// The singular region below the quadrature floor is handled by the
/// second-order Taylor expansion with closed-form drift/variance moments.
double apply_L(const coeffs::TestFunction& phi, double s, double x,
               const coeffs::JumpCoefficient& coef,
               const measures::LevyMeasureModel& model);

/// Approximate generator: big-jump integral over (eps,1] plus
/// phi'(x) b_eps(s,x) + 1/2 phi''(x) a_eps(s,x).
double apply_L_eps(const coeffs::TestFunction& phi, double s, double x, double eps,
                   const coeffs::JumpCoefficient& coef,
                   const measures::LevyMeasureModel& model);

struct GeneratorPoint {
    double eps = 0.0;
    double s = 0.0;
    double x = 0.0;
    double l_full = 0.0;
    double l_eps = 0.0;
    double gap = 0.0;
    double bound = 0.0;       // (1/6) ||phi||_3 eta_3(eps)
    bool pass = false;
    double trunc_gap = 0.0;   // gap of the truncation generator (big jumps only)
    double trunc_bound = 0.0; // ||phi||_1 eta_1(eps)
    bool trunc_pass = false;
};

struct GeneratorReport {
    std::string phi;
    double slack = 0.0;
    std::vector<GeneratorPoint> points;
    bool all_pass() const;
    bool all_trunc_pass() const;
};

/// Taylor-remainder check over eps_list x grid of (s,x) points: the gap
/// between the full and approximate generators must stay within
/// (1/6) ||phi||_3 eta_3(eps) plus the quadrature slack; the truncation
/// generator's gap is reported against ||phi||_1 eta_1(eps).
GeneratorReport remainder_check(const coeffs::TestFunction& phi,
                                std::span<const double> eps_list,
                                std::span<const std::pair<double, double>> grid_sx,
                                const coeffs::JumpCoefficient& coef,
                                const measures::LevyMeasureModel& model,
                                double slack = 1e-6);

} // namespace jumpgauss::generators
