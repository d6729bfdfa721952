#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jumpgauss/coeffs.hpp"
#include "jumpgauss/measures.hpp"

namespace jumpgauss::schemes {

enum class SchemeKind { truncation, gaussian, reference };

const char* scheme_name(SchemeKind k);

struct SchemeConfig {
    double x0 = 0.0;
    double t_final = 1.0;
    double eps = 0.1;                // truncation threshold in (0,1]
    int euler_steps_per_unit = 32;
    SchemeKind kind = SchemeKind::gaussian;
    double eps_ref = 0.0;            // reference threshold, 0 < eps_ref <= eps
    std::uint64_t seed = 0;
    std::uint64_t experiment = 0;    // stream namespace, decorrelates runs
    std::int64_t paths = 1;

    void validate() const;
};

/// One jump event in the nu coordinate (mark >= 1; small marks in the mu
/// coordinate are large marks here).
struct JumpEvent {
    double time = 0.0;
    double mark = 0.0;
    std::int32_t band = 0;
};

/// All jumps on [0, t] with mu-mark above eps_floor, i.e. nu-mark below
/// 1/eps_floor, sampled band by band and merged in time order. The draw is a
/// pure function of (seed, experiment, path).
std::vector<JumpEvent> sample_jump_events(const measures::LevyMeasureModel& model,
                                          double eps_floor, double t,
                                          std::uint64_t seed, std::uint64_t experiment,
                                          std::uint64_t path);

struct SchemeId {
    SchemeKind kind = SchemeKind::gaussian;
    double eps = 0.0;
};

/// Terminal values of several schemes driven by one shared realization of
/// the jumps above eps_ref (and shared per-segment unit normals). Row-major:
/// terminals[path * schemes.size() + column].
struct CoupledResult {
    std::vector<SchemeId> schemes;
    std::vector<double> terminals;
    std::vector<std::uint64_t> digests;      // per scheme, equal by construction
    std::vector<std::int64_t> shared_jumps;  // per scheme, count above max eps
    double eps_ref = 0.0;
    std::int64_t paths = 0;

    std::size_t column(SchemeKind kind, double eps) const;
    std::vector<double> terminals_for(SchemeKind kind, double eps) const;
};

/// Plain truncation: keep jumps with mu-mark z > eps, state constant between
/// events. Single path; the path index selects the random streams.
double simulate_truncation(const SchemeConfig& config, const coeffs::JumpCoefficient& coef,
                           const measures::LevyMeasureModel& model, std::uint64_t path);

/// Gaussian substitution: big jumps plus small-jump drift b_eps and a
/// Gaussian increment of variance a_eps * dt on each Euler segment.
double simulate_gaussian(const SchemeConfig& config, const coeffs::JumpCoefficient& coef,
                         const measures::LevyMeasureModel& model, std::uint64_t path);

/// Reference surrogate: the Gaussian scheme run at eps_ref (requires
/// eps_ref <= eps/8 so the reference bias is negligible).
double simulate_reference(const SchemeConfig& config, const coeffs::JumpCoefficient& coef,
                          const measures::LevyMeasureModel& model, std::uint64_t path);

/// Common-realization run of {gaussian, truncation} at every eps in eps_list
/// (sorted descending) plus the reference at eps_ref. All schemes see the
/// same jumps above their own threshold and share per-segment unit normals.
CoupledResult simulate_coupled(std::span<const double> eps_list, const SchemeConfig& config,
                               const coeffs::JumpCoefficient& coef,
                               const measures::LevyMeasureModel& model, int threads = 1);

} // namespace jumpgauss::schemes
