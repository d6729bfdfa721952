#include "jumpgauss/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "jumpgauss/rng.hpp"
#include "jumpgauss/sampling.hpp"

namespace jumpgauss::schemes {

namespace {

constexpr double kBlowupThreshold = 1e12;

using sampling::Purpose;
using sampling::RngStream;
using sampling::StreamLabel;

struct DriftDiffusion {
    // Closed-form constants for the factorized power-law case; otherwise the
    // generic quadrature path is taken per segment.
    bool closed_form = false;
    double cb = 0.0;  // eps^{1-b}/(1-b)
    double ca = 0.0;  // eps^{2-b}/(2-b)
    double eps = 0.0;

    static DriftDiffusion make(double eps, const coeffs::JumpCoefficient& coef,
                               const measures::LevyMeasureModel& model) {
        DriftDiffusion dd;
        dd.eps = eps;
        if (coef.factorized_form() && model.family() == measures::Family::power_law) {
            const double b = model.exponent();
            dd.closed_form = true;
            dd.cb = std::pow(eps, 1.0 - b) / (1.0 - b);
            dd.ca = std::pow(eps, 2.0 - b) / (2.0 - b);
        }
        return dd;
    }
};

struct SegmentPlan {
    std::vector<double> times;            // sorted, times[0] = 0, back() = t
    std::vector<std::int32_t> jump_from;  // per grid time, first event index at it
};

// Grid = {0} u uniform Euler grid u event times u {t}.
SegmentPlan build_grid(const std::vector<JumpEvent>& events, double t, int steps_per_unit) {
    SegmentPlan plan;
    auto& g = plan.times;
    g.push_back(0.0);
    const double dt = 1.0 / steps_per_unit;
    for (std::int64_t j = 1;; ++j) {
        const double s = j * dt;
        if (s >= t) break;
        g.push_back(s);
    }
    g.push_back(t);
    for (const auto& e : events) g.push_back(e.time);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());

    plan.jump_from.assign(g.size(), -1);
    std::size_t ei = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (ei < events.size() && events[ei].time == g[i])
            plan.jump_from[i] = static_cast<std::int32_t>(ei);
        while (ei < events.size() && events[ei].time == g[i]) ++ei;
    }
    return plan;
}

struct PathDigest {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    std::int64_t count = 0;
    void add(const JumpEvent& e) {
        hash = sampling::fnv1a64(&e.time, sizeof(double), hash);
        hash = sampling::fnv1a64(&e.mark, sizeof(double), hash);
        ++count;
    }
};

// Advance one path of one scheme along a prepared grid. `normals` supplies
// one unit normal per segment (shared across coupled schemes); when null,
// the scheme draws its own from `gauss`. `shared_cap` bounds the nu-marks
// counted into the digest (jumps every coupled scheme must consume).
double run_path(SchemeKind kind, double nu_cap, const DriftDiffusion& dd,
                const std::vector<JumpEvent>& events, const SegmentPlan& plan,
                const std::vector<double>* normals, RngStream* gauss,
                const SchemeConfig& config, const coeffs::JumpCoefficient& coef,
                const measures::LevyMeasureModel& model, std::uint64_t path,
                double shared_cap = 0.0, PathDigest* digest = nullptr) {
    double x = config.x0;
    const bool diffusive = kind != SchemeKind::truncation;
    std::int64_t applied = 0;

    for (std::size_t i = 0; i + 1 < plan.times.size(); ++i) {
        const double s = plan.times[i];
        const double next = plan.times[i + 1];
        const double delta = next - s;
        if (diffusive && delta > 0.0) {
            double b, a;
            if (dd.closed_form) {
                const double sig = coef.sigma(x);
                b = sig * dd.cb;
                a = sig * sig * dd.ca;
            } else {
                b = coeffs::drift_b_eps(coef, model, s, x, dd.eps);
                a = coeffs::diffusion_a_eps(coef, model, s, x, dd.eps);
            }
            const double n = normals ? (*normals)[i] : sampling::gaussian_increment(1.0, *gauss);
            x += b * delta + std::sqrt(a * delta) * n;
        }
        // Jumps sit at grid points; apply them on the left limit.
        std::int32_t ei = plan.jump_from[i + 1];
        if (ei >= 0) {
            for (std::size_t j = ei; j < events.size() && events[j].time == next; ++j) {
                const JumpEvent& e = events[j];
                if (digest && e.mark < shared_cap) digest->add(e);
                if (e.mark < nu_cap) {
                    x += coef.c(e.time, 1.0 / e.mark, x);
                    ++applied;
                }
            }
        }
        if (!std::isfinite(x) || std::fabs(x) > kBlowupThreshold)
            throw blowup_error("path state exceeded the finite range", path, next, applied);
    }
    return x;
}

} // namespace

const char* scheme_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::truncation: return "truncation";
        case SchemeKind::gaussian: return "gaussian";
        case SchemeKind::reference: return "reference";
    }
    return "?";
}

void SchemeConfig::validate() const {
    if (!(t_final > 0.0)) throw std::domain_error("t_final must be > 0");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("eps must be in (0,1]");
    if (!(eps_ref > 0.0 && eps_ref <= eps))
        throw std::domain_error("eps_ref must satisfy 0 < eps_ref <= eps");
    if (euler_steps_per_unit < 1) throw std::domain_error("euler_steps_per_unit must be >= 1");
    if (paths < 1) throw std::domain_error("path count must be >= 1");
}

std::vector<JumpEvent> sample_jump_events(const measures::LevyMeasureModel& model,
                                          double eps_floor, double t,
                                          std::uint64_t seed, std::uint64_t experiment,
                                          std::uint64_t path) {
    if (!(eps_floor > 0.0 && eps_floor <= 1.0))
        throw std::domain_error("eps_floor must be in (0,1]");
    const double nu_cap = 1.0 / eps_floor;
    const int last_band = static_cast<int>(std::ceil(nu_cap)) - 1;

    std::vector<JumpEvent> events;
    for (int k = 1; k <= last_band; ++k) {
        RngStream count(seed, {experiment, path, Purpose::jump_count, static_cast<std::uint64_t>(k)});
        RngStream time(seed, {experiment, path, Purpose::jump_time, static_cast<std::uint64_t>(k)});
        RngStream mark(seed, {experiment, path, Purpose::jump_mark, static_cast<std::uint64_t>(k)});
        const double mk = model.band_mass(k);
        const std::int64_t n = sampling::sample_poisson(mk * t, count);
        for (std::int64_t i = 0; i < n; ++i) {
            JumpEvent e;
            e.time = t * time.next_uniform_pos();
            e.band = k;
            events.push_back(e);
        }
        for (std::int64_t i = 0; i < n; ++i) {
            const std::size_t at = events.size() - n + i;
            events[at].mark = sampling::sample_band_size(model, k, mark);
        }
    }
    // Thin the boundary band: only nu-marks below 1/eps_floor are jumps
    // with mu-mark above the floor.
    events.erase(std::remove_if(events.begin(), events.end(),
                                [nu_cap](const JumpEvent& e) { return e.mark >= nu_cap; }),
                 events.end());
    std::sort(events.begin(), events.end(), [](const JumpEvent& a, const JumpEvent& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.band != b.band) return a.band < b.band;
        return a.mark < b.mark;
    });
    return events;
}

double simulate_truncation(const SchemeConfig& config, const coeffs::JumpCoefficient& coef,
                           const measures::LevyMeasureModel& model, std::uint64_t path) {
    config.validate();
    auto events = sample_jump_events(model, config.eps, config.t_final,
                                     config.seed, config.experiment, path);
    // No drift and no diffusion: only event times matter.
    SegmentPlan plan;
    plan.times.push_back(0.0);
    for (const auto& e : events) plan.times.push_back(e.time);
    plan.times.push_back(config.t_final);
    plan.times.erase(std::unique(plan.times.begin(), plan.times.end()), plan.times.end());
    plan.jump_from.assign(plan.times.size(), -1);
    std::size_t ei = 0;
    for (std::size_t i = 0; i < plan.times.size(); ++i) {
        if (ei < events.size() && events[ei].time == plan.times[i])
            plan.jump_from[i] = static_cast<std::int32_t>(ei);
        while (ei < events.size() && events[ei].time == plan.times[i]) ++ei;
    }
    const auto dd = DriftDiffusion::make(config.eps, coef, model);
    return run_path(SchemeKind::truncation, 1.0 / config.eps, dd, events, plan,
                    nullptr, nullptr, config, coef, model, path);
}

double simulate_gaussian(const SchemeConfig& config, const coeffs::JumpCoefficient& coef,
                         const measures::LevyMeasureModel& model, std::uint64_t path) {
    config.validate();
    auto events = sample_jump_events(model, config.eps, config.t_final,
                                     config.seed, config.experiment, path);
    const auto plan = build_grid(events, config.t_final, config.euler_steps_per_unit);
    RngStream gauss(config.seed, {config.experiment, path, Purpose::euler_gauss, 0});
    const auto dd = DriftDiffusion::make(config.eps, coef, model);
    return run_path(SchemeKind::gaussian, 1.0 / config.eps, dd, events, plan,
                    nullptr, &gauss, config, coef, model, path);
}

double simulate_reference(const SchemeConfig& config, const coeffs::JumpCoefficient& coef,
                          const measures::LevyMeasureModel& model, std::uint64_t path) {
    config.validate();
    if (!(config.eps_ref <= config.eps / 8.0))
        throw std::domain_error("reference requires eps_ref <= eps/8");
    SchemeConfig ref = config;
    ref.eps = config.eps_ref;
    return simulate_gaussian(ref, coef, model, path);
}

std::size_t CoupledResult::column(SchemeKind kind, double eps) const {
    for (std::size_t j = 0; j < schemes.size(); ++j) {
        if (schemes[j].kind != kind) continue;
        if (kind == SchemeKind::reference || schemes[j].eps == eps) return j;
    }
    throw lookup_error(std::string("scheme not present in coupled result: ") +
                       scheme_name(kind) + " eps=" + std::to_string(eps));
}

std::vector<double> CoupledResult::terminals_for(SchemeKind kind, double eps) const {
    const std::size_t j = column(kind, eps);
    std::vector<double> out(paths);
    const std::size_t ncol = schemes.size();
    for (std::int64_t p = 0; p < paths; ++p) out[p] = terminals[p * ncol + j];
    return out;
}

CoupledResult simulate_coupled(std::span<const double> eps_list, const SchemeConfig& config,
                               const coeffs::JumpCoefficient& coef,
                               const measures::LevyMeasureModel& model, int threads) {
    if (eps_list.empty()) throw std::domain_error("eps_list must not be empty");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw std::domain_error("eps_list must be sorted strictly descending");
    SchemeConfig cfg = config;
    cfg.eps = eps_list.front();
    cfg.validate();
    const double eps_min = eps_list.back();
    if (!(cfg.eps_ref > 0.0 && cfg.eps_ref < eps_min))
        throw std::domain_error("eps_ref must lie below the smallest eps");

    CoupledResult result;
    result.eps_ref = cfg.eps_ref;
    result.paths = cfg.paths;
    for (const double e : eps_list) {
        result.schemes.push_back({SchemeKind::gaussian, e});
        result.schemes.push_back({SchemeKind::truncation, e});
    }
    result.schemes.push_back({SchemeKind::reference, cfg.eps_ref});
    const std::size_t ncol = result.schemes.size();
    result.terminals.assign(static_cast<std::size_t>(cfg.paths) * ncol, 0.0);

    const double shared_cap = 1.0 / eps_list.front();  // jumps every scheme keeps
    std::vector<DriftDiffusion> dds;
    dds.reserve(ncol);
    for (const auto& id : result.schemes) {
        const double e = id.kind == SchemeKind::reference ? cfg.eps_ref : id.eps;
        dds.push_back(DriftDiffusion::make(e, coef, model));
    }

    std::vector<std::uint64_t> path_digest(cfg.paths, 0);
    std::vector<std::int64_t> path_jumps(cfg.paths, 0);

    const int nthreads = std::max(1, threads);
    std::atomic<std::int64_t> cursor{0};
    std::vector<std::exception_ptr> errors(nthreads);

    auto worker = [&](int w) {
        try {
            for (;;) {
                const std::int64_t p = cursor.fetch_add(1);
                if (p >= cfg.paths) break;
                const auto path = static_cast<std::uint64_t>(p);
                auto events = sample_jump_events(model, cfg.eps_ref, cfg.t_final,
                                                 cfg.seed, cfg.experiment, path);
                const auto plan = build_grid(events, cfg.t_final, cfg.euler_steps_per_unit);
                RngStream gauss(cfg.seed, {cfg.experiment, path, Purpose::euler_gauss, 0});
                std::vector<double> normals(plan.times.size() - 1);
                for (auto& n : normals) n = sampling::gaussian_increment(1.0, gauss);

                bool first_col = true;
                PathDigest ref_digest;
                for (std::size_t j = 0; j < ncol; ++j) {
                    const auto& id = result.schemes[j];
                    const double e = id.kind == SchemeKind::reference ? cfg.eps_ref : id.eps;
                    PathDigest dg;
                    const double terminal =
                        run_path(id.kind, 1.0 / e, dds[j], events, plan, &normals, nullptr,
                                 cfg, coef, model, path, shared_cap, &dg);
                    result.terminals[path * ncol + j] = terminal;
                    if (first_col) {
                        ref_digest = dg;
                        first_col = false;
                    } else if (dg.hash != ref_digest.hash || dg.count != ref_digest.count) {
                        throw coupling_error("shared-jump digest mismatch on path " +
                                             std::to_string(p));
                    }
                }
                path_digest[p] = ref_digest.hash;
                path_jumps[p] = ref_digest.count;
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    // Fold per-path digests in fixed path order; schemes agree per path, so
    // one combined value describes them all.
    std::uint64_t combined = 0xcbf29ce484222325ull;
    std::int64_t total_jumps = 0;
    for (std::int64_t p = 0; p < cfg.paths; ++p) {
        combined = sampling::fnv1a64(&path_digest[p], sizeof(std::uint64_t), combined);
        total_jumps += path_jumps[p];
    }
    result.digests.assign(ncol, combined);
    result.shared_jumps.assign(ncol, total_jumps);
    return result;
}

} // namespace jumpgauss::schemes
