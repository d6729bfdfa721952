#include "jumpgauss/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "jumpgauss/csvio.hpp"
#include "jumpgauss/generators.hpp"
#include "jumpgauss/rng.hpp"
#include "jumpgauss/sampling.hpp"
#include "jumpgauss/schemes.hpp"
#include "jumpgauss/stats.hpp"

namespace jumpgauss::cli {

namespace {

using nlohmann::json;

std::uint64_t experiment_id(const std::string& subcommand) {
    return sampling::fnv1a64(subcommand.data(), subcommand.size());
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::filesystem::path ensure_out_dir(const ExperimentConfig& cfg) {
    std::filesystem::path dir(cfg.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& sub,
                    const std::vector<Artifact>& artifacts, const json& extra) {
    const auto path = std::filesystem::path(cfg.out) / (sub + ".manifest.jsonl");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    for (const auto& a : artifacts) {
        json rec;
        rec["subcommand"] = sub;
        rec["artifact"] = a.name;
        rec["file"] = a.file.filename().string();
        rec["rows"] = a.rows;
        rec["content_hash"] = "fnv1a64:" + hex64(a.content_hash);
        rec["config_hash"] = "fnv1a64:" + hex64(cfg.config_hash());
        rec["seed"] = cfg.seed;
        rec["version"] = "0.1.0";
        rec["config"] = cfg.canonical_text();
        if (!cfg.overrides.empty()) rec["overrides"] = cfg.overrides;
        if (!extra.is_null()) rec.update(extra);
        out << rec.dump() << "\n";
    }
    out.flush();
    if (!out) throw io_error("write failure on: " + path.string());
}

schemes::SchemeConfig scheme_config(const ExperimentConfig& cfg, const std::string& sub) {
    schemes::SchemeConfig sc;
    sc.x0 = cfg.x0;
    sc.t_final = cfg.t_final;
    sc.eps = cfg.eps_list.front();
    sc.euler_steps_per_unit = cfg.euler_steps_per_unit;
    sc.eps_ref = cfg.resolved_eps_ref();
    sc.seed = cfg.seed;
    sc.experiment = experiment_id(sub);
    sc.paths = cfg.paths;
    return sc;
}

const char* kBool[2] = {"0", "1"};

} // namespace

std::vector<Artifact> run_eta(const ExperimentConfig& cfg) {
    const auto dir = ensure_out_dir(cfg);
    const auto model = cfg.make_measure();
    const auto coef = cfg.make_coefficient();
    const measures::Envelope unit = measures::Envelope::linear(1.0);

    CsvWriter csv(dir / "eta.csv");
    csv.header({"eps", "eta1", "eta3", "b_eps", "c_eps_sq"});
    for (const double eps : cfg.eps_list) {
        csv.row({format_number(eps),
                 format_number(model.eta_p(1.0, eps, coef.envelope())),
                 format_number(model.eta_p(3.0, eps, coef.envelope())),
                 format_number(model.eta_p(1.0, eps, unit)),
                 format_number(model.eta_p(2.0, eps, unit))});
    }
    csv.close();

    std::vector<Artifact> artifacts{{"eta", dir / "eta.csv", csv.body_hash(), csv.rows()}};
    write_manifest(cfg, "eta", artifacts, json());
    return artifacts;
}

std::vector<Artifact> run_gen_check(const ExperimentConfig& cfg) {
    const auto dir = ensure_out_dir(cfg);
    const auto model = cfg.make_measure();
    const auto coef = cfg.make_coefficient();
    const auto bank = cfg.make_bank();

    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 21; ++j)
            grid.emplace_back(cfg.t_final * i / 4.0, -5.0 + 10.0 * j / 20.0);

    CsvWriter csv(dir / "gen_check.csv");
    csv.header({"phi", "eps", "s", "x", "l_full", "l_eps", "gap", "bound", "pass",
                "trunc_gap", "trunc_bound", "trunc_pass"});
    for (const auto& phi : bank) {
        const auto report = generators::remainder_check(phi, cfg.eps_list, grid, coef, model);
        for (const auto& p : report.points) {
            csv.row({phi.name, format_number(p.eps), format_number(p.s), format_number(p.x),
                     format_number(p.l_full), format_number(p.l_eps), format_number(p.gap),
                     format_number(p.bound), kBool[p.pass], format_number(p.trunc_gap),
                     format_number(p.trunc_bound), kBool[p.trunc_pass]});
        }
    }
    csv.close();

    std::vector<Artifact> artifacts{{"gen-check", dir / "gen_check.csv", csv.body_hash(), csv.rows()}};
    write_manifest(cfg, "gen-check", artifacts, json());
    return artifacts;
}

namespace {

struct SplitRow {
    int band = 0;
    int seed_index = 0;
    stats::KsResult ks;
    double mdiff[4] = {0, 0, 0, 0};
    double mtol[4] = {0, 0, 0, 0};
    bool mpass[4] = {false, false, false, false};
};

SplitRow split_check_one(const ExperimentConfig& cfg, const measures::LevyMeasureModel& model,
                         const measures::Band& band, int seed_index, std::uint64_t exp) {
    using sampling::Purpose;
    SplitRow row;
    row.band = band.k;
    row.seed_index = seed_index;
    const auto n = static_cast<std::size_t>(cfg.split_draws);
    const auto path = static_cast<std::uint64_t>(seed_index);
    const auto sub = static_cast<std::uint64_t>(band.k);

    sampling::RngStream split_stream(cfg.seed, {exp, path, Purpose::split_draw, sub});
    sampling::RngStream direct_stream(cfg.seed, {exp, path, Purpose::band_size, sub});

    std::vector<double> comp(n), direct(n);
    for (std::size_t i = 0; i < n; ++i)
        comp[i] = sampling::sample_split(model, band, split_stream).composite;
    for (std::size_t i = 0; i < n; ++i)
        direct[i] = sampling::sample_band_size(model, band.k, direct_stream);

    row.ks = stats::ks_two_sample(comp, direct);

    // First four moments with combined standard errors.
    double sc[8] = {0}, sd[8] = {0};
    for (std::size_t i = 0; i < n; ++i) {
        double pc = 1.0, pd = 1.0;
        for (int m = 0; m < 8; ++m) {
            pc *= comp[i];
            pd *= direct[i];
            sc[m] += pc;
            sd[m] += pd;
        }
    }
    const double dn = static_cast<double>(n);
    for (int m = 1; m <= 4; ++m) {
        const double mc = sc[m - 1] / dn;
        const double md = sd[m - 1] / dn;
        const double vc = std::max(0.0, sc[2 * m - 1] / dn - mc * mc);
        const double vd = std::max(0.0, sd[2 * m - 1] / dn - md * md);
        row.mdiff[m - 1] = std::fabs(mc - md);
        row.mtol[m - 1] = 4.0 * std::sqrt(vc / dn + vd / dn);
        row.mpass[m - 1] = row.mdiff[m - 1] <= row.mtol[m - 1];
    }
    return row;
}

} // namespace

std::vector<Artifact> run_split_check(const ExperimentConfig& cfg) {
    const auto dir = ensure_out_dir(cfg);
    const auto model = cfg.make_measure();
    const std::uint64_t exp = experiment_id("split-check");
    const int max_band = *std::max_element(cfg.split_bands.begin(), cfg.split_bands.end());
    const measures::BandDecomposition decomp(model, max_band + 1, cfg.eps_star, cfg.alpha1);

    std::vector<std::pair<int, int>> jobs;
    for (int k : cfg.split_bands)
        for (int i = 0; i < cfg.split_seeds; ++i) jobs.emplace_back(k, i);

    std::vector<SplitRow> results(jobs.size());
    std::atomic<std::size_t> cursor{0};
    const int nthreads = cfg.resolved_threads();
    std::vector<std::exception_ptr> errors(nthreads);
    auto worker = [&](int w) {
        try {
            for (;;) {
                const std::size_t j = cursor.fetch_add(1);
                if (j >= jobs.size()) break;
                results[j] = split_check_one(cfg, model, decomp.band(jobs[j].first),
                                             jobs[j].second, exp);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (nthreads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    CsvWriter csv(dir / "split_check.csv");
    std::vector<std::string> head{"band", "seed", "ks_stat", "ks_critical", "ks_pass"};
    for (int m = 1; m <= 4; ++m) {
        head.push_back("moment" + std::to_string(m) + "_diff");
        head.push_back("moment" + std::to_string(m) + "_tol");
        head.push_back("moment" + std::to_string(m) + "_pass");
    }
    csv.header(head);
    for (const auto& r : results) {
        std::vector<std::string> cells{
            format_number(static_cast<std::int64_t>(r.band)),
            format_number(static_cast<std::int64_t>(r.seed_index)),
            format_number(r.ks.statistic), format_number(r.ks.critical_1pct),
            kBool[!r.ks.reject]};
        for (int m = 0; m < 4; ++m) {
            cells.push_back(format_number(r.mdiff[m]));
            cells.push_back(format_number(r.mtol[m]));
            cells.push_back(kBool[r.mpass[m]]);
        }
        csv.row(cells);
    }
    csv.close();

    std::vector<Artifact> artifacts{{"split-check", dir / "split_check.csv",
                                     csv.body_hash(), csv.rows()}};
    write_manifest(cfg, "split-check", artifacts, json());
    return artifacts;
}

namespace {

json coupled_extra(const schemes::CoupledResult& coupled) {
    json extra;
    extra["eps_ref"] = coupled.eps_ref;
    extra["shared_jump_digest"] = "fnv1a64:" + hex64(coupled.digests.front());
    extra["shared_jump_count"] = coupled.shared_jumps.front();
    return extra;
}

} // namespace

std::vector<Artifact> run_simulate(const ExperimentConfig& cfg) {
    const auto dir = ensure_out_dir(cfg);
    const auto model = cfg.make_measure();
    const auto coef = cfg.make_coefficient();
    const auto sc = scheme_config(cfg, "simulate");
    const auto coupled =
        schemes::simulate_coupled(cfg.eps_list, sc, coef, model, cfg.resolved_threads());

    CsvWriter csv(dir / "terminals.csv");
    csv.header({"path", "scheme", "eps", "terminal"});
    const std::size_t ncol = coupled.schemes.size();
    for (std::int64_t p = 0; p < coupled.paths; ++p) {
        for (std::size_t j = 0; j < ncol; ++j) {
            const auto& id = coupled.schemes[j];
            const double eps =
                id.kind == schemes::SchemeKind::reference ? coupled.eps_ref : id.eps;
            csv.row({format_number(p), schemes::scheme_name(id.kind), format_number(eps),
                     format_number(coupled.terminals[p * ncol + j])});
        }
    }
    csv.close();

    std::vector<Artifact> artifacts{{"terminals", dir / "terminals.csv",
                                     csv.body_hash(), csv.rows()}};
    write_manifest(cfg, "simulate", artifacts, coupled_extra(coupled));
    return artifacts;
}

std::vector<Artifact> run_weak_rate(const ExperimentConfig& cfg) {
    const auto dir = ensure_out_dir(cfg);
    const auto model = cfg.make_measure();
    const auto coef = cfg.make_coefficient();
    const auto bank = cfg.make_bank();
    const auto sc = scheme_config(cfg, "weak-rate");
    const auto coupled =
        schemes::simulate_coupled(cfg.eps_list, sc, coef, model, cfg.resolved_threads());
    const schemes::SchemeId ref{schemes::SchemeKind::reference, coupled.eps_ref};

    CsvWriter csv(dir / "weak_rate.csv");
    csv.header({"scheme", "phi", "eps", "estimate", "std_error", "n", "below_noise_floor"});

    const schemes::SchemeKind kinds[2] = {schemes::SchemeKind::gaussian,
                                          schemes::SchemeKind::truncation};
    // Per-(phi, eps) estimates. The bank-max series is a lower-bound proxy
    // for the smooth-distance rate; its max runs over estimates that are
    // individually distinguishable from zero, since a max over noise
    // survives its own noise-floor check by selection. Per-phi series are
    // fitted as well: a fixed test function carries no selection bias.
    std::vector<std::vector<stats::ErrorEstimate>> ests[2];
    for (int s = 0; s < 2; ++s) {
        ests[s].resize(bank.size());
        for (std::size_t f = 0; f < bank.size(); ++f) {
            for (const double eps : cfg.eps_list) {
                const auto est = stats::weak_error(bank[f], coupled, {kinds[s], eps}, ref);
                const bool below = std::fabs(est.estimate) < 2.0 * est.std_error;
                csv.row({schemes::scheme_name(kinds[s]), bank[f].name, format_number(eps),
                         format_number(est.estimate), format_number(est.std_error),
                         format_number(est.n), kBool[below]});
                ests[s][f].push_back(est);
            }
        }
    }
    csv.close();

    CsvWriter fit_csv(dir / "weak_rate_fit.csv");
    fit_csv.header({"scheme", "series", "slope", "intercept", "r2", "n_used"});
    auto emit_fit = [&](const char* scheme, const std::string& series,
                        std::span<const stats::RatePoint> pts) {
        try {
            const auto fit = stats::rate_fit(pts);
            fit_csv.row({scheme, series, format_number(fit.slope),
                         format_number(fit.intercept), format_number(fit.r2),
                         format_number(static_cast<std::int64_t>(fit.n_used))});
        } catch (const insufficient_data_error& e) {
            std::cerr << "[jumpgauss] weak-rate fit skipped for " << scheme << "/"
                      << series << ": " << e.what() << "\n";
        }
    };
    for (int s = 0; s < 2; ++s) {
        std::vector<stats::RatePoint> max_pts;
        for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
            stats::ErrorEstimate best;
            bool any = false;
            for (std::size_t f = 0; f < bank.size(); ++f) {
                const auto& est = ests[s][f][i];
                if (std::fabs(est.estimate) < 2.0 * est.std_error) continue;
                if (std::fabs(est.estimate) > std::fabs(best.estimate)) {
                    best = est;
                    any = true;
                }
            }
            if (any) max_pts.push_back({cfg.eps_list[i], std::fabs(best.estimate),
                                        best.std_error});
        }
        emit_fit(schemes::scheme_name(kinds[s]), "bank-max", max_pts);
        for (std::size_t f = 0; f < bank.size(); ++f) {
            std::vector<stats::RatePoint> pts;
            for (std::size_t i = 0; i < cfg.eps_list.size(); ++i)
                pts.push_back({cfg.eps_list[i], std::fabs(ests[s][f][i].estimate),
                               ests[s][f][i].std_error});
            emit_fit(schemes::scheme_name(kinds[s]), bank[f].name, pts);
        }
    }
    fit_csv.close();

    std::vector<Artifact> artifacts{
        {"weak-rate", dir / "weak_rate.csv", csv.body_hash(), csv.rows()},
        {"weak-rate-fit", dir / "weak_rate_fit.csv", fit_csv.body_hash(), fit_csv.rows()}};
    write_manifest(cfg, "weak-rate", artifacts, coupled_extra(coupled));
    return artifacts;
}

std::vector<Artifact> run_tv_rate(const ExperimentConfig& cfg) {
    const auto dir = ensure_out_dir(cfg);
    const auto model = cfg.make_measure();
    const auto coef = cfg.make_coefficient();
    const auto sc = scheme_config(cfg, "tv-rate");
    const auto coupled =
        schemes::simulate_coupled(cfg.eps_list, sc, coef, model, cfg.resolved_threads());

    stats::KdeOptions kopt;
    kopt.grid_size = cfg.kde_grid;
    const auto ref_samples =
        coupled.terminals_for(schemes::SchemeKind::reference, coupled.eps_ref);
    const auto ref_kde = stats::kde(ref_samples, kopt);

    CsvWriter csv(dir / "tv_rate.csv");
    csv.header({"scheme", "eps", "tv", "n_paths", "bandwidth"});
    const schemes::SchemeKind kinds[2] = {schemes::SchemeKind::gaussian,
                                          schemes::SchemeKind::truncation};
    std::vector<stats::RatePoint> fit_points[2];
    for (int s = 0; s < 2; ++s) {
        for (const double eps : cfg.eps_list) {
            const auto samples = coupled.terminals_for(kinds[s], eps);
            const auto density = stats::kde(samples, kopt);
            const double tv = stats::tv_from_kde(ref_kde, density);
            csv.row({schemes::scheme_name(kinds[s]), format_number(eps), format_number(tv),
                     format_number(coupled.paths), format_number(density.bandwidth)});
            fit_points[s].push_back({eps, tv, 0.0});
        }
    }
    csv.close();

    CsvWriter fit_csv(dir / "tv_rate_fit.csv");
    fit_csv.header({"scheme", "slope", "intercept", "r2", "n_used"});
    for (int s = 0; s < 2; ++s) {
        try {
            const auto fit = stats::rate_fit(fit_points[s]);
            fit_csv.row({schemes::scheme_name(kinds[s]), format_number(fit.slope),
                         format_number(fit.intercept), format_number(fit.r2),
                         format_number(static_cast<std::int64_t>(fit.n_used))});
        } catch (const insufficient_data_error& e) {
            std::cerr << "[jumpgauss] tv-rate fit skipped for "
                      << schemes::scheme_name(kinds[s]) << ": " << e.what() << "\n";
        }
    }
    fit_csv.close();

    std::vector<Artifact> artifacts{
        {"tv-rate", dir / "tv_rate.csv", csv.body_hash(), csv.rows()},
        {"tv-rate-fit", dir / "tv_rate_fit.csv", fit_csv.body_hash(), fit_csv.rows()}};
    write_manifest(cfg, "tv-rate", artifacts, coupled_extra(coupled));
    return artifacts;
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> subs{"eta",      "gen-check", "split-check",
                                               "simulate", "weak-rate", "tv-rate"};
    return subs;
}

std::vector<Artifact> run(const std::string& subcommand, const ExperimentConfig& cfg) {
    cfg.validate();
    if (subcommand == "eta") return run_eta(cfg);
    if (subcommand == "gen-check") return run_gen_check(cfg);
    if (subcommand == "split-check") return run_split_check(cfg);
    if (subcommand == "simulate") return run_simulate(cfg);
    if (subcommand == "weak-rate") return run_weak_rate(cfg);
    if (subcommand == "tv-rate") return run_tv_rate(cfg);
    throw config_error("unknown subcommand: " + subcommand);
}

} // namespace jumpgauss::cli
