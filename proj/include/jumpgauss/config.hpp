#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "jumpgauss/coeffs.hpp"
#include "jumpgauss/measures.hpp"

namespace jumpgauss::cli {

/// Flat sectioned key=value experiment configuration. Every module
/// precondition is validated up front; the canonical echo (defaults filled
/// in, keys sorted) is hashed into every artifact's manifest record.
struct ExperimentConfig {
    // [measure]
    std::string measure_family = "power-law";
    double b = 0.5;
    double quad_abs_tol = 1e-12;
    double quad_rel_tol = 1e-10;
    int quad_max_subdiv = 4000;
    double eps_star = 0.5;
    double alpha1 = 1.0;

    // [coefficient]
    std::string coefficient_preset = "sigma-tanh";

    // [scheme]
    double x0 = 0.0;
    double t_final = 1.0;
    std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
    double eps_ref = 0.0;  // 0 -> min(eps_list)/eps_ref_divisor
    double eps_ref_divisor = 16.0;
    int euler_steps_per_unit = 32;
    std::int64_t paths = 200000;

    // [stats]
    std::vector<std::string> bank{"sin", "cos", "gauss", "runge", "tanh"};
    std::size_t kde_grid = 2048;
    std::string bandwidth = "silverman";
    std::vector<int> split_bands{1, 2, 3, 4, 5};
    std::int64_t split_draws = 1000000;
    int split_seeds = 10;

    // [run]
    std::uint64_t seed = 12345;
    std::string out = "out";
    int threads = 0;  // 0 = machine parallelism

    /// Keys overridden on the command line, key -> rendered value.
    std::map<std::string, std::string> overrides;

    static ExperimentConfig from_file(const std::filesystem::path& path);
    static ExperimentConfig from_text(const std::string& text);

    void validate() const;

    double resolved_eps_ref() const;
    int resolved_threads() const;

    measures::LevyMeasureModel make_measure() const;
    coeffs::JumpCoefficient make_coefficient() const;
    std::vector<coeffs::TestFunction> make_bank() const;

    /// Canonical INI echo: all keys, fixed order, defaults filled in.
    std::string canonical_text() const;
    std::uint64_t config_hash() const;
};

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

} // namespace jumpgauss::cli
