#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jumpgauss/config.hpp"

namespace jumpgauss::cli {

struct Artifact {
    std::string name;
    std::filesystem::path file;
    std::uint64_t content_hash = 0;
    std::int64_t rows = 0;
};

std::vector<Artifact> run_eta(const ExperimentConfig& cfg);
std::vector<Artifact> run_gen_check(const ExperimentConfig& cfg);
std::vector<Artifact> run_split_check(const ExperimentConfig& cfg);
std::vector<Artifact> run_simulate(const ExperimentConfig& cfg);
std::vector<Artifact> run_weak_rate(const ExperimentConfig& cfg);
std::vector<Artifact> run_tv_rate(const ExperimentConfig& cfg);

const std::vector<std::string>& subcommands();

/// Dispatch one subcommand. Throws config_error (exit 2), io_error (exit 4)
/// or any other library error (exit 3); returns the artifacts written.
std::vector<Artifact> run(const std::string& subcommand, const ExperimentConfig& cfg);

} // namespace jumpgauss::cli
