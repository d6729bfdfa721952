#include "jumpgauss/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "jumpgauss/csvio.hpp"
#include "jumpgauss/rng.hpp"

namespace jumpgauss::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': not a number: '" + v + "'");
    }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': not an integer: '" + v + "'");
    }
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& s : split_commas(text)) out.push_back(to_double("list", s));
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& s : split_commas(text))
        out.push_back(static_cast<int>(to_int("list", s)));
    return out;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    ExperimentConfig cfg;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config line " + std::to_string(lineno) +
                                   ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (qual == "measure.family") cfg.measure_family = value;
        else if (qual == "measure.b") cfg.b = to_double(qual, value);
        else if (qual == "measure.quad_abs_tol") cfg.quad_abs_tol = to_double(qual, value);
        else if (qual == "measure.quad_rel_tol") cfg.quad_rel_tol = to_double(qual, value);
        else if (qual == "measure.quad_max_subdiv") cfg.quad_max_subdiv = static_cast<int>(to_int(qual, value));
        else if (qual == "measure.eps_star") cfg.eps_star = to_double(qual, value);
        else if (qual == "measure.alpha1") cfg.alpha1 = to_double(qual, value);
        else if (qual == "coefficient.preset") cfg.coefficient_preset = value;
        else if (qual == "scheme.x0") cfg.x0 = to_double(qual, value);
        else if (qual == "scheme.t_final") cfg.t_final = to_double(qual, value);
        else if (qual == "scheme.eps_list") cfg.eps_list = parse_double_list(value);
        else if (qual == "scheme.eps_ref") cfg.eps_ref = to_double(qual, value);
        else if (qual == "scheme.eps_ref_divisor") cfg.eps_ref_divisor = to_double(qual, value);
        else if (qual == "scheme.euler_steps_per_unit") cfg.euler_steps_per_unit = static_cast<int>(to_int(qual, value));
        else if (qual == "scheme.paths") cfg.paths = to_int(qual, value);
        else if (qual == "stats.bank") cfg.bank = split_commas(value);
        else if (qual == "stats.kde_grid") cfg.kde_grid = static_cast<std::size_t>(to_int(qual, value));
        else if (qual == "stats.bandwidth") cfg.bandwidth = value;
        else if (qual == "stats.split_bands") cfg.split_bands = parse_int_list(value);
        else if (qual == "stats.split_draws") cfg.split_draws = to_int(qual, value);
        else if (qual == "stats.split_seeds") cfg.split_seeds = static_cast<int>(to_int(qual, value));
        else if (qual == "run.seed") cfg.seed = static_cast<std::uint64_t>(to_int(qual, value));
        else if (qual == "run.out") cfg.out = value;
        else if (qual == "run.threads") cfg.threads = static_cast<int>(to_int(qual, value));
        else throw config_error("unknown config key: " + qual);
    }
    return cfg;
}

void ExperimentConfig::validate() const {
    if (measure_family != "power-law")
        throw config_error("measure.family: only 'power-law' is supported in config "
                           "files (custom densities are a library-level feature)");
    if (!(b >= 0.0 && b < 1.0)) throw config_error("measure.b must be in [0,1)");
    if (!(quad_abs_tol > 0.0) || !(quad_rel_tol > 0.0))
        throw config_error("quadrature tolerances must be positive");
    if (quad_max_subdiv < 16) throw config_error("measure.quad_max_subdiv must be >= 16");
    if (!(eps_star > 0.0)) throw config_error("measure.eps_star must be > 0");
    if (!(alpha1 > 0.0 && alpha1 <= 1.0)) throw config_error("measure.alpha1 must be in (0,1]");

    if (coefficient_preset != "sigma-tanh" && coefficient_preset != "identity" &&
        coefficient_preset != "zero")
        throw config_error("coefficient.preset: unsupported preset '" + coefficient_preset + "'");

    if (!(t_final > 0.0)) throw config_error("scheme.t_final must be > 0");
    if (eps_list.empty()) throw config_error("scheme.eps_list must not be empty");
    for (double e : eps_list)
        if (!(e > 0.0 && e <= 1.0)) throw config_error("scheme.eps_list entries must be in (0,1]");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw config_error("scheme.eps_list must be sorted strictly descending");
    if (eps_ref < 0.0) throw config_error("scheme.eps_ref must be >= 0");
    if (!(eps_ref_divisor >= 8.0))
        throw config_error("scheme.eps_ref_divisor must be >= 8");
    const double ref = resolved_eps_ref();
    if (!(ref > 0.0 && ref <= eps_list.back() / 8.0))
        throw config_error("resolved eps_ref must be <= min(eps_list)/8");
    if (euler_steps_per_unit < 1) throw config_error("scheme.euler_steps_per_unit must be >= 1");
    if (paths < 1) throw config_error("scheme.paths must be >= 1");

    if (bank.empty()) throw config_error("stats.bank must not be empty");
    for (const auto& name : bank) coeffs::test_function(name);  // throws on unknown
    if (kde_grid < 16) throw config_error("stats.kde_grid must be >= 16");
    if (bandwidth != "silverman") throw config_error("stats.bandwidth: only 'silverman'");
    if (split_bands.empty()) throw config_error("stats.split_bands must not be empty");
    for (int k : split_bands)
        if (k < 1) throw config_error("stats.split_bands entries must be >= 1");
    if (split_draws < 1000) throw config_error("stats.split_draws must be >= 1000");
    if (split_seeds < 1) throw config_error("stats.split_seeds must be >= 1");

    if (threads < 0) throw config_error("run.threads must be >= 0");
    if (out.empty()) throw config_error("run.out must not be empty");
}

double ExperimentConfig::resolved_eps_ref() const {
    if (eps_ref > 0.0) return eps_ref;
    return eps_list.back() / eps_ref_divisor;
}

int ExperimentConfig::resolved_threads() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("JUMPGAUSS_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
            // fall through to machine parallelism
        }
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

measures::LevyMeasureModel ExperimentConfig::make_measure() const {
    QuadratureOptions q;
    q.abs_tol = quad_abs_tol;
    q.rel_tol = quad_rel_tol;
    q.max_subdivisions = quad_max_subdiv;
    return measures::LevyMeasureModel::power_law(b, q);
}

coeffs::JumpCoefficient ExperimentConfig::make_coefficient() const {
    return coeffs::JumpCoefficient::preset(coefficient_preset);
}

std::vector<coeffs::TestFunction> ExperimentConfig::make_bank() const {
    std::vector<coeffs::TestFunction> out;
    for (const auto& name : bank) out.push_back(coeffs::test_function(name));
    return out;
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream os;
    os << "[measure]\n";
    os << "family = " << measure_family << "\n";
    os << "b = " << format_number(b) << "\n";
    os << "quad_abs_tol = " << format_number(quad_abs_tol) << "\n";
    os << "quad_rel_tol = " << format_number(quad_rel_tol) << "\n";
    os << "quad_max_subdiv = " << quad_max_subdiv << "\n";
    os << "eps_star = " << format_number(eps_star) << "\n";
    os << "alpha1 = " << format_number(alpha1) << "\n";
    os << "[coefficient]\n";
    os << "preset = " << coefficient_preset << "\n";
    os << "[scheme]\n";
    os << "x0 = " << format_number(x0) << "\n";
    os << "t_final = " << format_number(t_final) << "\n";
    os << "eps_list = ";
    for (std::size_t i = 0; i < eps_list.size(); ++i)
        os << (i ? "," : "") << format_number(eps_list[i]);
    os << "\n";
    os << "eps_ref = " << format_number(resolved_eps_ref()) << "\n";
    os << "eps_ref_divisor = " << format_number(eps_ref_divisor) << "\n";
    os << "euler_steps_per_unit = " << euler_steps_per_unit << "\n";
    os << "paths = " << paths << "\n";
    os << "[stats]\n";
    os << "bank = ";
    for (std::size_t i = 0; i < bank.size(); ++i) os << (i ? "," : "") << bank[i];
    os << "\n";
    os << "kde_grid = " << kde_grid << "\n";
    os << "bandwidth = " << bandwidth << "\n";
    os << "split_bands = ";
    for (std::size_t i = 0; i < split_bands.size(); ++i)
        os << (i ? "," : "") << split_bands[i];
    os << "\n";
    os << "split_draws = " << split_draws << "\n";
    os << "split_seeds = " << split_seeds << "\n";
    os << "[run]\n";
    os << "seed = " << seed << "\n";
    os << "out = " << out << "\n";
    os << "threads = " << threads << "\n";
    return os.str();
}

std::uint64_t ExperimentConfig::config_hash() const {
    const std::string text = canonical_text();
    return sampling::fnv1a64(text.data(), text.size());
}

} // namespace jumpgauss::cli
