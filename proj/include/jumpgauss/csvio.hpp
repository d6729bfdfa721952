#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "jumpgauss/errors.hpp"

namespace jumpgauss::cli {

/// Shortest round-trip decimal rendering; the one number format used in
/// every artifact so reruns are byte-identical.
std::string format_number(double x);
std::string format_number(std::int64_t x);

/// RFC 4180 CSV writer with a running FNV-1a hash of the body bytes.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);

    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);
    std::int64_t rows() const { return rows_; }
    std::uint64_t body_hash() const { return hash_; }

    /// Flush and close; throws io_error on stream failure.
    void close();

private:
    void write_line(const std::vector<std::string>& cells);
    std::ofstream out_;
    std::filesystem::path path_;
    std::uint64_t hash_;
    std::int64_t rows_ = 0;
    bool closed_ = false;
};

} // namespace jumpgauss::cli
