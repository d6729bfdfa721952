#include "jumpgauss/csvio.hpp"

#include <charconv>

#include "jumpgauss/rng.hpp"

namespace jumpgauss::cli {

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_number(std::int64_t x) {
    return std::to_string(x);
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quote(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

} // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path),
      hash_(0xcbf29ce484222325ull) {
    if (!out_) throw io_error("cannot open for writing: " + path.string());
}

void CsvWriter::write_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += quote(cells[i]);
    }
    line += '\n';
    out_ << line;
    hash_ = sampling::fnv1a64(line.data(), line.size(), hash_);
}

void CsvWriter::header(const std::vector<std::string>& names) {
    write_line(names);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    write_line(cells);
    ++rows_;
}

void CsvWriter::close() {
    if (closed_) return;
    out_.flush();
    if (!out_) throw io_error("write failure on: " + path_.string());
    out_.close();
    closed_ = true;
}

} // namespace jumpgauss::cli
