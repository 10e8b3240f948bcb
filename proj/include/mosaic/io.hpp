#pragma once

// Deterministic CSV/JSON output: '.' decimal, '\n' line endings, mandatory
// header row, and a config-hash comment line so identical runs are
// byte-identical.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "mosaic/errors.hpp"
#include "mosaic/version.hpp"

namespace mosaic {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns,
              const std::string& config_hash)
        : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot open '" + path + "' for writing");
        out_ << "# config=" << config_hash << " version=" << kVersion << "\n";
        for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
        ncols_ = columns.size();
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != ncols_) throw ConfigError("csv row arity mismatch");
        for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

  private:
    std::ofstream out_;
    size_t ncols_ = 0;
};

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << body;
}

} // namespace mosaic
