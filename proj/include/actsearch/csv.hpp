#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "actsearch/errors.hpp"

namespace actsearch {

// Shortest round-trip representation.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string csv_cell(double v) { return format_double(v); }
inline std::string csv_cell(int v) { return std::to_string(v); }
inline std::string csv_cell(long v) { return std::to_string(v); }
inline std::string csv_cell(unsigned long v) { return std::to_string(v); }
inline std::string csv_cell(unsigned long long v) { return std::to_string(v); }
inline std::string csv_cell(const char* v) { return v; }
inline std::string csv_cell(const std::string& v) { return v; }

// LF line endings regardless of platform.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw config_error("cannot write " + path.string());
    write_row(header);
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    std::vector<std::string> r;
    r.reserve(sizeof...(cells));
    (r.push_back(csv_cell(cells)), ...);
    write_row(r);
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace actsearch
