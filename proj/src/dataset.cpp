#include "actsearch/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "actsearch/rng.hpp"

namespace actsearch {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void fail(const std::filesystem::path& path, int line_no, const std::string& what) {
  throw parse_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& s, const std::filesystem::path& path, int line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    fail(path, line_no, "malformed number '" + s + "'");
  return v;
}

}  // namespace

int Dataset::target_count() const {
  int c = 0;
  for (int y : labels) c += y;
  return c;
}

Dataset generate_disks(int n, std::uint64_t seed) {
  if (n < 1) throw config_error("disk dataset needs n >= 1");
  static constexpr double kCenters[5][2] = {
      {0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}, {0.5, 0.5}};
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset data;
  data.name = "disks:" + std::to_string(n);
  data.features.reserve(static_cast<std::size_t>(n));
  data.labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = unit(rng);
    const double y = unit(rng);
    bool target = false;
    for (const auto& c : kCenters) {
      const double dx = x - c[0];
      const double dy = y - c[1];
      // Strictly within radius 1/4; the boundary is excluded by convention.
      if (dx * dx + dy * dy < 0.0625) {
        target = true;
        break;
      }
    }
    data.features.push_back({x, y});
    data.labels.push_back(target ? 1 : 0);
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path.string() + ": cannot open");
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header.front() != "id" || header.back() != "label")
    fail(path, line_no, "header must be id,f1,...,fd,label");
  const int dim = static_cast<int>(header.size()) - 2;

  Dataset data;
  data.name = path.filename().string();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != dim + 2)
      fail(path, line_no, "expected " + std::to_string(dim + 2) + " fields, got " +
                              std::to_string(cells.size()));
    const double id = parse_double(cells[0], path, line_no);
    if (id != static_cast<double>(data.num_points()))
      fail(path, line_no, "ids must be dense 0..N-1; expected " +
                              std::to_string(data.num_points()));
    std::vector<double> feat(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
      feat[static_cast<std::size_t>(j)] = parse_double(cells[static_cast<std::size_t>(j) + 1], path, line_no);
      if (!std::isfinite(feat[static_cast<std::size_t>(j)]))
        fail(path, line_no, "non-finite feature");
    }
    const auto& lab = cells.back();
    if (lab != "0" && lab != "1") fail(path, line_no, "label must be 0 or 1, got '" + lab + "'");
    data.features.push_back(std::move(feat));
    data.labels.push_back(lab == "1" ? 1 : 0);
  }
  if (data.num_points() == 0) fail(path, line_no, "no data rows");
  return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write " + path.string());
  out << "id";
  for (int j = 1; j <= data.dim(); ++j) out << ",f" << j;
  out << ",label\n";
  for (int i = 0; i < data.num_points(); ++i) {
    out << i;
    for (double v : data.features[static_cast<std::size_t>(i)]) out << ',' << format_double(v);
    out << ',' << data.labels[static_cast<std::size_t>(i)] << '\n';
  }
}

}  // namespace actsearch
