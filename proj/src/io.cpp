#include "ramsi/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "ramsi/error.hpp"

namespace ramsi {

namespace {

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

VectorTable read_vectors_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::string line;
  std::size_t row = 0;
  bool first = true;
  for (; std::getline(in, line); ++row) {
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);
    if (first) {
      first = false;
      width = cells.size();
      if (!parse_number(cells.front())) continue;  // header
    }
    if (cells.size() != width) {
      throw ParseError("row has " + std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(width),
                       row);
    }
    std::vector<double> values;
    values.reserve(width);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_number(cells[c]);
      if (!v) throw ParseError("cell is not a number: '" + std::string(trim(cells[c])) + "'", row, c);
      if (!std::isfinite(*v)) throw ParseError("cell is not finite", row, c);
      values.push_back(*v);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("no data rows", row);

  const Index n = static_cast<Index>(rows.size());
  const Index count = static_cast<Index>(width) - 1;
  Vector x(n);
  std::vector<Vector> z(static_cast<std::size_t>(count), Vector(n));
  for (Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    x[i] = r[0];
    for (Index j = 0; j < count; ++j) z[static_cast<std::size_t>(j)][i] = r[static_cast<std::size_t>(j + 1)];
  }
  std::vector<SignalVector> signals;
  for (auto& v : z) signals.emplace_back(std::move(v));
  return {SignalVector(std::move(x)), SideInformationEnsemble(n, std::move(signals))};
}

VectorTable read_vectors_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_vectors_csv(in);
}

void write_vectors_csv(std::ostream& out, const SignalVector& x,
                       const SideInformationEnsemble& ensemble) {
  if (x.size() != ensemble.dimension()) {
    throw DimensionError("x has length " + std::to_string(x.size()) + ", side information " +
                         std::to_string(ensemble.dimension()));
  }
  out << 'x';
  for (Index j = 1; j <= ensemble.count(); ++j) out << ",z" << j;
  out << '\n';
  for (Index i = 0; i < x.size(); ++i) {
    out << format_double(x[i]);
    for (Index j = 1; j <= ensemble.count(); ++j) out << ',' << format_double(ensemble.value(j, i));
    out << '\n';
  }
}

void write_vectors_csv(const std::filesystem::path& path, const SignalVector& x,
                       const SideInformationEnsemble& ensemble) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_vectors_csv(out, x, ensemble);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ramsi
