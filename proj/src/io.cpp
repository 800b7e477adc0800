#include "diffavg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace diffavg {

namespace {

constexpr std::string_view kGridMagic = "DIFFAVG-GRID";
constexpr std::string_view kFieldMagic = "DIFFAVG-FIELD";

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ValidationError("line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
    std::size_t end = pos;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t' && s[end] != '\r') ++end;
    if (end > pos) out.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(line, "cannot parse '" + std::string(token) + "'");
  }
  return value;
}

// Reads header and body; returns one row of `values_per_node` reals per node.
std::pair<DomainSpec, std::vector<double>> read_nodes(std::istream& is, std::string_view magic,
                                                      int values_per_node) {
  std::string text;
  if (!std::getline(is, text)) fail(1, "missing header");
  const auto header = split(text);
  if (header.size() != 4 || header[0] != magic) {
    fail(1, "expected header '" + std::string(magic) + " 1 <nx> <ny>'");
  }
  if (parse_number<int>(header[1], 1) != 1) fail(1, "unsupported format version");
  const auto nx = parse_number<Index>(header[2], 1);
  const auto ny = parse_number<Index>(header[3], 1);
  const DomainSpec spec(nx, ny);

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(spec.node_count() * values_per_node));
  std::size_t line = 1;
  Index node = 0;
  while (std::getline(is, text)) {
    ++line;
    const auto tokens = split(text);
    if (tokens.empty()) continue;
    if (node == spec.node_count()) {
      fail(line, "more data rows than the " + std::to_string(spec.node_count()) +
                     " nodes declared in the header");
    }
    if (tokens.size() != static_cast<std::size_t>(2 + values_per_node)) {
      fail(line, "expected " + std::to_string(2 + values_per_node) + " columns");
    }
    const Index i = parse_number<Index>(tokens[0], line);
    const Index j = parse_number<Index>(tokens[1], line);
    if (i != node / ny || j != node % ny) {
      fail(line, "node index (" + std::to_string(i) + "," + std::to_string(j) +
                     ") out of order");
    }
    for (int k = 0; k < values_per_node; ++k) {
      const double v = parse_number<double>(tokens[2 + k], line);
      if (!std::isfinite(v)) fail(line, "non-finite value");
      values.push_back(v);
    }
    ++node;
  }
  if (node != spec.node_count()) {
    fail(line, "node count mismatch: header declares " + std::to_string(spec.node_count()) +
                   " nodes, found " + std::to_string(node));
  }
  return {spec, std::move(values)};
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open '" + path.string() + "'");
  return is;
}

}  // namespace

void write_grid(const GridTransform& g, std::ostream& os) {
  const DomainSpec& spec = g.spec();
  os << kGridMagic << " 1 " << spec.nx() << ' ' << spec.ny() << '\n';
  for (Index i = 0; i < spec.nx(); ++i) {
    for (Index j = 0; j < spec.ny(); ++j) {
      os << i << ' ' << j << ' ' << format_real(g.x()(i, j)) << ' ' << format_real(g.y()(i, j))
         << '\n';
    }
  }
}

void write_grid(const GridTransform& g, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_grid(g, os);
}

GridTransform read_grid(std::istream& is) {
  const auto [spec, values] = read_nodes(is, kGridMagic, 2);
  NodeArray<double> x(spec.nx(), spec.ny()), y(spec.nx(), spec.ny());
  std::size_t k = 0;
  for (Index i = 0; i < spec.nx(); ++i) {
    for (Index j = 0; j < spec.ny(); ++j) {
      x(i, j) = values[k++];
      y(i, j) = values[k++];
    }
  }
  return GridTransform::checked(spec, x, y);
}

GridTransform read_grid(const std::filesystem::path& path) {
  auto is = open_in(path);
  try {
    return read_grid(is);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_field(const ScalarField& f, std::ostream& os) {
  const DomainSpec& spec = f.spec();
  os << kFieldMagic << " 1 " << spec.nx() << ' ' << spec.ny() << '\n';
  for (Index i = 0; i < spec.nx(); ++i) {
    for (Index j = 0; j < spec.ny(); ++j) {
      os << i << ' ' << j << ' ' << format_real(f(i, j)) << '\n';
    }
  }
}

void write_field(const ScalarField& f, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_field(f, os);
}

ScalarField read_field(std::istream& is) {
  const auto [spec, values] = read_nodes(is, kFieldMagic, 1);
  NodeArray<double> v(spec.nx(), spec.ny());
  std::size_t k = 0;
  for (Index i = 0; i < spec.nx(); ++i) {
    for (Index j = 0; j < spec.ny(); ++j) v(i, j) = values[k++];
  }
  return ScalarField(spec, v);
}

ScalarField read_field(const std::filesystem::path& path) {
  auto is = open_in(path);
  try {
    return read_field(is);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_report(const ConvergenceReport& report, const std::filesystem::path& path) {
  auto os = open_out(path);
  report.write_csv(os);
}

}  // namespace diffavg
