#include "basex/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "basex/errors.hpp"

namespace basex::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

double parse_real(const std::string& text, const std::string& file, long line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (pos != text.size() || !std::isfinite(v)) {
      throw std::invalid_argument(text);
    }
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, line, "not a finite real number: '" + text + "'");
  }
}

long parse_index(const std::string& text, const std::string& file, long line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(text, &pos);
    if (pos != text.size() || v < 0) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, line, "not a nonnegative index: '" + text + "'");
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

linalg::SymmetricMatrix parse_ensemble_csv(const std::string& path) {
  const auto lines = read_lines(path);
  const std::size_t n = lines.size();
  if (n == 0) throw ParseError(path, 0, "empty ensemble file");
  std::vector<double> values;
  values.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != n) {
      throw ParseError(path, static_cast<long>(r + 1),
                       "expected " + std::to_string(n) + " columns, got " +
                           std::to_string(cells.size()));
    }
    for (const auto& cell : cells) {
      values.push_back(parse_real(cell, path, static_cast<long>(r + 1)));
    }
  }
  return linalg::SymmetricMatrix(n, std::move(values));
}

ExplicitTable parse_table_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path, 0, "empty table file");
  std::map<Subset, double> entries;
  std::size_t k = 0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const long lineno = static_cast<long>(r + 1);
    if (lines[r].empty()) continue;
    const auto parts = split(lines[r], ',');
    if (parts.size() != 2) {
      throw ParseError(path, lineno, "expected 'i1;...;ik,weight'");
    }
    std::vector<int> idx;
    for (const auto& cell : split(parts[0], ';')) {
      idx.push_back(static_cast<int>(parse_index(cell, path, lineno)));
    }
    Subset s;
    try {
      s = Subset(std::move(idx));
    } catch (const InputError& e) {
      throw ParseError(path, lineno, e.what());
    }
    if (entries.empty()) {
      k = s.size();
    } else if (s.size() != k) {
      throw ParseError(path, lineno, "subset size " + std::to_string(s.size()) +
                                         " differs from earlier size " +
                                         std::to_string(k));
    }
    const double w = parse_real(parts[1], path, lineno);
    if (!(w > 0.0)) throw ParseError(path, lineno, "weight must be positive");
    if (!entries.emplace(s, w).second) {
      throw ParseError(path, lineno, "duplicate subset " + s.to_string());
    }
    if (!s.empty()) n = std::max(n, static_cast<std::size_t>(s[s.size() - 1]) + 1);
  }
  if (entries.empty()) throw ParseError(path, 0, "table has no entries");
  try {
    return ExplicitTable(n, k, std::move(entries));
  } catch (const std::runtime_error& e) {
    throw ParseError(path, 0, e.what());
  }
}

SpanningTreeDistribution parse_graph_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path, 0, "empty graph file");
  std::vector<Edge> edges;
  std::size_t vertex_count = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const long lineno = static_cast<long>(r + 1);
    if (lines[r].empty()) continue;
    const auto parts = split(lines[r], ',');
    if (parts.size() != 3) throw ParseError(path, lineno, "expected 'u,v,weight'");
    Edge e;
    e.u = static_cast<int>(parse_index(parts[0], path, lineno));
    e.v = static_cast<int>(parse_index(parts[1], path, lineno));
    e.weight = parse_real(parts[2], path, lineno);
    if (!(e.weight > 0.0)) throw ParseError(path, lineno, "weight must be positive");
    vertex_count = std::max({vertex_count, static_cast<std::size_t>(e.u) + 1,
                             static_cast<std::size_t>(e.v) + 1});
    edges.push_back(e);
  }
  try {
    return SpanningTreeDistribution(vertex_count, std::move(edges));
  } catch (const std::runtime_error& e) {
    throw ParseError(path, 0, e.what());
  }
}

}  // namespace basex::io
