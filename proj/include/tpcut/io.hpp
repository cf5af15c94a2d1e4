#pragma once

// Text formats.
//
// Graph file ('#' starts a comment, blank lines ignored):
//   n m directed|undirected
//   u v length [edge_cost]        (m lines, 0-based ids)
// Vertex-cost file: lines "v cost". Target file: lines "s t".
// Costs may be "inf" to mark an element unremovable; missing costs are 1.

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tpcut/graph.hpp"
#include "tpcut/pathspace.hpp"

namespace tpcut::io {

/// Shortest decimal string that parses back to the same double.
inline std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

namespace detail {

inline std::vector<std::string_view> tokens(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

inline double parse_double(std::string_view tok, std::string_view source, std::size_t line) {
  if (tok == "inf" || tok == "INF" || tok == "infinity") return kInfinity;
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw InputError(where(source, line) + "expected a number, got '" + std::string(tok) + "'");
  return x;
}

inline std::uint64_t parse_uint(std::string_view tok, std::string_view source, std::size_t line) {
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw InputError(where(source, line) + "expected a non-negative integer, got '" +
                     std::string(tok) + "'");
  return x;
}

inline Vertex parse_vertex(std::string_view tok, std::size_t n, std::string_view source,
                           std::size_t line) {
  const auto v = parse_uint(tok, source, line);
  if (v >= n)
    throw InputError(where(source, line) + "vertex id " + std::string(tok) + " out of range (n = " +
                     std::to_string(n) + ")");
  return static_cast<Vertex>(v);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

inline Graph read_graph(std::istream& in, std::string_view source = "<graph>") {
  std::string line;
  std::size_t lineno = 0;
  std::optional<Graph> g;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (!g) {
      if (tok.size() != 3 || (tok[2] != "directed" && tok[2] != "undirected"))
        throw InputError(detail::where(source, lineno) +
                         "header must read 'n m directed|undirected'");
      const auto n = detail::parse_uint(tok[0], source, lineno);
      expected = detail::parse_uint(tok[1], source, lineno);
      g.emplace(n, tok[2] == "directed");
      continue;
    }
    if (tok.size() != 3 && tok.size() != 4)
      throw InputError(detail::where(source, lineno) + "edge line must read 'u v length [cost]'");
    const auto u = detail::parse_vertex(tok[0], g->vertex_count(), source, lineno);
    const auto v = detail::parse_vertex(tok[1], g->vertex_count(), source, lineno);
    const double len = detail::parse_double(tok[2], source, lineno);
    const double cost = tok.size() == 4 ? detail::parse_double(tok[3], source, lineno) : 1.0;
    g->add_edge(u, v, len, cost);
  }
  if (!g) throw InputError(std::string(source) + ": missing header line");
  if (g->edge_count() != expected)
    throw InputError(std::string(source) + ": header announces " + std::to_string(expected) +
                     " edges but " + std::to_string(g->edge_count()) + " were read");
  return std::move(*g);
}

inline Graph read_graph_file(const std::string& path) {
  auto in = detail::open_input(path);
  return read_graph(in, path);
}

/// Edge costs are written only when some edge cost differs from 1.
inline void write_graph(std::ostream& out, const Graph& g) {
  bool costs = false;
  for (const auto& e : g.edges()) costs = costs || e.cost != 1.0;
  out << g.vertex_count() << ' ' << g.edge_count() << ' '
      << (g.directed() ? "directed" : "undirected") << '\n';
  for (const auto& e : g.edges()) {
    out << e.tail << ' ' << e.head << ' ' << format_number(e.length);
    if (costs) out << ' ' << format_number(e.cost);
    out << '\n';
  }
}

inline void read_vertex_costs(std::istream& in, Graph& g, std::string_view source = "<costs>") {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw InputError(detail::where(source, lineno) + "expected 'v cost'");
    g.set_vertex_cost(detail::parse_vertex(tok[0], g.vertex_count(), source, lineno),
                      detail::parse_double(tok[1], source, lineno));
  }
}

inline void write_vertex_costs(std::ostream& out, const Graph& g) {
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    out << v << ' ' << format_number(g.vertex_cost(v)) << '\n';
}

inline std::vector<TargetPair> read_targets(std::istream& in, std::size_t n,
                                            std::string_view source = "<targets>") {
  std::vector<TargetPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw InputError(detail::where(source, lineno) + "expected 's t'");
    out.push_back({detail::parse_vertex(tok[0], n, source, lineno),
                   detail::parse_vertex(tok[1], n, source, lineno)});
  }
  return out;
}

inline void write_targets(std::ostream& out, const std::vector<TargetPair>& targets) {
  for (const auto& p : targets) out << p.source << ' ' << p.target << '\n';
}

inline nlohmann::ordered_json to_json(const Solution& s) {
  nlohmann::ordered_json j;
  j["algorithm"] = s.algorithm;
  j["elements"] = s.elements;
  j["cost"] = s.cost;
  j["feasible"] = s.feasible;
  j["seed"] = s.seed ? nlohmann::ordered_json(*s.seed) : nlohmann::ordered_json(nullptr);
  j["elapsed_ms"] = s.elapsed_ms;
  return j;
}

/// Accepts a Solution JSON object or a whitespace-separated list of ids.
inline std::vector<Element> read_solution_elements(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<Element> out;
  if (first != std::string::npos && text[first] == '{') {
    try {
      const auto j = nlohmann::json::parse(text);
      for (const auto& e : j.at("elements")) out.push_back(e.get<Element>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed solution JSON: ") + e.what());
    }
    return out;
  }
  std::size_t lineno = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    ++lineno;
    for (auto tok : detail::tokens(line))
      out.push_back(static_cast<Element>(detail::parse_uint(tok, "<solution>", lineno)));
  }
  return out;
}

/// One path per line: "pair_index: v0 v1 ... vl length".
inline void write_paths(std::ostream& out, const CoveringInstance& cov) {
  for (const auto& p : cov.paths) {
    out << p.pair_index << ':';
    for (Vertex v : p.vertices) out << ' ' << v;
    out << ' ' << format_number(p.length) << '\n';
  }
}

}  // namespace tpcut::io
