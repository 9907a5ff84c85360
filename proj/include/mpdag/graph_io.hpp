#pragma once

// Text formats.
//
// Graph files are UTF-8 lines of the form
//
//   X -> Y        directed edge
//   X -- Y        undirected edge
//   X             isolated node
//   # comment     (also allowed after an edge)
//
// Node names are non-whitespace tokens. Blank lines are ignored and a
// repeated edge line is an error. Model files additionally allow a
// coefficient after a directed edge (`X -> Y 2.0`) and noise variances
// (`X ~ 1.5`); missing coefficients default to 1 and variances to 1.

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mpdag/error.hpp"
#include "mpdag/graph.hpp"

namespace mpdag {

struct ModelSpec {
  EdgeList edges;
  std::map<std::pair<std::string, std::string>, double> coefficients;
  std::map<std::string, double> variances;
};

namespace detail {

inline std::vector<std::string> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline double parse_number(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
}

inline ModelSpec parse_lines(std::string_view text, bool allow_parameters) {
  ModelSpec spec;
  std::set<std::vector<std::string>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto tok = tokenize(line);
    if (tok.empty()) continue;
    if (tok.size() == 1) {
      if (tok[0] == "->" || tok[0] == "--" || tok[0] == "~")
        throw ParseError("malformed line '" + std::string(line) + "'", line_no);
      spec.edges.nodes.push_back(tok[0]);
      continue;
    }
    if (tok.size() < 3)
      throw ParseError("malformed line '" + std::string(line) + "'", line_no);

    const auto& op = tok[1];
    if (allow_parameters && op == "~") {
      if (tok.size() != 3) throw ParseError("malformed variance line", line_no);
      double v = parse_number(tok[2], line_no);
      if (!(v > 0)) throw ParseError("noise variance must be positive", line_no);
      if (!spec.variances.emplace(tok[0], v).second)
        throw ParseError("duplicate variance for '" + tok[0] + "'", line_no);
      spec.edges.nodes.push_back(tok[0]);
      continue;
    }
    if (op != "->" && op != "--")
      throw ParseError("unknown edge operator '" + op + "'", line_no);
    bool with_coef = allow_parameters && op == "->" && tok.size() == 4;
    if (tok.size() != 3 && !with_coef)
      throw ParseError("malformed line '" + std::string(line) + "'", line_no);
    if (!seen.insert({tok[0], op, tok[2]}).second)
      throw ParseError("duplicate edge line '" + tok[0] + " " + op + " " + tok[2] + "'", line_no);
    if (op == "->") {
      spec.edges.directed.emplace_back(tok[0], tok[2]);
      spec.coefficients[{tok[0], tok[2]}] = with_coef ? parse_number(tok[3], line_no) : 1.0;
    } else {
      spec.edges.undirected.emplace_back(tok[0], tok[2]);
    }
  }
  return spec;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline EdgeList parse_edge_list(std::string_view text) { return detail::parse_lines(text, false).edges; }

inline Graph parse_graph(std::string_view text) { return build_graph(parse_edge_list(text)); }

inline Graph load_graph(const std::string& path) { return parse_graph(detail::read_file(path)); }

inline ModelSpec parse_model(std::string_view text) { return detail::parse_lines(text, true); }

inline ModelSpec load_model(const std::string& path) { return parse_model(detail::read_file(path)); }

enum class GraphFormat { edge_list, dot };

// Canonical text: directed edges, then undirected edges, each in node order,
// then isolated nodes. parse_graph(render_graph(g)) == g.
inline std::string render_graph(const Graph& g, GraphFormat format = GraphFormat::edge_list) {
  std::ostringstream out;
  std::vector<bool> touched(g.size(), false);
  auto touch = [&](Edge e) { touched[e.first] = touched[e.second] = true; };

  if (format == GraphFormat::edge_list) {
    for (auto e : g.directed_edges()) {
      out << g.name(e.first) << " -> " << g.name(e.second) << '\n';
      touch(e);
    }
    for (auto e : g.undirected_edges()) {
      out << g.name(e.first) << " -- " << g.name(e.second) << '\n';
      touch(e);
    }
    for (Node v = 0; v < g.size(); ++v)
      if (!touched[v]) out << g.name(v) << '\n';
    return out.str();
  }

  // Graphviz has no mixed graph type; undirected edges become arrowless edges.
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  out << "digraph G {\n";
  for (Node v = 0; v < g.size(); ++v) out << "  " << quote(g.name(v)) << ";\n";
  for (auto e : g.directed_edges())
    out << "  " << quote(g.name(e.first)) << " -> " << quote(g.name(e.second)) << ";\n";
  for (auto e : g.undirected_edges())
    out << "  " << quote(g.name(e.first)) << " -> " << quote(g.name(e.second)) << " [dir=none];\n";
  out << "}\n";
  return out.str();
}

}  // namespace mpdag
