#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mpdag/error.hpp"
#include "mpdag/node_set.hpp"

namespace mpdag {

// Edge mark between an ordered pair (u, v): `out` means u -> v, `in` means u <- v.
enum class Mark : std::uint8_t { none = 0, out = 1, in = 2, undirected = 3 };

constexpr Mark reverse(Mark m) noexcept {
  switch (m) {
    case Mark::out: return Mark::in;
    case Mark::in: return Mark::out;
    default: return m;
  }
}

using Edge = std::pair<Node, Node>;

// Partially directed graph over a named node set.
//
// Nodes are kept sorted by name; a node's index is its rank in that order, and
// every tie-break in the library goes through this order. The adjacency is a
// dense mark matrix, so at most one edge exists per pair by construction.
class Graph {
 public:
  Graph() = default;

  // Names must be unique; they are sorted to fix the node order.
  explicit Graph(std::vector<std::string> names) : names_(std::move(names)) {
    std::sort(names_.begin(), names_.end());
    if (std::adjacent_find(names_.begin(), names_.end()) != names_.end())
      throw GraphError("duplicate node name '" +
                       *std::adjacent_find(names_.begin(), names_.end()) + "'");
    marks_.assign(names_.size() * names_.size(), Mark::none);
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(Node v) const { return names_.at(v); }

  std::optional<Node> find(const std::string& name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) return std::nullopt;
    return static_cast<Node>(it - names_.begin());
  }

  Node at(const std::string& name) const {
    if (auto v = find(name)) return *v;
    throw GraphError("unknown node '" + name + "'");
  }

  Mark mark(Node u, Node v) const { return marks_[u * size() + v]; }
  bool adjacent(Node u, Node v) const { return mark(u, v) != Mark::none; }
  bool has_directed(Node u, Node v) const { return mark(u, v) == Mark::out; }
  bool has_undirected(Node u, Node v) const { return mark(u, v) == Mark::undirected; }

  void add_directed(Node u, Node v) { set_edge(u, v, Mark::out); }
  void add_undirected(Node u, Node v) { set_edge(u, v, Mark::undirected); }
  void remove_edge(Node u, Node v) { set_edge(u, v, Mark::none); }

  // Turns an existing undirected edge u - v into u -> v.
  void orient(Node u, Node v) {
    if (!has_undirected(u, v)) throw PreconditionError("orient: " + name(u) + " - " + name(v) + " is not undirected");
    set_edge(u, v, Mark::out);
  }

  NodeSet parents(Node v) const { return collect(v, Mark::in); }
  NodeSet children(Node v) const { return collect(v, Mark::out); }
  NodeSet neighbors(Node v) const { return collect(v, Mark::undirected); }

  NodeSet adjacents(Node v) const {
    std::vector<Node> out;
    for (Node w = 0; w < size(); ++w)
      if (adjacent(v, w)) out.push_back(w);
    return NodeSet(std::move(out));
  }

  // Directed edges as (tail, head), sorted in node order.
  std::vector<Edge> directed_edges() const {
    std::vector<Edge> out;
    for (Node u = 0; u < size(); ++u)
      for (Node v = 0; v < size(); ++v)
        if (has_directed(u, v)) out.emplace_back(u, v);
    return out;
  }

  // Undirected edges as (u, v) with u < v, sorted in node order.
  std::vector<Edge> undirected_edges() const {
    std::vector<Edge> out;
    for (Node u = 0; u < size(); ++u)
      for (Node v = u + 1; v < size(); ++v)
        if (has_undirected(u, v)) out.emplace_back(u, v);
    return out;
  }

  std::optional<Edge> first_undirected_edge() const {
    for (Node u = 0; u < size(); ++u)
      for (Node v = u + 1; v < size(); ++v)
        if (has_undirected(u, v)) return Edge{u, v};
    return std::nullopt;
  }

  bool is_directed() const { return !first_undirected_edge().has_value(); }

  bool same_skeleton(const Graph& other) const {
    if (names_ != other.names_) return false;
    for (std::size_t i = 0; i < marks_.size(); ++i)
      if ((marks_[i] == Mark::none) != (other.marks_[i] == Mark::none)) return false;
    return true;
  }

  // A directed cycle as a closed node list <v0, ..., v0>, if one exists.
  std::optional<std::vector<Node>> find_directed_cycle() const {
    enum class Color : std::uint8_t { white, grey, black };
    std::vector<Color> color(size(), Color::white);
    std::vector<Node> stack;
    std::optional<std::vector<Node>> cycle;

    auto dfs = [&](auto&& self, Node u) -> bool {
      color[u] = Color::grey;
      stack.push_back(u);
      for (Node w = 0; w < size(); ++w) {
        if (!has_directed(u, w)) continue;
        if (color[w] == Color::grey) {
          auto from = std::find(stack.begin(), stack.end(), w);
          std::vector<Node> c(from, stack.end());
          c.push_back(w);
          cycle = std::move(c);
          return true;
        }
        if (color[w] == Color::white && self(self, w)) return true;
      }
      stack.pop_back();
      color[u] = Color::black;
      return false;
    };
    for (Node v = 0; v < size(); ++v)
      if (color[v] == Color::white && dfs(dfs, v)) return cycle;
    return std::nullopt;
  }

  // Kahn order on the directed part, ties broken by node order.
  std::vector<Node> topological_order() const {
    std::vector<std::size_t> indegree(size(), 0);
    for (auto [u, v] : directed_edges()) ++indegree[v];
    std::set<Node> ready;
    for (Node v = 0; v < size(); ++v)
      if (indegree[v] == 0) ready.insert(v);
    std::vector<Node> order;
    while (!ready.empty()) {
      Node u = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(u);
      for (Node w = 0; w < size(); ++w)
        if (has_directed(u, w) && --indegree[w] == 0) ready.insert(w);
    }
    if (order.size() != size()) throw GraphError("topological_order: graph has a directed cycle");
    return order;
  }

  friend bool operator==(const Graph&, const Graph&) = default;
  friend auto operator<=>(const Graph& a, const Graph& b) {
    if (auto c = a.names_ <=> b.names_; c != 0) return c;
    return a.marks_ <=> b.marks_;
  }

 private:
  void set_edge(Node u, Node v, Mark m) {
    if (u >= size() || v >= size()) throw GraphError("node index out of range");
    if (u == v && m != Mark::none) throw GraphError("self-loop at '" + name(u) + "'");
    marks_[u * size() + v] = m;
    marks_[v * size() + u] = reverse(m);
  }

  NodeSet collect(Node v, Mark m) const {
    std::vector<Node> out;
    for (Node w = 0; w < size(); ++w)
      if (mark(v, w) == m) out.push_back(w);
    return NodeSet(std::move(out));
  }

  std::vector<std::string> names_;
  std::vector<Mark> marks_;
};

// Name-level description of a graph, as read from text.
struct EdgeList {
  std::vector<std::string> nodes;  // declared nodes; edge endpoints are added implicitly
  std::vector<std::pair<std::string, std::string>> directed;
  std::vector<std::pair<std::string, std::string>> undirected;
};

struct Violation {
  enum class Kind { self_loop, duplicate_adjacency, directed_cycle };
  Kind kind;
  std::string message;
  std::vector<std::string> witness;
};

namespace detail {

inline std::string join_path(const std::vector<std::string>& nodes) {
  std::string out = "<";
  for (std::size_t i = 0; i < nodes.size(); ++i) out += (i ? "," : "") + nodes[i];
  return out + ">";
}

inline std::vector<std::string> node_names(const EdgeList& list) {
  std::set<std::string> names(list.nodes.begin(), list.nodes.end());
  for (const auto& [a, b] : list.directed) names.insert({a, b});
  for (const auto& [a, b] : list.undirected) names.insert({a, b});
  return {names.begin(), names.end()};
}

}  // namespace detail

// Checks the PDAG invariants on a graph. Only acyclicity can fail here; the
// mark matrix rules out the other violations.
inline std::optional<Violation> validate_pdag(const Graph& g) {
  if (auto cycle = g.find_directed_cycle()) {
    std::vector<std::string> names;
    for (Node v : *cycle) names.push_back(g.name(v));
    return Violation{Violation::Kind::directed_cycle, "directed cycle " + detail::join_path(names), names};
  }
  return std::nullopt;
}

// Checks the PDAG invariants on an edge list and reports the first violation.
inline std::optional<Violation> validate_pdag(const EdgeList& list) {
  std::set<std::pair<std::string, std::string>> seen_directed;
  std::set<std::pair<std::string, std::string>> seen_pairs;
  auto unordered = [](const std::string& a, const std::string& b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  };
  for (const auto& e : list.directed) {
    if (e.first == e.second)
      return Violation{Violation::Kind::self_loop, "self-loop at " + e.first, {e.first}};
    if (seen_directed.count({e.second, e.first}))
      return Violation{Violation::Kind::directed_cycle,
                       "directed cycle " + detail::join_path({e.second, e.first, e.second}),
                       {e.second, e.first, e.second}};
    if (!seen_pairs.insert(unordered(e.first, e.second)).second)
      return Violation{Violation::Kind::duplicate_adjacency,
                       "duplicate adjacency " + e.first + " -> " + e.second, {e.first, e.second}};
    seen_directed.insert(e);
  }
  for (const auto& e : list.undirected) {
    if (e.first == e.second)
      return Violation{Violation::Kind::self_loop, "self-loop at " + e.first, {e.first}};
    if (!seen_pairs.insert(unordered(e.first, e.second)).second)
      return Violation{Violation::Kind::duplicate_adjacency,
                       "duplicate adjacency " + e.first + " -- " + e.second, {e.first, e.second}};
  }
  Graph g(detail::node_names(list));
  for (const auto& [a, b] : list.directed) g.add_directed(g.at(a), g.at(b));
  return validate_pdag(g);
}

// Builds a graph from an edge list, throwing GraphError on the first violation.
inline Graph build_graph(const EdgeList& list) {
  if (auto v = validate_pdag(list)) throw GraphError(v->message);
  Graph g(detail::node_names(list));
  for (const auto& [a, b] : list.directed) g.add_directed(g.at(a), g.at(b));
  for (const auto& [a, b] : list.undirected) g.add_undirected(g.at(a), g.at(b));
  return g;
}

inline EdgeList to_edge_list(const Graph& g) {
  EdgeList list;
  list.nodes = g.names();
  for (auto [u, v] : g.directed_edges()) list.directed.emplace_back(g.name(u), g.name(v));
  for (auto [u, v] : g.undirected_edges()) list.undirected.emplace_back(g.name(u), g.name(v));
  return list;
}

inline NodeSet node_set(const Graph& g, const std::vector<std::string>& names) {
  NodeSet s;
  for (const auto& n : names) s.insert(g.at(n));
  return s;
}

inline std::vector<std::string> node_names(const Graph& g, const NodeSet& s) {
  std::vector<std::string> out;
  for (Node v : s) out.push_back(g.name(v));
  return out;
}

// Graph on `keep` with every edge of g between kept nodes, marks preserved.
// Node indices are renumbered to ranks within `keep`.
inline Graph induced_subgraph(const Graph& g, const NodeSet& keep) {
  for (Node v : keep)
    if (v >= g.size()) throw GraphError("induced_subgraph: unknown node index " + std::to_string(v));
  Graph sub(node_names(g, keep));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = i + 1; j < keep.size(); ++j) {
      Mark m = g.mark(keep[i], keep[j]);
      if (m == Mark::out) sub.add_directed(i, j);
      else if (m == Mark::in) sub.add_directed(j, i);
      else if (m == Mark::undirected) sub.add_undirected(i, j);
    }
  return sub;
}

}  // namespace mpdag
