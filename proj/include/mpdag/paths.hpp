#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mpdag/error.hpp"
#include "mpdag/graph.hpp"

namespace mpdag {

// A sequence of distinct, consecutively adjacent nodes. Edge marks are read
// from the host graph on demand, so a path is only meaningful with its graph.
struct NodePath {
  std::vector<Node> nodes;

  std::size_t length() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
  Node front() const { return nodes.front(); }
  Node back() const { return nodes.back(); }

  friend bool operator==(const NodePath&, const NodePath&) = default;
  // Shorter paths first, then lexicographic node sequence.
  friend bool operator<(const NodePath& a, const NodePath& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
  }
};

inline std::vector<Mark> path_marks(const Graph& g, const NodePath& p) {
  std::vector<Mark> marks;
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) marks.push_back(g.mark(p.nodes[i], p.nodes[i + 1]));
  return marks;
}

inline bool is_path(const Graph& g, const NodePath& p) {
  if (p.nodes.size() < 2) return false;
  std::vector<Node> sorted = p.nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  if (sorted.back() >= g.size()) return false;
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
    if (!g.adjacent(p.nodes[i], p.nodes[i + 1])) return false;
  return true;
}

inline std::string to_string(const Graph& g, const NodePath& p) {
  std::string out;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    if (i > 0) {
      switch (g.mark(p.nodes[i - 1], p.nodes[i])) {
        case Mark::out: out += " -> "; break;
        case Mark::in: out += " <- "; break;
        case Mark::undirected: out += " -- "; break;
        case Mark::none: out += " ?? "; break;
      }
    }
    out += g.name(p.nodes[i]);
  }
  return out;
}

enum class Causality { causal, possibly_causal, non_causal };

struct PathClass {
  Causality causality;
  bool definite_status;
  friend bool operator==(const PathClass&, const PathClass&) = default;
};

// `prev - mid - next` is a collider when both edges point into mid.
inline bool is_collider(const Graph& g, Node prev, Node mid, Node next) {
  return g.has_directed(prev, mid) && g.has_directed(next, mid);
}

// Definite non-collider: mid has an out-edge along the path, or the triple is
// an unshielded undirected one.
inline bool is_definite_noncollider(const Graph& g, Node prev, Node mid, Node next) {
  if (g.has_directed(mid, prev) || g.has_directed(mid, next)) return true;
  return g.has_undirected(prev, mid) && g.has_undirected(mid, next) && !g.adjacent(prev, next);
}

inline bool is_definite_status(const Graph& g, Node prev, Node mid, Node next) {
  return is_collider(g, prev, mid, next) || is_definite_noncollider(g, prev, mid, next);
}

// Every pair i < j is checked for an edge V_i <- V_j, not only consecutive ones.
inline bool is_possibly_causal(const Graph& g, const NodePath& p) {
  for (std::size_t j = 1; j < p.nodes.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (g.has_directed(p.nodes[j], p.nodes[i])) return false;
  return true;
}

inline PathClass classify_path(const Graph& g, const NodePath& p) {
  if (!is_path(g, p)) throw PreconditionError("classify_path: not a path of the graph");
  PathClass result{Causality::non_causal, true};
  if (is_possibly_causal(g, p)) {
    bool causal = true;
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
      causal = causal && g.has_directed(p.nodes[i], p.nodes[i + 1]);
    result.causality = causal ? Causality::causal : Causality::possibly_causal;
  }
  for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i)
    if (!is_definite_status(g, p.nodes[i - 1], p.nodes[i], p.nodes[i + 1])) result.definite_status = false;
  return result;
}

inline bool is_unshielded(const Graph& g, const NodePath& p) {
  for (std::size_t i = 0; i + 2 < p.nodes.size(); ++i)
    if (g.adjacent(p.nodes[i], p.nodes[i + 2])) return false;
  return true;
}

// Depth-first enumeration of proper possibly causal paths from `from` to `to`.
//
// A path is emitted when it reaches a node of `to`; it is not extended past
// that node. Interior nodes avoid `from` (properness). The possibly-causal
// condition is prefix-closed, so it is checked incrementally against every
// earlier node. Worst case is exponential in |V|; the visitor returns false
// to stop early.
template <typename Visitor>
void for_each_proper_possibly_causal_path(const Graph& g, const NodeSet& from, const NodeSet& to,
                                          bool start_undirected_only, Visitor&& visit) {
  std::vector<Node> path;
  std::vector<bool> on_path(g.size(), false);
  bool stop = false;

  auto extend = [&](auto&& self) -> void {
    Node u = path.back();
    for (Node v = 0; v < g.size() && !stop; ++v) {
      if (on_path[v] || from.contains(v) || !g.adjacent(u, v)) continue;
      if (path.size() == 1 && start_undirected_only && !g.has_undirected(u, v)) continue;
      bool backward = false;
      for (Node w : path)
        if (g.has_directed(v, w)) { backward = true; break; }
      if (backward) continue;
      path.push_back(v);
      if (to.contains(v)) {
        if (!visit(NodePath{path})) stop = true;
      } else {
        on_path[v] = true;
        self(self);
        on_path[v] = false;
      }
      path.pop_back();
    }
  };

  for (Node a : from) {
    if (stop) break;
    path.assign(1, a);
    on_path[a] = true;
    extend(extend);
    on_path[a] = false;
  }
}

// All proper possibly causal paths from A to Y, shortest first, then by node sequence.
inline std::vector<NodePath> proper_possibly_causal_paths(const Graph& g, const NodeSet& A, const NodeSet& Y,
                                                          bool start_undirected_only) {
  if (A.empty() || Y.empty()) throw PreconditionError("proper_possibly_causal_paths: empty node set");
  if (!disjoint(A, Y)) throw PreconditionError("proper_possibly_causal_paths: treatment and outcome overlap");
  std::vector<NodePath> out;
  for_each_proper_possibly_causal_path(g, A, Y, start_undirected_only, [&](NodePath p) {
    out.push_back(std::move(p));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

// Shortcuts a possibly causal path into an unshielded one with the same
// endpoints: from each kept node, jump to the farthest later node adjacent to
// it. Any chord of a possibly causal path points forward, so every shortcut
// stays possibly causal, and the result has no chords at all.
inline NodePath unshielded_subsequence(const Graph& g, const NodePath& p) {
  if (!is_path(g, p) || !is_possibly_causal(g, p))
    throw PreconditionError("unshielded_subsequence: path is not possibly causal");
  NodePath out;
  std::size_t i = 0;
  out.nodes.push_back(p.nodes[0]);
  while (i + 1 < p.nodes.size()) {
    std::size_t next = i + 1;
    for (std::size_t j = p.nodes.size() - 1; j > i + 1; --j)
      if (g.adjacent(p.nodes[i], p.nodes[j])) { next = j; break; }
    out.nodes.push_back(p.nodes[next]);
    i = next;
  }
  return out;
}

}  // namespace mpdag
