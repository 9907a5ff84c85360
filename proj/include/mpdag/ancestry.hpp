#pragma once

#include <vector>

#include "mpdag/error.hpp"
#include "mpdag/graph.hpp"

namespace mpdag {

namespace detail {

inline void check_members(const Graph& g, const NodeSet& s, const char* op) {
  for (Node v : s)
    if (v >= g.size()) throw GraphError(std::string(op) + ": unknown node index " + std::to_string(v));
}

// Plain reachability from `start` along the marks accepted by `step(u, v)`.
template <typename Step>
NodeSet reach(const Graph& g, const NodeSet& start, Step step) {
  std::vector<bool> seen(g.size(), false);
  std::vector<Node> stack(start.begin(), start.end());
  for (Node v : start) seen[v] = true;
  while (!stack.empty()) {
    Node u = stack.back();
    stack.pop_back();
    for (Node v = 0; v < g.size(); ++v)
      if (!seen[v] && step(u, v)) {
        seen[v] = true;
        stack.push_back(v);
      }
  }
  std::vector<Node> out;
  for (Node v = 0; v < g.size(); ++v)
    if (seen[v]) out.push_back(v);
  return NodeSet(std::move(out));
}

// Nodes reached from `source` by possibly causal paths, found by exhaustive
// path search. `forward` selects the direction: true walks source -> v,
// false walks v -> source (possible ancestors). The search stops once it has
// reached every node of `bound`, the reachability superset along
// non-backward edges.
inline NodeSet possibly_causal_reach(const Graph& g, Node source, bool forward) {
  auto allowed = [&](Node u, Node v) {
    return forward ? (g.has_directed(u, v) || g.has_undirected(u, v))
                   : (g.has_directed(v, u) || g.has_undirected(u, v));
  };
  const NodeSet bound = reach(g, NodeSet{source}, allowed);

  std::vector<bool> reached(g.size(), false);
  std::vector<bool> on_path(g.size(), false);
  std::vector<Node> path{source};
  reached[source] = on_path[source] = true;
  std::size_t count = 1;

  auto dfs = [&](auto&& self) -> bool {
    Node u = path.back();
    for (Node v : bound) {
      if (on_path[v] || !allowed(u, v)) continue;
      bool backward = false;
      for (Node w : path) {
        // forward: v is appended after w, so w <- v is forbidden.
        // reverse: v precedes w on the forward path, so v <- w is forbidden.
        if (forward ? g.has_directed(v, w) : g.has_directed(w, v)) { backward = true; break; }
      }
      if (backward) continue;
      if (!reached[v]) {
        reached[v] = true;
        if (++count == bound.size()) return true;
      }
      path.push_back(v);
      on_path[v] = true;
      bool done = self(self);
      on_path[v] = false;
      path.pop_back();
      if (done) return true;
    }
    return false;
  };
  if (count < bound.size()) dfs(dfs);

  std::vector<Node> out;
  for (Node v = 0; v < g.size(); ++v)
    if (reached[v]) out.push_back(v);
  return NodeSet(std::move(out));
}

}  // namespace detail

inline NodeSet parents_of(const Graph& g, const NodeSet& s) {
  NodeSet out;
  for (Node v : s)
    for (Node p : g.parents(v)) out.insert(p);
  return set_difference(out, s);
}

inline NodeSet ancestors_of(const Graph& g, const NodeSet& s) {
  detail::check_members(g, s, "ancestors");
  return detail::reach(g, s, [&](Node u, Node v) { return g.has_directed(v, u); });
}

inline NodeSet descendants_of(const Graph& g, const NodeSet& s) {
  detail::check_members(g, s, "descendants");
  return detail::reach(g, s, [&](Node u, Node v) { return g.has_directed(u, v); });
}

inline NodeSet possible_descendants_of(const Graph& g, const NodeSet& s) {
  detail::check_members(g, s, "possible_descendants");
  NodeSet out;
  for (Node v : s) out = set_union(out, detail::possibly_causal_reach(g, v, true));
  return out;
}

inline NodeSet possible_ancestors_of(const Graph& g, const NodeSet& s) {
  detail::check_members(g, s, "possible_ancestors");
  NodeSet out;
  for (Node v : s) out = set_union(out, detail::possibly_causal_reach(g, v, false));
  return out;
}

struct AncestralSets {
  NodeSet parents;
  NodeSet ancestors;
  NodeSet descendants;
  NodeSet possible_descendants;
};

// Parents exclude S itself; the other three sets contain S.
inline AncestralSets ancestral_sets(const Graph& g, const NodeSet& s) {
  detail::check_members(g, s, "ancestral_sets");
  return {parents_of(g, s), ancestors_of(g, s), descendants_of(g, s), possible_descendants_of(g, s)};
}

using BucketDecomposition = std::vector<NodeSet>;

// Connected components of the undirected edges among D, ordered by smallest member.
inline BucketDecomposition bucket_decomposition(const Graph& g, const NodeSet& d) {
  detail::check_members(g, d, "bucket_decomposition");
  BucketDecomposition buckets;
  NodeSet assigned;
  for (Node v : d) {
    if (assigned.contains(v)) continue;
    NodeSet bucket = detail::reach(g, NodeSet{v}, [&](Node a, Node b) {
      return d.contains(b) && g.has_undirected(a, b);
    });
    assigned = set_union(assigned, bucket);
    buckets.push_back(std::move(bucket));
  }
  return buckets;
}

}  // namespace mpdag
