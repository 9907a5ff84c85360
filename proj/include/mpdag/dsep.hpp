#pragma once

#include <optional>
#include <vector>

#include "mpdag/ancestry.hpp"
#include "mpdag/error.hpp"
#include "mpdag/graph.hpp"
#include "mpdag/paths.hpp"

namespace mpdag {

// Enumerates definite status paths from A to Y that are d-connecting given Z.
//
// Interior nodes never lie in A. When `through_outcomes` is false they also
// avoid Y, which is enough for set separation since a sub-path of a
// d-connecting path is d-connecting. Prefixes are pruned as soon as an
// interior node is either of indefinite status or blocked. Colliders are open
// when one of their descendants (along directed paths) is in Z; that lookup is
// computed once per call.
template <typename Visitor>
void for_each_open_definite_status_path(const Graph& g, const NodeSet& A, const NodeSet& Y, const NodeSet& Z,
                                        bool through_outcomes, Visitor&& visit) {
  std::vector<bool> collider_open(g.size(), false);
  for (Node v = 0; v < g.size(); ++v)
    collider_open[v] = !disjoint(descendants_of(g, NodeSet{v}), Z);

  std::vector<Node> path;
  std::vector<bool> on_path(g.size(), false);
  bool stop = false;

  auto open_at = [&](Node prev, Node mid, Node next) -> bool {
    if (is_collider(g, prev, mid, next)) return collider_open[mid];
    if (is_definite_noncollider(g, prev, mid, next)) return !Z.contains(mid);
    return false;
  };

  auto extend = [&](auto&& self) -> void {
    Node u = path.back();
    for (Node v = 0; v < g.size() && !stop; ++v) {
      if (on_path[v] || A.contains(v) || !g.adjacent(u, v)) continue;
      if (path.size() >= 2 && !open_at(path[path.size() - 2], u, v)) continue;
      path.push_back(v);
      bool is_target = Y.contains(v);
      if (is_target && !visit(NodePath{path})) stop = true;
      if (!stop && (!is_target || through_outcomes)) {
        on_path[v] = true;
        self(self);
        on_path[v] = false;
      }
      path.pop_back();
    }
  };

  for (Node a : A) {
    if (stop) break;
    path.assign(1, a);
    on_path[a] = true;
    extend(extend);
    on_path[a] = false;
  }
}

namespace detail {

inline void check_disjoint_triple(const Graph& g, const NodeSet& A, const NodeSet& Y, const NodeSet& Z,
                                  const char* op) {
  check_members(g, A, op);
  check_members(g, Y, op);
  check_members(g, Z, op);
  if (!disjoint(A, Y) || !disjoint(A, Z) || !disjoint(Y, Z))
    throw PreconditionError(std::string(op) + ": node sets must be pairwise disjoint");
}

}  // namespace detail

// A d-connecting definite status path between A and Y given Z, if any.
inline std::optional<NodePath> d_connecting_path(const Graph& g, const NodeSet& A, const NodeSet& Y,
                                                 const NodeSet& Z) {
  detail::check_disjoint_triple(g, A, Y, Z, "d_separated");
  std::optional<NodePath> found;
  for_each_open_definite_status_path(g, A, Y, Z, false, [&](NodePath p) {
    found = std::move(p);
    return false;
  });
  return found;
}

// Separation in the sense of definite status paths; valid for DAGs, CPDAGs and MPDAGs.
inline bool d_separated(const Graph& g, const NodeSet& A, const NodeSet& Y, const NodeSet& Z) {
  return !d_connecting_path(g, A, Y, Z).has_value();
}

// Reachability ("Bayes ball") check for fully directed graphs.
inline bool d_separated_dag(const Graph& g, const NodeSet& A, const NodeSet& Y, const NodeSet& Z) {
  detail::check_disjoint_triple(g, A, Y, Z, "d_separated_dag");
  if (!g.is_directed()) throw PreconditionError("d_separated_dag: graph has undirected edges");
  const NodeSet z_ancestors = ancestors_of(g, Z);

  // State: (node, arrived_from_child). Arriving from a child means travelling against an edge.
  std::vector<bool> visited_up(g.size(), false), visited_down(g.size(), false);
  std::vector<std::pair<Node, bool>> stack;
  for (Node a : A) stack.emplace_back(a, true);
  while (!stack.empty()) {
    auto [v, from_child] = stack.back();
    stack.pop_back();
    auto& seen = from_child ? visited_up : visited_down;
    if (seen[v]) continue;
    seen[v] = true;
    if (!Z.contains(v) && Y.contains(v)) return false;
    if (from_child) {
      if (Z.contains(v)) continue;
      for (Node p : g.parents(v)) stack.emplace_back(p, true);
      for (Node c : g.children(v)) stack.emplace_back(c, false);
    } else {
      if (!Z.contains(v))
        for (Node c : g.children(v)) stack.emplace_back(c, false);
      if (z_ancestors.contains(v))
        for (Node p : g.parents(v)) stack.emplace_back(p, true);
    }
  }
  return true;
}

}  // namespace mpdag
