#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpdag/ancestry.hpp"
#include "mpdag/dsep.hpp"
#include "mpdag/error.hpp"
#include "mpdag/graph.hpp"
#include "mpdag/meek.hpp"
#include "mpdag/paths.hpp"

namespace mpdag {

namespace detail {

inline void check_query(const Mpdag& g, const NodeSet& A, const NodeSet& Y, const char* op) {
  require_closed(g, op);
  check_members(g.graph(), A, op);
  check_members(g.graph(), Y, op);
  if (A.empty() || Y.empty()) throw PreconditionError(std::string(op) + ": treatment and outcome must be nonempty");
  if (!disjoint(A, Y)) throw PreconditionError(std::string(op) + ": treatment and outcome overlap");
}

}  // namespace detail

struct Identification {
  bool identified;
  std::optional<NodePath> witness;  // a shortest proper possibly causal path starting with an undirected edge
};

// The effect of A on Y is identified iff no proper possibly causal path from A
// to Y starts with an undirected edge.
inline Identification is_identified(const Mpdag& g, const NodeSet& A, const NodeSet& Y) {
  detail::check_query(g, A, Y, "is_identified");
  auto paths = proper_possibly_causal_paths(g.graph(), A, Y, true);
  if (paths.empty()) return {true, std::nullopt};
  return {false, paths.front()};
}

struct Bucket {
  NodeSet nodes;
  NodeSet parents;
  friend bool operator==(const Bucket&, const Bucket&) = default;
};

// Identification formula f(y | do(a)) = int prod_i f(x_Bi | x_Pa(Bi)) dx_B.
// Two formulas are equal exactly when their canonical forms are equal.
struct GFormula {
  NodeSet treatment;
  NodeSet outcome;
  std::vector<Bucket> buckets;  // ascending by smallest member
  NodeSet marginalized;

  friend bool operator==(const GFormula&, const GFormula&) = default;

  std::string to_string(const Graph& g) const {
    auto list = [&](const NodeSet& s) {
      std::string out;
      for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + g.name(s[i]);
      return out;
    };
    std::string out;
    if (!marginalized.empty()) out += "∫ ";
    for (std::size_t i = 0; i < buckets.size(); ++i) {
      out += (i ? " " : "") + std::string("f(") + list(buckets[i].nodes);
      if (!buckets[i].parents.empty()) out += "|" + list(buckets[i].parents);
      out += ")";
    }
    if (!marginalized.empty()) {
      out += " d";
      for (std::size_t i = 0; i < marginalized.size(); ++i) out += (i ? ",": "") + g.name(marginalized[i]);
    }
    return out;
  }
};

inline GFormula g_formula(const Mpdag& g, const NodeSet& A, const NodeSet& Y) {
  detail::check_query(g, A, Y, "g_formula");
  if (!is_identified(g, A, Y).identified) throw PreconditionError("g_formula: effect is not identified");
  const Graph& graph = g.graph();

  // B = An(Y, g restricted to V \ A) \ Y, computed in original indices.
  NodeSet b = detail::reach(graph, Y, [&](Node u, Node v) { return !A.contains(v) && graph.has_directed(v, u); });
  b = set_difference(b, Y);

  GFormula f{A, Y, {}, b};
  for (auto& bucket : bucket_decomposition(graph, set_union(b, Y)))
    f.buckets.push_back({bucket, parents_of(graph, bucket)});
  return f;
}

// Possible descendants of every non-treatment node on a proper possibly causal path from A to Y.
inline NodeSet forbidden_set(const Mpdag& g, const NodeSet& A, const NodeSet& Y) {
  detail::check_query(g, A, Y, "forbidden_set");
  NodeSet on_paths;
  for_each_proper_possibly_causal_path(g.graph(), A, Y, false, [&](const NodePath& p) {
    for (std::size_t i = 1; i < p.nodes.size(); ++i) on_paths.insert(p.nodes[i]);
    return true;
  });
  return possible_descendants_of(g.graph(), on_paths);
}

struct AdjustmentVerdict {
  enum class Violation { none, forbidden_node, open_path };
  bool valid = false;
  Violation violation = Violation::none;
  std::optional<Node> forbidden_node;
  std::optional<NodePath> open_path;
};

namespace detail {

inline void check_adjustment_query(const Mpdag& g, const NodeSet& A, const NodeSet& Y, const NodeSet& Z,
                                   const char* op) {
  check_query(g, A, Y, op);
  check_members(g.graph(), Z, op);
  if (!disjoint(Z, set_union(A, Y))) throw PreconditionError(std::string(op) + ": Z overlaps treatment or outcome");
  if (!is_identified(g, A, Y).identified) throw PreconditionError(std::string(op) + ": effect is not identified");
}

inline AdjustmentVerdict check_adjustment(const Mpdag& g, const NodeSet& A, const NodeSet& Y, const NodeSet& Z,
                                          const NodeSet& forbidden) {
  for (Node z : Z)
    if (forbidden.contains(z))
      return {false, AdjustmentVerdict::Violation::forbidden_node, z, std::nullopt};
  std::optional<NodePath> open;
  for_each_open_definite_status_path(g.graph(), A, Y, Z, true, [&](NodePath p) {
    if (is_possibly_causal(g.graph(), p)) return true;
    open = std::move(p);
    return false;
  });
  if (open) return {false, AdjustmentVerdict::Violation::open_path, std::nullopt, std::move(open)};
  return {true, AdjustmentVerdict::Violation::none, std::nullopt, std::nullopt};
}

}  // namespace detail

// Generalized adjustment criterion: Z avoids the forbidden set and blocks
// every proper non-causal definite status path from A to Y.
inline AdjustmentVerdict is_adjustment_set(const Mpdag& g, const NodeSet& A, const NodeSet& Y, const NodeSet& Z) {
  detail::check_adjustment_query(g, A, Y, Z, "is_adjustment_set");
  return detail::check_adjustment(g, A, Y, Z, forbidden_set(g, A, Y));
}

inline constexpr std::size_t kMaxAdjustmentSearchNodes = 20;

// Tries PossAn(A u Y) \ (forbidden u A u Y) first, then every subset of the
// allowed nodes by increasing size (first in lexicographic order wins).
inline std::optional<NodeSet> find_adjustment_set(const Mpdag& g, const NodeSet& A, const NodeSet& Y) {
  detail::check_adjustment_query(g, A, Y, {}, "find_adjustment_set");
  const Graph& graph = g.graph();
  const NodeSet forbidden = forbidden_set(g, A, Y);
  const NodeSet excluded = set_union(forbidden, set_union(A, Y));

  NodeSet canonical = set_difference(possible_ancestors_of(graph, set_union(A, Y)), excluded);
  if (detail::check_adjustment(g, A, Y, canonical, forbidden).valid) return canonical;

  if (graph.size() > kMaxAdjustmentSearchNodes)
    throw ResourceError("find_adjustment_set: exhaustive search refused for more than " +
                        std::to_string(kMaxAdjustmentSearchNodes) + " nodes");
  const NodeSet candidates = set_difference(NodeSet::range(graph.size()), excluded);
  const std::size_t k = candidates.size();
  std::optional<NodeSet> found;
  for (std::size_t size = 0; size <= k && !found; ++size) {
    // Walk all index combinations of the given size in lexicographic order.
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      NodeSet z;
      for (auto i : idx) z.insert(candidates[i]);
      if (detail::check_adjustment(g, A, Y, z, forbidden).valid) {
        found = z;
        break;
      }
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == k - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  // With Y -> A the edge itself is a non-causal path nothing can block.
  if (!found && A.size() == 1 && Y.size() == 1 && !graph.has_directed(Y[0], A[0]))
    throw InternalInconsistency("find_adjustment_set: no adjustment set for a single treatment and outcome");
  return found;
}

}  // namespace mpdag
