#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mpdag/mpdag.hpp"

namespace mpdag::testing {

inline std::string data_path(const std::string& file) { return std::string(MPDAG_DATA_DIR) + "/" + file; }

inline Mpdag closed(const std::string& text) { return meek_closure(parse_graph(text)); }

inline Mpdag fixture(const std::string& file) { return meek_closure(load_graph(data_path(file))); }

inline NodeSet nodes(const Graph& g, std::vector<std::string> names) { return node_set(g, names); }

inline NodePath path(const Graph& g, std::vector<std::string> names) {
  NodePath p;
  for (const auto& n : names) p.nodes.push_back(g.at(n));
  return p;
}

inline std::vector<std::string> names(const Graph& g, const NodePath& p) {
  std::vector<std::string> out;
  for (Node v : p.nodes) out.push_back(g.name(v));
  return out;
}

// Graphs written as edge lists; declaring every node keeps the node set fixed.
inline Graph graph_on(const std::vector<std::string>& all, const std::string& edges) {
  std::string text;
  for (const auto& n : all) text += n + "\n";
  return parse_graph(text + edges);
}

// [g] straight from the definition: every orientation of the undirected edges
// that is acyclic and keeps the unshielded colliders of g. No orientation rule
// is involved.
inline std::vector<Graph> brute_force_dags(const Graph& g) {
  auto und = g.undirected_edges();
  auto colliders = [](const Graph& h) {
    std::set<std::tuple<Node, Node, Node>> out;
    for (Node b = 0; b < h.size(); ++b) {
      NodeSet pa = h.parents(b);
      for (std::size_t i = 0; i < pa.size(); ++i)
        for (std::size_t j = i + 1; j < pa.size(); ++j)
          if (!h.adjacent(pa[i], pa[j])) out.emplace(pa[i], b, pa[j]);
    }
    return out;
  };
  const auto target = colliders(g);
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << und.size()); ++mask) {
    Graph d = g;
    for (std::size_t i = 0; i < und.size(); ++i) {
      auto [u, v] = und[i];
      if (mask >> i & 1) d.orient(v, u);
      else d.orient(u, v);
    }
    if (d.find_directed_cycle() || colliders(d) != target) continue;
    out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::set<std::pair<std::string, std::string>> directed_names(const Graph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [u, v] : g.directed_edges()) out.emplace(g.name(u), g.name(v));
  return out;
}

}  // namespace mpdag::testing

namespace mpdag::testing {

struct RandomCase {
  LinearScm scm;
  Mpdag cpdag;
  Mpdag g;  // contains the true DAG
  NodeSet A;
  Node y;
};

// A random CPDAG, then some of its undirected edges oriented as in the true
// DAG, so the result is an MPDAG that still contains it.
inline RandomCase random_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 1);
  const std::size_t p = 3 + rng() % 5;
  const std::size_t k = p > 3 && rng() % 3 == 0 ? 2 : 1;
  auto inst = random_instance_retrying(p, 1.0 + (rng() % 25) / 10.0, rng(), k);
  OrientationList background;
  for (auto [u, v] : inst.cpdag.graph().undirected_edges())
    if (rng() % 4 == 0) background.push_back(inst.scm.dag().has_directed(u, v) ? Orientation{u, v} : Orientation{v, u});
  auto r = construct_mpdag(inst.cpdag, background);
  if (!r) throw std::logic_error("background taken from the true DAG was rejected");
  return {inst.scm, inst.cpdag, *r.mpdag, inst.treatment, inst.outcome};
}

}  // namespace mpdag::testing

namespace mpdag {

// Readable gtest failure output.
inline void PrintTo(const Graph& g, std::ostream* os) { *os << "\n" << render_graph(g); }
inline void PrintTo(const Mpdag& g, std::ostream* os) { *os << "\n" << render_graph(g.graph()); }

}  // namespace mpdag
