#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace mpdag;
using namespace mpdag::testing;

namespace {

const char* kPoint = "A -> Y\nA -- V1\nA -- V2\nV1 -- V2\nV1 -- Y\n";

Orientation req(const Graph& g, const std::string& t, const std::string& h) { return {g.at(t), g.at(h)}; }

}  // namespace

TEST(Rules, R1) {
  Mpdag g = closed("a -> b\nb -- c\n");
  EXPECT_TRUE(g.graph().has_directed(g.graph().at("b"), g.graph().at("c")));
}

TEST(Rules, R2) {
  Mpdag g = closed("a -> b\nb -> c\na -- c\n");
  EXPECT_TRUE(g.graph().has_directed(g.graph().at("a"), g.graph().at("c")));
}

TEST(Rules, R3) {
  Mpdag g = closed("d -- a\nd -- b\nd -- c\na -> c\nb -> c\n");
  const Graph& G = g.graph();
  EXPECT_TRUE(G.has_directed(G.at("d"), G.at("c")));
  EXPECT_TRUE(G.has_undirected(G.at("d"), G.at("a")));
  EXPECT_TRUE(G.has_undirected(G.at("d"), G.at("b")));
}

TEST(Rules, R4) {
  Mpdag g = closed("d -- a\nd -- b\nd -- c\na -> b\nb -> c\n");
  const Graph& G = g.graph();
  EXPECT_TRUE(G.has_directed(G.at("d"), G.at("c")));
  EXPECT_TRUE(meek::rule4(parse_graph("d -- a\nd -- b\nd -- c\na -> b\nb -> c\n"), G.at("d"), G.at("c")));
  EXPECT_FALSE(meek::rule4(parse_graph("d -- a\nd -- b\nd -- c\na -> b\nb -> c\n"), G.at("c"), G.at("d")));
}

TEST(Closure, Idempotent) {
  Mpdag g = closed(kPoint);
  EXPECT_EQ(meek_closure(g.graph()), g);
  EXPECT_TRUE(meek::is_closed(g.graph()));
}

TEST(Closure, RejectsCycle) { EXPECT_THROW(meek_closure(parse_graph("A -> B\nB -> C\nC -> A\n")), GraphError); }

TEST(Construct, CpdagPlusBackground) {
  Mpdag cpdag = fixture("small_cpdag.txt");
  auto r = construct_mpdag(cpdag, {req(cpdag.graph(), "A", "Y")});
  ASSERT_TRUE(r);
  EXPECT_EQ(r.mpdag->graph(), parse_graph(kPoint));
}

TEST(Construct, PointOrientAV1) {
  Mpdag g = closed(kPoint);
  auto r = construct_mpdag(g, {req(g.graph(), "A", "V1")});
  ASSERT_TRUE(r);
  EXPECT_EQ(r.mpdag->graph(), parse_graph("A -> V1\nA -> Y\nA -- V2\nV2 -- V1\nV1 -- Y\n"));
}

TEST(Construct, PointContradiction) {
  Mpdag g = closed(kPoint);
  auto r = construct_mpdag(g, {req(g.graph(), "Y", "A")});
  ASSERT_FALSE(r);
  EXPECT_EQ(*r.offending, req(g.graph(), "Y", "A"));
}

TEST(Construct, MissingEdgeFails) {
  Mpdag g = closed("A -- B\nB -- C\n");
  auto r = construct_mpdag(g, {req(g.graph(), "A", "C")});
  EXPECT_FALSE(r);
}

TEST(Construct, LaterRequestAgainstClosureFails) {
  // A -> B forces B -> C by R1, so C -> B can no longer be honoured.
  Mpdag g = closed("A -- B\nB -- C\n");
  auto r = construct_mpdag(g, {req(g.graph(), "A", "B"), req(g.graph(), "C", "B")});
  ASSERT_FALSE(r);
  EXPECT_EQ(*r.offending, req(g.graph(), "C", "B"));
}

TEST(Construct, RequestValidation) {
  Mpdag g = closed("A -- B\n");
  EXPECT_THROW(construct_mpdag(g, {{0, 7}}), GraphError);
  EXPECT_THROW(construct_mpdag(g, {{0, 1}, {0, 1}}), PreconditionError);
  EXPECT_THROW(construct_mpdag(Mpdag{}, {}), PreconditionError);
}

TEST(Cpdag, SmallDag) {
  Mpdag c = cpdag_of_dag(load_graph(data_path("small_dag.txt")));
  EXPECT_EQ(c.graph(), load_graph(data_path("small_cpdag.txt")));
}

TEST(Cpdag, LinearModel) {
  Mpdag c = cpdag_of_dag(build_graph(load_model(data_path("linear_scm.txt")).edges));
  EXPECT_EQ(c.graph(), load_graph(data_path("linear_cpdag.txt")));
}

TEST(Cpdag, ColliderIsKept) {
  Graph d = parse_graph("A -> C\nB -> C\n");
  EXPECT_EQ(cpdag_of_dag(d).graph(), d);
  EXPECT_THROW(cpdag_of_dag(parse_graph("A -- B\n")), PreconditionError);
}

TEST(Represented, PointDags) {
  Mpdag g = closed(kPoint);
  auto dags = brute_force_dags(g.graph());
  ASSERT_EQ(dags.size(), 7u);
  for (const auto& d : dags) EXPECT_TRUE(is_represented(d, g));
}

TEST(Represented, Negatives) {
  Mpdag g = closed(kPoint);
  EXPECT_FALSE(is_represented(parse_graph("Y -> A\nV1 -> A\nV2 -> A\nV1 -> V2\nV1 -> Y\n"), g));
  Graph extra = parse_graph("A -> Y\nA -> V1\nA -> V2\nV1 -> V2\nV1 -> Y\nV2 -> Y\n");
  EXPECT_FALSE(is_represented(extra, g));
  EXPECT_THROW(is_represented(parse_graph("A -> B\n"), g), GraphError);
}

TEST(Enumerate, PointSevenDags) {
  Mpdag g = closed(kPoint);
  auto dags = enumerate_dags(g);
  EXPECT_EQ(dags.size(), 7u);
  EXPECT_EQ(dags, brute_force_dags(g.graph()));
}

TEST(Enumerate, CompleteGraphOnThree) {
  EXPECT_EQ(enumerate_dags(closed("A -- B\nB -- C\nA -- C\n")).size(), 6u);
}

TEST(Enumerate, DagIsSingleton) {
  Graph d = load_graph(data_path("small_dag.txt"));
  auto dags = enumerate_dags(meek_closure(d));
  ASSERT_EQ(dags.size(), 1u);
  EXPECT_EQ(dags[0], d);
}

TEST(Extension, PointThird) {
  Mpdag g = closed("A -> Y\nV1 -> A\nV1 -> Y\nA -- V2\nV2 -- V1\n");
  EXPECT_EQ(consistent_extension(g), parse_graph("V1 -> A\nA -> Y\nV1 -> Y\nA -> V2\nV1 -> V2\n"));
}

TEST(Extension, TieBreakByNodeOrder) {
  EXPECT_EQ(consistent_extension(closed("A -- B\n")), parse_graph("A -> B\n"));
  Graph d = parse_graph("A -> B\nB -> C\n");
  EXPECT_EQ(consistent_extension(meek_closure(d)), d);
}

// Randomized checks against the brute-force class.
class MeekRandom : public ::testing::TestWithParam<int> {};

TEST_P(MeekRandom, ClassProperties) {
  std::mt19937_64 rng(GetParam());
  const std::size_t p = 3 + rng() % 4;
  auto inst = random_instance_retrying(p, 1.0 + (rng() % 30) / 10.0, rng(), 1);
  const Graph& dag = inst.scm.dag();
  const Mpdag cpdag = inst.cpdag;

  // Monotone, skeleton-preserving closure.
  EXPECT_TRUE(cpdag.graph().same_skeleton(dag));
  auto dags = enumerate_dags(cpdag);
  EXPECT_EQ(dags, brute_force_dags(cpdag.graph()));
  EXPECT_NE(std::find(dags.begin(), dags.end(), dag), dags.end());
  for (const auto& d : dags) {
    EXPECT_TRUE(is_represented(d, cpdag));
    EXPECT_EQ(cpdag_of_dag(d), cpdag);
  }

  // Branch completeness for every undirected edge.
  for (auto [u, v] : cpdag.graph().undirected_edges()) {
    auto fwd = construct_mpdag(cpdag, {{u, v}});
    auto bwd = construct_mpdag(cpdag, {{v, u}});
    ASSERT_TRUE(fwd && bwd);
    auto a = enumerate_dags(*fwd.mpdag), b = enumerate_dags(*bwd.mpdag);
    EXPECT_EQ(a.size() + b.size(), dags.size());
    std::vector<Graph> merged;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
    EXPECT_EQ(merged, dags);
    for (auto [x, y] : cpdag.graph().directed_edges()) EXPECT_TRUE(fwd.mpdag->graph().has_directed(x, y));
  }

  // Edge-line order does not matter.
  std::vector<std::string> lines;
  std::string text = render_graph(cpdag.graph());
  for (std::size_t pos = 0, next; (next = text.find('\n', pos)) != std::string::npos; pos = next + 1)
    lines.push_back(text.substr(pos, next - pos));
  std::shuffle(lines.begin(), lines.end(), rng);
  std::string shuffled;
  for (const auto& l : lines) shuffled += l + "\n";
  EXPECT_EQ(enumerate_dags(closed(shuffled)), dags);
}

INSTANTIATE_TEST_SUITE_P(Seeds, MeekRandom, ::testing::Range(0, 60));
