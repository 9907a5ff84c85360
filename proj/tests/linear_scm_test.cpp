#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace mpdag;
using namespace mpdag::testing;

namespace {

LinearScm linear_model() { return make_scm(load_model(data_path("linear_scm.txt"))); }

std::vector<double> sorted_scalars(const std::vector<EffectEstimate>& es) {
  std::vector<double> out;
  for (const auto& e : es) out.push_back(e.theta.at(0));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<double>> sorted_vectors(const std::vector<EffectEstimate>& es) {
  std::vector<std::vector<double>> out;
  for (const auto& e : es) out.push_back(e.theta);
  std::sort(out.begin(), out.end());
  return out;
}

void expect_near_all(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "entry " << i;
}

}  // namespace

TEST(Scm, ConstructorChecks) {
  Graph d = parse_graph("A -> Y\n");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
  b(1, 0) = 1.0;
  EXPECT_NO_THROW(LinearScm(d, b, Eigen::Vector2d(1, 1)));
  EXPECT_THROW(LinearScm(d, b, Eigen::Vector2d(1, 0)), PreconditionError);
  Eigen::MatrixXd wrong = Eigen::MatrixXd::Zero(2, 2);
  wrong(0, 1) = 1.0;
  EXPECT_THROW(LinearScm(d, wrong, Eigen::Vector2d(1, 1)), PreconditionError);
  EXPECT_THROW(LinearScm(parse_graph("A -- Y\n"), b, Eigen::Vector2d(1, 1)), PreconditionError);
}

TEST(TrueEffect, LinearModel) {
  LinearScm m = linear_model();
  const Graph& g = m.dag();
  expect_near_all(true_total_effect(m, nodes(g, {"A1"}), g.at("Y")).theta, {3.0}, 1e-12);
  expect_near_all(true_total_effect(m, nodes(g, {"A1", "A2"}), g.at("Y")).theta, {2.0, 1.0}, 1e-12);
  expect_near_all(true_total_effect(m, nodes(g, {"A2"}), g.at("V")).theta, {2.0}, 1e-12);
  expect_near_all(true_total_effect(m, nodes(g, {"V"}), g.at("Y")).theta, {0.0}, 1e-12);
}

TEST(TrueEffect, ZeroCoefficients) {
  Graph d = parse_graph("A -> B\nB -> Y\n");
  LinearScm m(d, Eigen::MatrixXd::Zero(3, 3), Eigen::Vector3d::Ones());
  expect_near_all(true_total_effect(m, nodes(d, {"A"}), d.at("Y")).theta, {0.0}, 0);
  EXPECT_THROW(true_total_effect(m, nodes(d, {"A"}), d.at("A")), PreconditionError);
}

TEST(TrueEffect, SumOverDirectedPaths) {
  // A -> M -> Y (0.5 * 3) plus A -> Y (-1).
  ModelSpec spec = parse_model("A -> M 0.5\nM -> Y 3\nA -> Y -1\nC -> A 2\nC -> Y 4\n");
  LinearScm m = make_scm(spec);
  expect_near_all(true_total_effect(m, nodes(m.dag(), {"A"}), m.dag().at("Y")).theta, {0.5}, 1e-12);
}

TEST(Covariance, TwoNodesStandardized) {
  LinearScm m = make_scm(parse_model("A -> Y 0.6\nY ~ 0.64\n"));
  Eigen::MatrixXd cov = covariance(m);
  EXPECT_NEAR(cov(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(cov(1, 1), 1.0, 1e-12);
  EXPECT_NEAR(cov(0, 1), 0.6, 1e-12);
  EXPECT_NEAR(wright_covariance(m)(0, 1), 0.6, 1e-12);
}

TEST(Covariance, WrightSumOfTreks) {
  // Cov(A, Y) = c + a1 * a2 with a confounder V: one directed path and one trek.
  LinearScm s = standardize(make_scm(parse_model("V -> A 0.7\nV -> Y -0.4\nA -> Y 1.3\n")));
  const Graph& g = s.dag();
  Node a = g.at("A"), v = g.at("V"), y = g.at("Y");
  double expected = s.coefficient(a, y) + s.coefficient(v, a) * s.coefficient(v, y);
  EXPECT_NEAR(covariance(s)(a, y), expected, 1e-12);
  EXPECT_NEAR(wright_covariance(s)(a, y), expected, 1e-12);
}

TEST(Covariance, StandardizedLinearModelWrightAgrees) {
  LinearScm s = standardize(linear_model());
  Eigen::MatrixXd cov = covariance(s);
  EXPECT_LT((cov.diagonal() - Eigen::VectorXd::Ones(4)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((cov - wright_covariance(s)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Covariance, StandardizeKeepsEffectsUpToScale) {
  LinearScm m = linear_model();
  LinearScm s = standardize(m);
  const Graph& g = m.dag();
  Eigen::VectorXd sd = covariance(m).diagonal().cwiseSqrt();
  double raw = true_total_effect(m, nodes(g, {"A1"}), g.at("Y")).theta[0];
  double scaled = true_total_effect(s, nodes(g, {"A1"}), g.at("Y")).theta[0];
  EXPECT_NEAR(scaled, raw * sd(g.at("A1")) / sd(g.at("Y")), 1e-12);
}

TEST(Sample, DeterministicUnderSeed) {
  LinearScm m = linear_model();
  Dataset a = sample(m, 50, 11), b = sample(m, 50, 11), c = sample(m, 50, 12);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(a.columns, m.dag().names());
  EXPECT_EQ(a.seed, 11u);
}

TEST(Sample, SingleRow) {
  Dataset d = sample(linear_model(), 1, 3);
  ASSERT_EQ(d.values.rows(), 1);
  EXPECT_TRUE(d.values.allFinite());
  EXPECT_THROW(sample(linear_model(), 0, 3), PreconditionError);
}

TEST(Sample, Covariance500WithinFourStandardErrors) {
  // Var(Y) is 11 here, so the bound is per entry: the Gaussian standard error
  // of a sample covariance is sqrt((s_ii s_jj + s_ij^2) / (n - 1)).
  LinearScm m = linear_model();
  const std::size_t n = 500;
  Eigen::MatrixXd cov = covariance(m);
  Eigen::MatrixXd emp = empirical_covariance(sample(m, n, 0), m.dag());
  for (Eigen::Index i = 0; i < cov.rows(); ++i)
    for (Eigen::Index j = 0; j < cov.cols(); ++j) {
      double se = std::sqrt((cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / (n - 1));
      EXPECT_LT(std::abs(emp(i, j) - cov(i, j)), 4 * se) << i << "," << j;
    }
}

TEST(Sample, StandardizedCovariance500) {
  LinearScm s = standardize(linear_model());
  Eigen::MatrixXd emp = empirical_covariance(sample(s, 500, 0), s.dag());
  EXPECT_LT((emp - covariance(s)).cwiseAbs().maxCoeff(), 0.25);
}

TEST(Sample, CsvHasHeader) {
  std::ostringstream os;
  sample(linear_model(), 2, 1).write_csv(os);
  std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "A1,A2,V,Y");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(Estimate, LinearModelSingleTreatmentPopulation) {
  LinearScm m = linear_model();
  Mpdag cpdag = fixture("linear_cpdag.txt");
  const Graph& g = cpdag.graph();
  auto effects = possible_effects(covariance(m), cpdag, nodes(g, {"A1"}), g.at("Y"));
  ASSERT_EQ(effects.size(), 4u);
  expect_near_all(sorted_scalars(effects), {0.0, 1.8, 2.0, 3.0}, 1e-9);
  for (std::size_t i = 0; i < effects.size(); ++i) {
    EXPECT_EQ(effects[i].source, i);
    EXPECT_EQ(effects[i].estimator, EffectEstimate::Estimator::regression);
  }
}

TEST(Estimate, LinearModelJointPopulation) {
  LinearScm m = linear_model();
  Mpdag cpdag = fixture("linear_cpdag.txt");
  const Graph& g = cpdag.graph();
  auto got = sorted_vectors(possible_effects(covariance(m), cpdag, nodes(g, {"A1", "A2"}), g.at("Y")));
  std::vector<std::vector<double>> want{{0, 0}, {0, 2}, {2, 1}, {3, 0}};
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) expect_near_all(got[i], want[i], 1e-9);
}

TEST(Estimate, LinearModelSample100) {
  LinearScm m = linear_model();
  Mpdag cpdag = fixture("linear_cpdag.txt");
  const Graph& g = cpdag.graph();
  Eigen::MatrixXd cov = empirical_covariance(sample(m, 100, 0), g);
  expect_near_all(sorted_scalars(possible_effects(cov, cpdag, nodes(g, {"A1"}), g.at("Y"))), {0.0, 1.8, 2.0, 3.0},
                  0.3);
}

TEST(Estimate, RequiresIdentification) {
  Mpdag cpdag = fixture("linear_cpdag.txt");
  const Graph& g = cpdag.graph();
  EXPECT_THROW(estimate_effect(covariance(linear_model()), cpdag, nodes(g, {"A1"}), g.at("Y")), PreconditionError);
}

TEST(Estimate, IdentifiedGraphGivesSingleEstimate) {
  LinearScm m = linear_model();
  Mpdag d = meek_closure(m.dag());
  const Graph& g = d.graph();
  auto effects = possible_effects(covariance(m), d, nodes(g, {"A1"}), g.at("Y"));
  ASSERT_EQ(effects.size(), 1u);
  EXPECT_EQ(effects[0].theta, estimate_effect(covariance(m), d, nodes(g, {"A1"}), g.at("Y")).theta);
}

TEST(Estimate, RankDeficientRegression) {
  // Y copies A exactly, so regressing on both is singular.
  Graph g = parse_graph("A -> Y\nA -> Z\nY -> Z\n");
  Eigen::MatrixXd cov = Eigen::MatrixXd::Ones(3, 3);
  EXPECT_THROW(effect_from_dag(g, cov, nodes(g, {"Y"}), g.at("Z")), RankDeficientError);
}

TEST(Estimate, ConvergesWithSampleSize) {
  LinearScm m = linear_model();
  Mpdag d = meek_closure(m.dag());
  const Graph& g = d.graph();
  const NodeSet A = nodes(g, {"A1"});
  double previous = 1e9;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    std::vector<double> errors;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Eigen::MatrixXd cov = empirical_covariance(sample(m, n, seed), g);
      errors.push_back(std::abs(estimate_effect(cov, d, A, g.at("Y")).theta[0] - 3.0));
    }
    std::nth_element(errors.begin(), errors.begin() + 25, errors.end());
    EXPECT_LT(errors[25], previous) << "n=" << n;
    previous = errors[25];
  }
}

TEST(Gformula, MatchesExtensionAndAdjustmentPopulation) {
  LinearScm m = linear_model();
  Mpdag cpdag = fixture("linear_cpdag.txt");
  const Graph& g = cpdag.graph();
  NodeSet A = nodes(g, {"A1"});
  Eigen::MatrixXd cov = covariance(m);
  for (const Mpdag& member : id_graphs(cpdag, A, nodes(g, {"Y"})).graphs) {
    auto f = g_formula(member, A, nodes(g, {"Y"}));
    expect_near_all(gformula_effect(cov, g, f), estimate_effect(cov, member, A, g.at("Y")).theta, 1e-8);
    if (auto z = find_adjustment_set(member, A, nodes(g, {"Y"})))
      expect_near_all(adjustment_effect(g, cov, A, g.at("Y"), *z), gformula_effect(cov, g, f), 1e-8);
  }
}

TEST(Distinct, Tolerance) {
  EXPECT_EQ(count_distinct({{1.0}, {1.0 + 1e-9}, {2.0}}, 1e-6), 2u);
  EXPECT_EQ(count_distinct({}, 1e-6), 0u);
  EXPECT_FALSE(effects_close({1.0, 2.0}, {1.0}, 1.0));
}

TEST(Coefficients, MagnitudeRange) {
  std::mt19937_64 rng(1);
  Graph d = parse_graph("A -> B\nA -> C\nB -> C\n");
  bool negative = false, positive = false;
  for (int i = 0; i < 200; ++i) {
    Eigen::MatrixXd b = draw_coefficients(d, rng);
    for (auto [u, v] : d.directed_edges()) {
      double c = b(v, u);
      EXPECT_GE(std::abs(c), 0.5);
      EXPECT_LE(std::abs(c), 1.5);
      (c < 0 ? negative : positive) = true;
    }
  }
  EXPECT_TRUE(negative && positive);
}

TEST(RandomInstance, Deterministic) {
  auto a = random_instance_retrying(10, 2.0, 17);
  auto b = random_instance_retrying(10, 2.0, 17);
  EXPECT_EQ(a.scm.dag(), b.scm.dag());
  EXPECT_EQ(a.scm.coefficients(), b.scm.coefficients());
  EXPECT_EQ(a.treatment, b.treatment);
  EXPECT_EQ(a.outcome, b.outcome);
}

TEST(RandomInstance, TwoNodes) {
  auto inst = random_instance_retrying(2, 1.0, 4);
  EXPECT_EQ(inst.cpdag.graph().undirected_edges().size(), 1u);
  EXPECT_EQ(inst.treatment.size(), 1u);
  EXPECT_THROW(random_instance(1, 1.0, 0), PreconditionError);
  EXPECT_THROW(random_instance(5, 1.0, 0, 5), PreconditionError);
}

TEST(RandomInstance, BatchInvariants) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t k = 1 + seed % 4;
    auto inst = random_instance_retrying(10, 2.0, seed, k);
    const Graph& d = inst.scm.dag();
    ASSERT_EQ(d.size(), 10u);
    EXPECT_EQ(d.names().front(), "V01");
    EXPECT_TRUE(d.is_directed());
    EXPECT_FALSE(d.find_directed_cycle());
    EXPECT_EQ(inst.cpdag, cpdag_of_dag(d));
    EXPECT_EQ(inst.treatment.size(), k);
    EXPECT_FALSE(inst.treatment.contains(inst.outcome));
    EXPECT_FALSE(is_identified(inst.cpdag, inst.treatment, NodeSet{inst.outcome}).identified);
    EXPECT_EQ(inst.scm.noise(), Eigen::VectorXd::Ones(10));
    for (auto [u, v] : d.directed_edges()) {
      double c = inst.scm.coefficient(u, v);
      EXPECT_TRUE(std::abs(c) >= 0.5 && std::abs(c) <= 1.5);
    }
  }
}
