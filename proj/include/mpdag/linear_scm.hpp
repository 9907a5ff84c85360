#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpdag/error.hpp"
#include "mpdag/graph.hpp"
#include "mpdag/graph_io.hpp"
#include "mpdag/ident.hpp"
#include "mpdag/idgraphs.hpp"
#include "mpdag/meek.hpp"

namespace mpdag {

// X = B X + e with B(head, tail) the coefficient of tail -> head and
// e independent with variances `noise`.
class LinearScm {
 public:
  LinearScm(Graph dag, Eigen::MatrixXd coefficients, Eigen::VectorXd noise)
      : dag_(std::move(dag)), b_(std::move(coefficients)), noise_(std::move(noise)) {
    detail::require_dag(dag_, "LinearScm");
    const auto n = static_cast<Eigen::Index>(dag_.size());
    if (b_.rows() != n || b_.cols() != n || noise_.size() != n)
      throw PreconditionError("LinearScm: parameter dimensions do not match the DAG");
    for (Node h = 0; h < dag_.size(); ++h) {
      if (!(noise_(h) > 0)) throw PreconditionError("LinearScm: noise variance of '" + dag_.name(h) + "' is not positive");
      for (Node t = 0; t < dag_.size(); ++t)
        if (b_(h, t) != 0 && !dag_.has_directed(t, h))
          throw PreconditionError("LinearScm: coefficient on missing edge " + dag_.name(t) + " -> " + dag_.name(h));
    }
  }

  const Graph& dag() const noexcept { return dag_; }
  const Eigen::MatrixXd& coefficients() const noexcept { return b_; }
  const Eigen::VectorXd& noise() const noexcept { return noise_; }
  double coefficient(Node tail, Node head) const { return b_(head, tail); }

 private:
  Graph dag_;
  Eigen::MatrixXd b_;
  Eigen::VectorXd noise_;
};

inline LinearScm make_scm(const ModelSpec& spec) {
  Graph dag = build_graph(spec.edges);
  const auto n = static_cast<Eigen::Index>(dag.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd noise = Eigen::VectorXd::Ones(n);
  for (auto [u, v] : dag.directed_edges()) {
    auto it = spec.coefficients.find({dag.name(u), dag.name(v)});
    b(v, u) = it == spec.coefficients.end() ? 1.0 : it->second;
  }
  for (const auto& [name, var] : spec.variances) noise(dag.at(name)) = var;
  return LinearScm(std::move(dag), std::move(b), std::move(noise));
}

struct EffectEstimate {
  enum class Estimator { oracle, regression };
  std::vector<double> theta;  // one entry per treatment node, in node order
  std::size_t source = 0;     // index of the graph it came from
  Estimator estimator = Estimator::oracle;
};

// Cut the edges into every treated node, invert, and read off row y.
inline std::vector<double> total_effect_from_matrix(const Eigen::MatrixXd& b, const NodeSet& A, Node y) {
  Eigen::MatrixXd cut = b;
  for (Node a : A) cut.row(a).setZero();
  const auto n = cut.rows();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(n, n) - cut);
  if (!lu.isInvertible()) throw InternalInconsistency("total effect: I - B is singular");
  Eigen::MatrixXd t = lu.inverse();
  std::vector<double> theta;
  for (Node a : A) theta.push_back(t(y, a));
  return theta;
}

namespace detail {

inline void check_effect_query(const Graph& g, const NodeSet& A, Node y, const char* op) {
  check_members(g, A, op);
  if (y >= g.size()) throw GraphError(std::string(op) + ": unknown outcome index");
  if (A.empty()) throw PreconditionError(std::string(op) + ": empty treatment set");
  if (A.contains(y)) throw PreconditionError(std::string(op) + ": outcome is also treated");
}

}  // namespace detail

inline EffectEstimate true_total_effect(const LinearScm& m, const NodeSet& A, Node y) {
  detail::check_effect_query(m.dag(), A, y, "true_total_effect");
  return {total_effect_from_matrix(m.coefficients(), A, y), 0, EffectEstimate::Estimator::oracle};
}

inline Eigen::MatrixXd covariance(const LinearScm& m) {
  const auto n = static_cast<Eigen::Index>(m.dag().size());
  Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(n, n) - m.coefficients()).inverse();
  return inv * m.noise().asDiagonal() * inv.transpose();
}

// Rescales every variable to unit variance; the DAG is unchanged.
inline LinearScm standardize(const LinearScm& m) {
  Eigen::MatrixXd cov = covariance(m);
  Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  Eigen::MatrixXd b = m.coefficients();
  for (Eigen::Index h = 0; h < b.rows(); ++h)
    for (Eigen::Index t = 0; t < b.cols(); ++t) b(h, t) *= sd(t) / sd(h);
  Eigen::VectorXd noise = m.noise().cwiseQuotient(cov.diagonal());
  return LinearScm(m.dag(), std::move(b), std::move(noise));
}

// Sum over collider-free paths of coefficient products. Equals the covariance
// only when every variable has unit variance.
inline Eigen::MatrixXd wright_covariance(const LinearScm& m) {
  const Graph& g = m.dag();
  const std::size_t n = g.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  std::vector<bool> on_path(n, false);

  // `down` is true once the path has taken an edge forward; after that it may
  // never go against an edge again, which is exactly the no-collider rule.
  auto walk = [&](auto&& self, Node start, Node u, bool down, double product) -> void {
    for (Node v = 0; v < n; ++v) {
      if (on_path[v]) continue;
      double step;
      bool next_down;
      if (g.has_directed(u, v)) {
        step = m.coefficient(u, v);
        next_down = true;
      } else if (g.has_directed(v, u) && !down) {
        step = m.coefficient(v, u);
        next_down = false;
      } else {
        continue;
      }
      out(start, v) += product * step;
      on_path[v] = true;
      self(self, start, v, next_down, product * step);
      on_path[v] = false;
    }
  };
  for (Node s = 0; s < n; ++s) {
    on_path[s] = true;
    walk(walk, s, s, false, 1.0);
    on_path[s] = false;
  }
  return out;
}

struct Dataset {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // rows are samples
  std::uint64_t seed = 0;

  void write_csv(std::ostream& os) const {
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j];
    os << '\n';
    os.precision(10);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      for (Eigen::Index j = 0; j < values.cols(); ++j) os << (j ? "," : "") << values(i, j);
      os << '\n';
    }
  }
};

inline Dataset sample(const LinearScm& m, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("sample: n must be at least 1");
  const Graph& g = m.dag();
  const auto order = g.topological_order();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset data{g.names(), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(g.size())),
               seed};
  for (std::size_t i = 0; i < n; ++i)
    for (Node v : order) {
      double x = std::sqrt(m.noise()(v)) * normal(rng);
      for (Node p : g.parents(v)) x += m.coefficient(p, v) * data.values(i, p);
      data.values(i, v) = x;
    }
  return data;
}

// Sample covariance (divisor n - 1, or n when there is one row), with
// columns permuted into the node order of g.
inline Eigen::MatrixXd empirical_covariance(const Dataset& data, const Graph& g) {
  std::vector<Eigen::Index> col(g.size());
  for (Node v = 0; v < g.size(); ++v) {
    auto it = std::find(data.columns.begin(), data.columns.end(), g.name(v));
    if (it == data.columns.end()) throw PreconditionError("empirical_covariance: no column for '" + g.name(v) + "'");
    col[v] = it - data.columns.begin();
  }
  Eigen::MatrixXd x(data.values.rows(), static_cast<Eigen::Index>(g.size()));
  for (Node v = 0; v < g.size(); ++v) x.col(v) = data.values.col(col[v]);
  Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const double denom = x.rows() > 1 ? static_cast<double>(x.rows() - 1) : 1.0;
  return x.transpose() * x / denom;
}

namespace detail {

inline void check_cov(const Graph& g, const Eigen::MatrixXd& cov, const char* op) {
  const auto n = static_cast<Eigen::Index>(g.size());
  if (cov.rows() != n || cov.cols() != n) throw PreconditionError(std::string(op) + ": covariance has wrong size");
}

// Least-squares coefficients of `targets` on `regressors` from a covariance
// matrix; one row per target.
inline Eigen::MatrixXd regress(const Graph& g, const Eigen::MatrixXd& cov, const NodeSet& targets,
                               const NodeSet& regressors) {
  const auto k = static_cast<Eigen::Index>(regressors.size());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(targets.size()), k);
  if (k == 0) return out;
  Eigen::MatrixXd sxx(k, k), sxy(k, static_cast<Eigen::Index>(targets.size()));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) sxx(i, j) = cov(regressors[i], regressors[j]);
    for (std::size_t t = 0; t < targets.size(); ++t) sxy(i, t) = cov(regressors[i], targets[t]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sxx);
  if (qr.rank() < k) {
    std::string who;
    for (Node t : targets) who += (who.empty() ? "" : ",") + g.name(t);
    throw RankDeficientError("regression of '" + who + "' on its regressors is rank deficient");
  }
  return qr.solve(sxy).transpose();
}

}  // namespace detail

// Fits each node on its parents in d and returns the implied total effect.
inline std::vector<double> effect_from_dag(const Graph& d, const Eigen::MatrixXd& cov, const NodeSet& A, Node y) {
  detail::check_cov(d, cov, "effect_from_dag");
  detail::check_effect_query(d, A, y, "effect_from_dag");
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Node v = 0; v < d.size(); ++v) {
    if (A.contains(v)) continue;  // cut anyway
    NodeSet pa = d.parents(v);
    Eigen::MatrixXd beta = detail::regress(d, cov, NodeSet{v}, pa);
    for (std::size_t i = 0; i < pa.size(); ++i) b(v, pa[i]) = beta(0, static_cast<Eigen::Index>(i));
  }
  return total_effect_from_matrix(b, A, y);
}

inline EffectEstimate estimate_effect(const Eigen::MatrixXd& cov, const Mpdag& g, const NodeSet& A, Node y) {
  if (!is_identified(g, A, NodeSet{y}).identified)
    throw PreconditionError("estimate_effect: effect is not identified");
  return {effect_from_dag(consistent_extension(g), cov, A, y), 0, EffectEstimate::Estimator::regression};
}

// Evaluates the bucket formula: each bucket is regressed jointly on its
// parents, and the resulting linear system is solved for the effect.
inline std::vector<double> gformula_effect(const Eigen::MatrixXd& cov, const Graph& g, const GFormula& f) {
  detail::check_cov(g, cov, "gformula_effect");
  if (f.outcome.size() != 1) throw PreconditionError("gformula_effect: single outcome required");
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (const Bucket& bucket : f.buckets) {
    Eigen::MatrixXd beta = detail::regress(g, cov, bucket.nodes, bucket.parents);
    for (std::size_t i = 0; i < bucket.nodes.size(); ++i)
      for (std::size_t j = 0; j < bucket.parents.size(); ++j)
        b(bucket.nodes[i], bucket.parents[j]) = beta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return total_effect_from_matrix(b, f.treatment, f.outcome[0]);
}

// Coefficients of A in the regression of y on A and Z.
inline std::vector<double> adjustment_effect(const Graph& g, const Eigen::MatrixXd& cov, const NodeSet& A, Node y,
                                             const NodeSet& Z) {
  detail::check_cov(g, cov, "adjustment_effect");
  detail::check_effect_query(g, A, y, "adjustment_effect");
  NodeSet regressors = set_union(A, Z);
  Eigen::MatrixXd beta = detail::regress(g, cov, NodeSet{y}, regressors);
  std::vector<double> theta;
  for (Node a : A) {
    auto pos = std::find(regressors.begin(), regressors.end(), a) - regressors.begin();
    theta.push_back(beta(0, pos));
  }
  return theta;
}

// One estimate per IDGraphs output, in the canonical order of the graphs.
inline std::vector<EffectEstimate> possible_effects(const Eigen::MatrixXd& cov, const Mpdag& g, const NodeSet& A,
                                                    Node y) {
  auto result = id_graphs(g, A, NodeSet{y});
  std::vector<EffectEstimate> out;
  for (std::size_t i = 0; i < result.graphs.size(); ++i) {
    out.push_back(estimate_effect(cov, result.graphs[i], A, y));
    out.back().source = i;
  }
  return out;
}

inline bool effects_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

// Number of distinct vectors, where two vectors within `tol` (max-abs) of a
// kept representative count as the same.
inline std::size_t count_distinct(const std::vector<std::vector<double>>& values, double tol) {
  std::vector<std::vector<double>> kept;
  for (const auto& v : values)
    if (std::none_of(kept.begin(), kept.end(), [&](const auto& k) { return effects_close(k, v, tol); }))
      kept.push_back(v);
  return kept.size();
}

// Magnitudes uniform on [0.5, 1.5], random sign.
inline Eigen::MatrixXd draw_coefficients(const Graph& dag, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  std::bernoulli_distribution negative(0.5);
  const auto n = static_cast<Eigen::Index>(dag.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : dag.directed_edges()) {
    double c = magnitude(rng);
    b(v, u) = negative(rng) ? -c : c;
  }
  return b;
}

struct RandomInstance {
  LinearScm scm;
  Mpdag cpdag;
  NodeSet treatment;
  Node outcome;
};

inline std::vector<std::string> padded_names(std::size_t p) {
  const std::size_t width = std::to_string(p).size();
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= p; ++i) {
    std::string num = std::to_string(i);
    names.push_back("V" + std::string(width - num.size(), '0') + num);
  }
  return names;
}

inline constexpr std::size_t kRejectionBudget = 1000;
inline constexpr std::size_t kSeedRetries = 100;

// Erdos-Renyi DAG with edge probability deg / (p - 1) over a random causal
// order, random coefficients, unit noise; (A, y) redrawn until the effect is
// not identified in the CPDAG.
inline RandomInstance random_instance(std::size_t p, double avg_degree, std::uint64_t seed,
                                      std::size_t num_treatments = 1) {
  if (p < 2) throw PreconditionError("random_instance: need at least 2 nodes");
  if (num_treatments == 0 || num_treatments >= p)
    throw PreconditionError("random_instance: treatment count must be in [1, p-1]");
  std::mt19937_64 rng(seed);
  Graph dag(padded_names(p));
  std::vector<Node> order(p);
  std::iota(order.begin(), order.end(), Node{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution edge(std::min(1.0, avg_degree / static_cast<double>(p - 1)));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (edge(rng)) dag.add_directed(order[i], order[j]);

  Eigen::MatrixXd b = draw_coefficients(dag, rng);
  LinearScm scm(dag, std::move(b), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(p)));
  Mpdag cpdag = cpdag_of_dag(dag);

  if (cpdag.graph().is_directed())
    throw ResourceError("random_instance: every effect is identified for seed " + std::to_string(seed));
  std::vector<Node> nodes(p);
  std::iota(nodes.begin(), nodes.end(), Node{0});
  for (std::size_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
    std::shuffle(nodes.begin(), nodes.end(), rng);
    NodeSet A(std::vector<Node>(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(num_treatments)));
    Node y = nodes[num_treatments];
    if (!is_identified(cpdag, A, NodeSet{y}).identified) return {std::move(scm), std::move(cpdag), A, y};
  }
  throw ResourceError("random_instance: no unidentified (A, Y) found for seed " + std::to_string(seed));
}

// Retries random_instance on derived seeds until one succeeds.
inline RandomInstance random_instance_retrying(std::size_t p, double avg_degree, std::uint64_t seed,
                                               std::size_t num_treatments = 1) {
  std::mt19937_64 seeds(seed);
  std::uint64_t s = seed;
  for (std::size_t attempt = 0; attempt < kSeedRetries; ++attempt, s = seeds()) {
    try {
      return random_instance(p, avg_degree, s, num_treatments);
    } catch (const ResourceError&) {
    }
  }
  throw ResourceError("random_instance: gave up after " + std::to_string(kSeedRetries) + " seeds from " +
                      std::to_string(seed));
}

}  // namespace mpdag
