#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "mpdag/error.hpp"
#include "mpdag/idgraphs.hpp"
#include "mpdag/linear_scm.hpp"
#include "mpdag/meek.hpp"

namespace mpdag {

struct SimulationConfig {
  std::size_t p = 10;
  double degree = 2.0;
  std::size_t num_treatments = 1;
  std::size_t samples = 500;
  std::size_t max_redraws = 3;
  double tie_tolerance = 1e-6;
};

// Methods are indexed 0..3 for 1..4: all DAGs, edges at A, edges
// at A toward proper possibly causal paths, IDGraphs.
struct SimulationRecord {
  std::uint64_t seed = 0;
  std::size_t p = 0;
  double degree = 0;
  std::size_t num_treatments = 0;
  std::size_t samples = 0;
  std::vector<std::string> treatment;
  std::string outcome;
  std::size_t m = 0;
  std::array<std::size_t, 4> graphs{};    // output size per method
  std::array<std::size_t, 4> distinct{};  // distinct sample estimates per method
  std::size_t truth = 0;                  // distinct population effects over all DAGs
  std::size_t redraws = 0;
  bool match = false;                     // graphs[3] == truth
  bool tie_exhausted = false;
  std::string error;                      // nonempty when the instance could not be built
};

namespace detail {

inline std::vector<std::vector<double>> dag_effects(const std::vector<Graph>& dags, const Eigen::MatrixXd& cov,
                                                    const NodeSet& A, Node y) {
  std::vector<std::vector<double>> out;
  for (const Graph& d : dags) out.push_back(effect_from_dag(d, cov, A, y));
  return out;
}

inline std::vector<std::vector<double>> extension_effects(const std::vector<Mpdag>& graphs, const Eigen::MatrixXd& cov,
                                                          const NodeSet& A, Node y) {
  std::vector<std::vector<double>> out;
  for (const Mpdag& g : graphs) out.push_back(effect_from_dag(consistent_extension(g), cov, A, y));
  return out;
}

}  // namespace detail

inline SimulationRecord simulate_instance(const SimulationConfig& config, std::uint64_t seed) {
  SimulationRecord rec;
  rec.seed = seed;
  rec.p = config.p;
  rec.degree = config.degree;
  rec.num_treatments = config.num_treatments;
  rec.samples = config.samples;

  std::optional<RandomInstance> inst;
  try {
    inst.emplace(random_instance_retrying(config.p, config.degree, seed, config.num_treatments));
  } catch (const ResourceError& e) {
    rec.error = e.what();
    return rec;
  }
  const Graph& graph = inst->cpdag.graph();
  const NodeSet& A = inst->treatment;
  const Node y = inst->outcome;
  rec.treatment = node_names(graph, A);
  rec.outcome = graph.name(y);

  auto id = id_graphs(inst->cpdag, A, NodeSet{y});
  auto m2 = method2_graphs(inst->cpdag, A, NodeSet{y});
  auto m3 = method3_graphs(inst->cpdag, A, NodeSet{y});
  auto dags = enumerate_dags(inst->cpdag);
  rec.m = id.m;
  rec.graphs = {dags.size(), m2.size(), m3.size(), id.graphs.size()};

  // Ties between possible effects have measure zero; redraw the coefficients
  // of the true DAG when one shows up.
  std::mt19937_64 redraw_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  LinearScm scm = inst->scm;
  for (;;) {
    rec.truth = count_distinct(detail::dag_effects(dags, covariance(scm), A, y), config.tie_tolerance);
    rec.match = rec.truth == id.graphs.size();
    if (rec.match || rec.redraws == config.max_redraws) break;
    ++rec.redraws;
    scm = LinearScm(scm.dag(), draw_coefficients(scm.dag(), redraw_rng), scm.noise());
  }
  rec.tie_exhausted = !rec.match;

  const Eigen::MatrixXd cov = empirical_covariance(sample(scm, config.samples, seed), graph);
  rec.distinct = {count_distinct(detail::dag_effects(dags, cov, A, y), config.tie_tolerance),
                  count_distinct(detail::extension_effects(m2, cov, A, y), config.tie_tolerance),
                  count_distinct(detail::extension_effects(m3, cov, A, y), config.tie_tolerance),
                  count_distinct(detail::extension_effects(id.graphs, cov, A, y), config.tie_tolerance)};
  return rec;
}

inline std::size_t default_thread_count() {
  if (const char* env = std::getenv("MPDAG_THREADS")) {
    long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs one instance per seed on a pool of threads; records come back in seed order.
inline std::vector<SimulationRecord> run_simulation(const SimulationConfig& config,
                                                    const std::vector<std::uint64_t>& seeds,
                                                    std::size_t threads = default_thread_count()) {
  std::vector<SimulationRecord> out(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i; (i = next++) < seeds.size() && !failed;) {
      try {
        out[i] = simulate_instance(config, seeds[i]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::max<std::size_t>(1, std::min(threads, seeds.size())); ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace mpdag
