// mpdag: command-line front end.
//
// Exit status: 0 on success (including an orientation FAIL, which is a
// result), 1 on a domain error, 2 on a usage error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpdag/mpdag.hpp"
#include "mpdag/serialize.hpp"

namespace {

using namespace mpdag;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

struct Query {
  NodeSet A;
  NodeSet Y;
};

Query parse_query(const Graph& g, const std::string& treat, const std::string& out) {
  Query q{node_set(g, split_list(treat)), node_set(g, split_list(out))};
  if (q.A.empty() || q.Y.empty()) throw UsageError("--treat and --out need at least one node each");
  if (!disjoint(q.A, q.Y)) throw UsageError("--treat and --out overlap");
  return q;
}

Mpdag load_mpdag(const std::string& path) { return meek_closure(load_graph(path)); }

std::string format_number(double x) {
  if (std::abs(x) < 5e-13) x = 0;
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string format_effect(const std::vector<double>& theta) {
  if (theta.size() == 1) return format_number(theta[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < theta.size(); ++i) out += (i ? "," : "") + format_number(theta[i]);
  return out + ")";
}

void print_graph(const Graph& g, bool dot) {
  std::cout << render_graph(g, dot ? GraphFormat::dot : GraphFormat::edge_list);
}

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

struct Options {
  std::string input;
  std::string background;
  std::string treat;
  std::string out;
  std::string set;
  bool find = false;
  bool json = false;
  bool dot = false;
  bool verify = false;
  int method = 4;
  // simulate / effects
  std::size_t p = 10;
  double degree = 2;
  std::size_t samples = 500;
  std::size_t reps = 1;
  std::size_t num_treatments = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string output;
  std::string scm;
  std::string cov;
  std::string csv;
};

int cmd_cpdag(const Options& o) {
  Mpdag g = cpdag_of_dag(load_graph(o.input));
  if (o.json) print_json(to_json(g.graph()));
  else print_graph(g.graph(), o.dot);
  return 0;
}

int cmd_close(const Options& o) {
  Mpdag g = meek_closure(load_graph(o.input));
  if (o.json) print_json(to_json(g.graph()));
  else print_graph(g.graph(), o.dot);
  return 0;
}

int cmd_orient(const Options& o) {
  Mpdag g = load_mpdag(o.input);
  EdgeList bg = parse_edge_list(detail::read_file(o.background));
  if (!bg.undirected.empty()) throw GraphError("background knowledge must contain only directed edges");
  OrientationList requests;
  for (const auto& [t, h] : bg.directed) requests.push_back({g.graph().at(t), g.graph().at(h)});
  ConstructResult r = construct_mpdag(g, requests);
  if (o.json) {
    Json j = {{"status", r ? "OK" : "FAIL"}};
    if (r) {
      j["graph"] = to_json(r.mpdag->graph());
    } else {
      j["offending"] = {g.graph().name(r.offending->tail), g.graph().name(r.offending->head)};
      j["reason"] = r.reason;
    }
    print_json(j);
  } else if (r) {
    std::cout << "status: OK\n";
    print_graph(r.mpdag->graph(), o.dot);
  } else {
    std::cout << "status: FAIL\noffending: " << g.graph().name(r.offending->tail) << " -> "
              << g.graph().name(r.offending->head) << "\nreason: " << r.reason << '\n';
  }
  return 0;
}

int cmd_enumerate(const Options& o) {
  Mpdag g = load_mpdag(o.input);
  auto dags = enumerate_dags(g);
  if (o.json) {
    Json list = Json::array();
    for (const auto& d : dags) list.push_back(to_json(d));
    print_json({{"count", dags.size()}, {"dags", list}});
    return 0;
  }
  std::cout << "count: " << dags.size() << '\n';
  for (std::size_t i = 0; i < dags.size(); ++i) {
    std::cout << "\n# dag " << i + 1 << '\n';
    print_graph(dags[i], o.dot);
  }
  return 0;
}

int cmd_check_id(const Options& o) {
  Mpdag g = load_mpdag(o.input);
  Query q = parse_query(g.graph(), o.treat, o.out);
  auto id = is_identified(g, q.A, q.Y);
  if (o.json) {
    Json j = {{"identified", id.identified}};
    j["witness"] = id.witness ? to_json(g.graph(), *id.witness) : Json(nullptr);
    print_json(j);
    return 0;
  }
  std::cout << "identified: " << (id.identified ? "true" : "false") << '\n';
  if (id.witness) std::cout << "witness: " << to_string(g.graph(), *id.witness) << '\n';
  return 0;
}

int cmd_gformula(const Options& o) {
  Mpdag g = load_mpdag(o.input);
  Query q = parse_query(g.graph(), o.treat, o.out);
  GFormula f = g_formula(g, q.A, q.Y);
  if (o.json) print_json(to_json(g.graph(), f));
  else std::cout << f.to_string(g.graph()) << '\n';
  return 0;
}

int cmd_adjust(const Options& o) {
  Mpdag g = load_mpdag(o.input);
  Query q = parse_query(g.graph(), o.treat, o.out);
  const Graph& graph = g.graph();
  if (o.find) {
    auto z = find_adjustment_set(g, q.A, q.Y);
    if (o.json) {
      print_json({{"found", z.has_value()}, {"Z", z ? Json(node_names(graph, *z)) : Json(nullptr)}});
    } else if (z) {
      std::string names;
      for (const auto& n : node_names(graph, *z)) names += (names.empty() ? "" : ",") + n;
      std::cout << "adjustment set: {" << names << "}\n";
    } else {
      std::cout << "adjustment set: none\n";
    }
    return 0;
  }
  NodeSet z = node_set(graph, split_list(o.set));
  AdjustmentVerdict v = is_adjustment_set(g, q.A, q.Y, z);
  std::string why;
  if (v.forbidden_node) why = "forbidden node " + graph.name(*v.forbidden_node);
  if (v.open_path) why = "open non-causal path " + to_string(graph, *v.open_path);
  if (o.json) {
    Json j = {{"valid", v.valid}};
    if (v.forbidden_node) j["forbidden_node"] = graph.name(*v.forbidden_node);
    if (v.open_path) j["open_path"] = to_json(graph, *v.open_path);
    print_json(j);
  } else {
    std::cout << "valid: " << (v.valid ? "true" : "false") << '\n';
    if (!v.valid) std::cout << "reason: " << why << '\n';
  }
  return 0;
}

int cmd_idgraphs(const Options& o) {
  Mpdag g = load_mpdag(o.input);
  Query q = parse_query(g.graph(), o.treat, o.out);
  const Graph& graph = g.graph();
  Json j;
  if (o.method == 4) {
    EnumerationResult r = id_graphs(g, q.A, q.Y);
    j = to_json(graph, r);
    if (o.verify) j["verification"] = to_json(verify_partition(r, g));
  } else {
    Json graphs = Json::array();
    std::size_t n = 0;
    if (o.method == 1) {
      for (const auto& d : enumerate_dags(g)) graphs.push_back(to_json(d)), ++n;
    } else {
      auto list = o.method == 2 ? method2_graphs(g, q.A, q.Y) : method3_graphs(g, q.A, q.Y);
      for (const auto& m : list) graphs.push_back(to_json(m.graph())), ++n;
    }
    j = {{"A", node_names(graph, q.A)},
         {"Y", node_names(graph, q.Y)},
         {"m", proper_possibly_causal_paths(graph, q.A, q.Y, true).size()},
         {"n", n},
         {"graphs", graphs}};
  }
  j["method"] = o.method;
  print_json(j);
  return 0;
}

int cmd_simulate(const Options& o) {
  SimulationConfig config;
  config.p = o.p;
  config.degree = o.degree;
  config.samples = o.samples;
  config.num_treatments = o.num_treatments;
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < o.reps; ++i) seeds.push_back(o.seed + i);
  auto records = run_simulation(config, seeds, o.threads ? o.threads : default_thread_count());
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) throw Error("cannot write '" + o.output + "'");
  }
  std::ostream& os = o.output.empty() ? std::cout : file;
  std::size_t matched = 0, built = 0;
  for (const auto& r : records) {
    os << to_json(r).dump() << '\n';
    if (r.error.empty()) ++built, matched += r.match;
  }
  if (!o.output.empty())
    std::cerr << "instances: " << built << ", method 4 matches truth: " << matched << '\n';
  return 0;
}

int cmd_effects(const Options& o) {
  LinearScm scm = make_scm(load_model(o.scm));
  Mpdag g = cpdag_of_dag(scm.dag());
  Query q = parse_query(g.graph(), o.treat, o.out);
  if (q.Y.size() != 1) throw UsageError("effects needs a single outcome");
  Eigen::MatrixXd cov;
  std::string source;
  if (o.cov == "exact") {
    cov = covariance(scm);
    source = "exact";
  } else {
    if (o.samples == 0) throw UsageError("effects needs --cov exact or --n N");
    Dataset data = sample(scm, o.samples, o.seed);
    if (!o.csv.empty()) {
      std::ofstream f(o.csv);
      if (!f) throw Error("cannot write '" + o.csv + "'");
      data.write_csv(f);
    }
    cov = empirical_covariance(data, g.graph());
    source = "sample";
  }
  auto effects = possible_effects(cov, g, q.A, q.Y[0]);
  std::vector<std::vector<double>> values;
  for (const auto& e : effects) values.push_back(e.theta);
  if (o.json) {
    Json list = Json::array();
    for (const auto& v : values) list.push_back(v);
    print_json({{"A", node_names(g.graph(), q.A)},
                {"Y", node_names(g.graph(), q.Y)},
                {"covariance", source},
                {"effects", list},
                {"distinct", count_distinct(values, 1e-6)}});
    return 0;
  }
  std::cout << "{";
  for (std::size_t i = 0; i < values.size(); ++i) std::cout << (i ? ", " : "") << format_effect(values[i]);
  std::cout << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identification and minimal enumeration of causal effects in MPDAGs"};
  app.require_subcommand(1);
  Options o;

  auto graph_cmd = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("graph", o.input, "graph file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--json", o.json, "JSON output");
    return sub;
  };
  auto query = [&](CLI::App* sub) {
    sub->add_option("--treat", o.treat, "treatment nodes, comma separated")->required();
    sub->add_option("--out", o.out, "outcome nodes, comma separated")->required();
  };

  auto* cpdag = graph_cmd("cpdag", "CPDAG of a DAG");
  cpdag->add_flag("--dot", o.dot, "DOT output");
  auto* close = graph_cmd("close", "close a PDAG under the orientation rules");
  close->add_flag("--dot", o.dot, "DOT output");
  auto* orient = graph_cmd("orient", "add background knowledge");
  orient->add_option("--bg", o.background, "file of X -> Y lines")->required()->check(CLI::ExistingFile);
  orient->add_flag("--dot", o.dot, "DOT output");
  auto* enumerate = graph_cmd("enumerate-dags", "list every DAG represented by the graph");
  enumerate->add_flag("--dot", o.dot, "DOT output");
  auto* check = graph_cmd("check-id", "is the total effect identified?");
  query(check);
  auto* gform = graph_cmd("gformula", "identification formula");
  query(gform);
  auto* adjust = graph_cmd("adjust", "check or find an adjustment set");
  query(adjust);
  auto* set_opt = adjust->add_option("--set", o.set, "candidate set, comma separated");
  auto* find_opt = adjust->add_flag("--find", o.find, "search for a set");
  set_opt->excludes(find_opt);
  auto* idg = graph_cmd("idgraphs", "minimal enumeration of identified MPDAGs");
  query(idg);
  idg->add_option("--method", o.method, "1: all DAGs, 2/3: IDA-style baselines, 4: IDGraphs")
      ->check(CLI::Range(1, 4));
  idg->add_flag("--verify", o.verify, "check the output partitions the input");

  auto* sim = app.add_subcommand("simulate", "random-instance study; one JSON record per line");
  sim->add_option("--p", o.p, "number of nodes")->check(CLI::Range(2, 99));
  sim->add_option("--deg", o.degree, "expected average degree")->check(CLI::PositiveNumber);
  sim->add_option("--n", o.samples, "samples per instance")->check(CLI::Range(1, 100000000));
  sim->add_option("--reps", o.reps, "number of instances");
  sim->add_option("--treat-count", o.num_treatments, "treatment set size")->check(CLI::Range(1, 4));
  sim->add_option("--seed", o.seed, "first seed; instance i uses seed + i")->required();
  sim->add_option("--threads", o.threads, "worker threads (default: MPDAG_THREADS or all cores)");
  sim->add_option("--out", o.output, "output path (default: stdout)");

  auto* eff = app.add_subcommand("effects", "possible effects in a linear SCM");
  eff->add_option("--scm", o.scm, "model file")->required()->check(CLI::ExistingFile);
  query(eff);
  auto* cov_opt = eff->add_option("--cov", o.cov, "use the exact covariance")->check(CLI::IsMember({"exact"}));
  auto* n_opt = eff->add_option("--n", o.samples, "sample size")->check(CLI::Range(1, 100000000));
  eff->add_option("--seed", o.seed, "sampling seed")->needs(n_opt);
  eff->add_option("--csv", o.csv, "write the sampled data here")->needs(n_opt);
  eff->add_flag("--json", o.json, "JSON output");
  cov_opt->excludes(n_opt);
  o.samples = 0;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (sim->parsed() && o.samples == 0) o.samples = 500;

  try {
    if (cpdag->parsed()) return cmd_cpdag(o);
    if (close->parsed()) return cmd_close(o);
    if (orient->parsed()) return cmd_orient(o);
    if (enumerate->parsed()) return cmd_enumerate(o);
    if (check->parsed()) return cmd_check_id(o);
    if (gform->parsed()) return cmd_gformula(o);
    if (adjust->parsed()) {
      if (set_opt->count() == 0 && !o.find) throw UsageError("adjust needs --set or --find");
      return cmd_adjust(o);
    }
    if (idg->parsed()) return cmd_idgraphs(o);
    if (sim->parsed()) return cmd_simulate(o);
    if (eff->parsed()) {
      if (o.cov.empty() && o.samples == 0) throw UsageError("effects needs --cov exact or --n N");
      return cmd_effects(o);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const mpdag::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
