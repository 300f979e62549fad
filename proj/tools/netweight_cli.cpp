// netweight: weighting vectors, risk bounds, and synthetic ERM experiments
// for graph-structured training sets.
//
// Exit codes: 0 ok, 1 unexpected error, 2 parse error, 3 size cap,
// 4 solver not converged (report still written), 5 matching-invariant
// violation, 6 oracle ratio exceeded.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netweight/erm.hpp"
#include "netweight/errors.hpp"
#include "netweight/fptas.hpp"
#include "netweight/graph.hpp"
#include "netweight/oracle.hpp"
#include "netweight/serialize.hpp"
#include "netweight/weights.hpp"

namespace nw = netweight;

namespace {

constexpr int kChromaticCap = 16;  // maximal-matching enumeration guard
constexpr int kOracleCap = 6;

struct Options {
  std::string graph_path;
  std::string weights_path;
  std::string out_path;
  std::string format = "json";
  double beta = 0.0;
  double delta = 1.0;
  double epsilon = 0.05;
  double resolution = 1e-3;
  double approx_error = 0.0;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = library default (machine parallelism)
  int trials = 200;
  int domain_size = 2;
  int hypothesis_cap = 0;  // 0 = demonstration pair / full enumeration
  int n_subsample = 0;     // 0 = exact weighted ERM
  bool chromatic = false;
};

nw::DataGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nw::Error("cannot open graph file: " + path);
  return nw::parse_edge_list(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nw::Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nw::EdgeVector load_weights(const nw::DataGraph& g, const std::string& path) {
  const std::string text = slurp(path);
  const auto start = text.find_first_not_of(" \t\r\n");
  const bool looks_json = start != std::string::npos &&
                          (text[start] == '{' || text[start] == '[');
  return looks_json ? nw::weights_from_json(g, text)
                    : nw::weights_from_csv(g, text);
}

void emit(const Options& opt, const std::string& report) {
  std::fwrite(report.data(), 1, report.size(), stdout);
  if (!report.empty() && report.back() != '\n') std::fputc('\n', stdout);
  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw nw::Error("cannot open output file: " + opt.out_path);
    out << report;
    if (!report.empty() && report.back() != '\n') out << '\n';
  }
}

nw::BoundParams bound_params(const Options& opt) {
  nw::BoundParams params{opt.beta, opt.delta};
  if (!params.valid())
    throw nw::Error("need beta in [0,1) and delta in (0,1]");
  return params;
}

nw::FptasConfig fptas_config(const Options& opt) {
  nw::FptasConfig cfg = nw::FptasConfig::for_epsilon(opt.epsilon);
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  if (!cfg.valid()) throw nw::Error("epsilon must be positive");
  return cfg;
}

int cmd_info(const Options& opt) {
  const nw::DataGraph g = load_graph(opt.graph_path);
  const bool want_chromatic = opt.chromatic || g.m() <= kChromaticCap;
  if (opt.chromatic && g.m() > kChromaticCap)
    throw nw::TooLarge("chromatic number needs m <= " +
                       std::to_string(kChromaticCap));
  const nw::GraphStats stats = nw::graph_stats(g, want_chromatic, kChromaticCap);
  emit(opt, nw::graph_stats_to_json(stats));
  return 0;
}

int cmd_optimize(const Options& opt) {
  const nw::DataGraph g = load_graph(opt.graph_path);
  const nw::BoundParams params = bound_params(opt);
  const nw::FptasConfig cfg = fptas_config(opt);
  const nw::FptasResult result = nw::run_fptas(g, params, cfg);
  const nw::EdgeVector w = nw::matching_from_distribution(g, result.best().p);

  std::string json = nw::fptas_result_to_json(result);
  // splice the matching and the bound it certifies into the report object
  json.pop_back();  // trailing '}'
  json += ",\"matching\":";
  json += nw::weights_to_json(g, w);
  json += ",\"theorem1_bound\":";
  json += nw::format_real(nw::theorem1_bound(g, w, params, opt.approx_error));
  json += '}';
  emit(opt, json);
  if (!result.all_converged()) {
    std::cerr << "warning: some grid points did not certify the inner"
                 " tolerance\n";
    return 4;
  }
  return 0;
}

// shared by `equal` (canonical 1/max-degree weights) and `bounds`
int report_bounds(const Options& opt, const nw::DataGraph& g,
                  const nw::EdgeVector& w, bool include_weights) {
  const nw::BoundParams params = bound_params(opt);
  if (!nw::is_fractional_matching(g, w)) throw nw::NotAMatching("per-vertex weight sums exceed 1");

  nw::JsonWriter out;
  out.begin_obj();
  if (include_weights) {
    out.key("weights");
    out.raw(nw::weights_to_json(g, w));
  }
  out.key("theorem1_bound");
  out.value(nw::theorem1_bound(g, w, params, opt.approx_error));
  out.key("equal_weighting_bound_order");
  if (opt.delta > nw::eq11_delta_threshold(g))
    out.value(nw::equal_weighting_bound_order(g, params));
  else
    out.value("out of range");
  if (g.m() <= kChromaticCap) {
    out.key("chromatic_bound_order");
    out.value(nw::chromatic_bound_order(g, kChromaticCap));
  }
  out.key("delta_threshold");
  out.value(nw::delta_threshold(nw::compute_norms(g, w)));
  out.end_obj();
  emit(opt, out.str());
  return 0;
}

int cmd_equal(const Options& opt) {
  const nw::DataGraph g = load_graph(opt.graph_path);
  if (g.m() == 0) throw nw::EmptyGraph();
  const nw::EdgeVector w(g.m(), 1.0 / g.max_degree());
  return report_bounds(opt, g, w, true);
}

int cmd_bounds(const Options& opt) {
  const nw::DataGraph g = load_graph(opt.graph_path);
  const nw::EdgeVector w = load_weights(g, opt.weights_path);
  return report_bounds(opt, g, w, false);
}

int cmd_oracle(const Options& opt) {
  const nw::DataGraph g = load_graph(opt.graph_path);
  if (g.m() > kOracleCap)
    throw nw::TooLarge("oracle needs m <= " + std::to_string(kOracleCap));
  const nw::BoundParams params = bound_params(opt);
  const nw::FptasConfig cfg = fptas_config(opt);
  const nw::FptasResult fptas = nw::run_fptas(g, params, cfg);
  const nw::OracleResult oracle =
      nw::brute_force_optimum(g, params, opt.resolution);

  const double ratio = fptas.best().objective / oracle.value;
  const double slack_ratio = oracle.slack / oracle.value;
  nw::JsonWriter out;
  out.begin_obj();
  out.key("fptas_objective");
  out.value(fptas.best().objective);
  out.key("oracle_objective");
  out.value(oracle.value);
  out.key("ratio");
  out.value(ratio);
  out.key("epsilon");
  out.value(opt.epsilon);
  out.key("slack");
  out.value(slack_ratio);
  out.end_obj();
  emit(opt, out.str());
  if (ratio > 1.0 + opt.epsilon + slack_ratio) {
    std::cerr << "oracle ratio " << ratio << " exceeds 1 + epsilon + slack\n";
    return 6;
  }
  return 0;
}

// seeded instance for graphs outside the demonstration family
nw::SyntheticInstance random_instance(int D, std::uint64_t seed) {
  nw::Rng rng(~seed);  // separate stream from the per-trial sample seeds
  nw::SyntheticInstance inst;
  inst.D = D;
  inst.px.resize(D);
  double total = 0;
  for (double& v : inst.px) {
    v = 0.1 + rng.uniform();
    total += v;
  }
  for (double& v : inst.px) v /= total;
  inst.eta.assign(D, std::vector<double>(D, 0.0));
  for (int i = 0; i < D; ++i)
    for (int j = i; j < D; ++j) {
      const double e = 0.05 + 0.9 * rng.uniform();
      inst.eta[i][j] = e;
      inst.eta[j][i] = e;
    }
  inst.seed = seed;
  return inst;
}

// classical ERM on n_subsample edges drawn iid from the scheme's distribution
int subsampled_pick(const nw::DataGraph& g, const nw::Sample& s,
                    const nw::EdgeVector& p,
                    const std::vector<nw::Hypothesis>& hyps, int N,
                    std::uint64_t seed) {
  nw::Rng rng(seed);
  std::vector<int> draws(N);
  for (int t = 0; t < N; ++t) draws[t] = rng.discrete(p);
  int best = 0;
  double best_loss = 0;
  for (std::size_t k = 0; k < hyps.size(); ++k) {
    double loss = 0;
    for (int e : draws) {
      const auto [u, v] = g.edges[e];
      if (hyps[k](s.features[u], s.features[v]) != s.labels[e]) loss += 1.0;
    }
    if (k == 0 || loss < best_loss) {
      best = static_cast<int>(k);
      best_loss = loss;
    }
  }
  return best;
}

int cmd_simulate(const Options& opt) {
  const nw::DataGraph g = load_graph(opt.graph_path);
  if (g.m() == 0) throw nw::EmptyGraph();
  const nw::BoundParams params = bound_params(opt);
  const nw::FptasConfig cfg = fptas_config(opt);
  if (opt.trials < 1) throw nw::Error("need at least one trial");
  if (opt.domain_size < 1) throw nw::Error("domain size must be positive");

  const bool spm = nw::is_star_plus_matching(g);
  const bool demo = spm && opt.domain_size == 2 && opt.hypothesis_cap == 0;

  const nw::SyntheticInstance inst =
      demo ? nw::demo_instance(opt.seed)
           : random_instance(opt.domain_size, opt.seed);
  std::vector<nw::Hypothesis> hyps;
  if (demo)
    hyps = nw::demo_hypotheses();
  else if (opt.hypothesis_cap > 0)
    hyps = nw::hypothesis_subset(inst, opt.hypothesis_cap, opt.seed);
  else
    hyps = nw::enumerate_symmetric_hypotheses(opt.domain_size);

  std::vector<std::pair<std::string, nw::EdgeVector>> schemes;
  schemes.emplace_back("equal", nw::EdgeVector(g.m(), 1.0 / g.m()));
  const nw::FptasResult fptas = nw::run_fptas(g, params, cfg);
  schemes.emplace_back("fptas", fptas.best().p);
  if (spm) schemes.emplace_back("paper-star", nw::paper_star_distribution(g));

  std::vector<nw::SchemeRow> rows;
  if (opt.n_subsample > 0) {
    // Eq. (4) path: rank hypotheses on a common subsample per (trial, scheme)
    std::vector<double> risks(hyps.size());
    for (std::size_t k = 0; k < hyps.size(); ++k)
      risks[k] = nw::true_risk(inst, hyps[k]);
    double best_risk = risks[0];
    for (double r : risks) best_risk = std::min(best_risk, r);
    for (std::size_t si = 0; si < schemes.size(); ++si) {
      nw::SchemeRow row;
      row.scheme = schemes[si].first;
      row.trials = opt.trials;
      std::vector<double> excess(opt.trials);
      for (int t = 0; t < opt.trials; ++t) {
        const nw::Sample s =
            nw::draw_sample(inst, g, opt.seed + static_cast<std::uint64_t>(t));
        const int pick =
            subsampled_pick(g, s, schemes[si].second, hyps, opt.n_subsample,
                            opt.seed + static_cast<std::uint64_t>(t) * 1000003 +
                                si);
        excess[t] = risks[pick] - best_risk;
      }
      double sum = 0;
      for (double v : excess) sum += v;
      row.mean_excess_risk = sum / opt.trials;
      double ss = 0;
      for (double v : excess) ss += (v - row.mean_excess_risk) *
                                    (v - row.mean_excess_risk);
      row.std_excess_risk =
          opt.trials > 1 ? std::sqrt(ss / (opt.trials - 1)) : 0.0;
      rows.push_back(std::move(row));
    }
  } else {
    rows = nw::excess_risk_experiment(inst, g, hyps, schemes, opt.trials,
                                      opt.seed, opt.threads);
  }

  if (opt.format == "csv") {
    emit(opt, nw::experiment_to_csv(rows));
  } else {
    nw::JsonWriter out;
    out.begin_obj();
    out.key("instance");
    out.raw(inst.to_json());
    out.key("rows");
    out.begin_arr();
    for (const auto& r : rows) {
      out.begin_obj();
      out.key("scheme");
      out.value(std::string_view(r.scheme));
      out.key("trials");
      out.value(r.trials);
      out.key("mean_excess_risk");
      out.value(r.mean_excess_risk);
      out.key("std_excess_risk");
      out.value(r.std_excess_risk);
      out.end_obj();
    }
    out.end_arr();
    out.end_obj();
    emit(opt, out.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Near-optimal example weighting for learning from networked data"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--graph", opt.graph_path, "edge-list file")->required();
    cmd->add_option("--out", opt.out_path, "also write the report here");
    cmd->add_option("--format", opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    return cmd;
  };
  auto add_bound_params = [&](CLI::App* cmd) {
    cmd->add_option("--beta", opt.beta, "noise exponent in [0,1)");
    cmd->add_option("--delta", opt.delta, "confidence level in (0,1]");
  };

  CLI::App* info = add_common(app.add_subcommand("info", "graph statistics"));
  info->add_flag("--chromatic", opt.chromatic,
                 "require the fractional edge chromatic number");

  CLI::App* optimize = add_common(
      app.add_subcommand("optimize", "near-optimal weighting via the grid"
                                     " scheme"));
  add_bound_params(optimize);
  optimize->add_option("--epsilon", opt.epsilon, "approximation factor");
  optimize->add_option("--approx-error", opt.approx_error,
                       "hypothesis-class approximation error for the bound");
  optimize->add_option("--seed", opt.seed, "rng seed");
  optimize->add_option("--threads", opt.threads,
                       "concurrent grid-point solves (0 = all cores)");

  CLI::App* equal = add_common(
      app.add_subcommand("equal", "bounds for canonical equal weighting"));
  add_bound_params(equal);
  equal->add_option("--approx-error", opt.approx_error,
                    "hypothesis-class approximation error for the bound");

  CLI::App* bounds = add_common(
      app.add_subcommand("bounds", "bounds for user-supplied weights"));
  add_bound_params(bounds);
  bounds->add_option("--weights", opt.weights_path, "weights file (json/csv)")
      ->required();
  bounds->add_option("--approx-error", opt.approx_error,
                     "hypothesis-class approximation error for the bound");

  CLI::App* oracle = add_common(
      app.add_subcommand("oracle", "compare the grid scheme against brute"
                                   " force"));
  add_bound_params(oracle);
  oracle->add_option("--epsilon", opt.epsilon, "approximation factor");
  oracle->add_option("--resolution", opt.resolution,
                     "oracle grid resolution in [1e-4, 1e-1]");
  oracle->add_option("--threads", opt.threads,
                     "concurrent grid-point solves (0 = all cores)");

  CLI::App* simulate = add_common(
      app.add_subcommand("simulate", "synthetic weighted-ERM experiment"));
  add_bound_params(simulate);
  simulate->add_option("--epsilon", opt.epsilon, "approximation factor");
  simulate->add_option("--seed", opt.seed, "rng seed");
  simulate->add_option("--trials", opt.trials, "number of trials");
  simulate->add_option("--domain-size", opt.domain_size, "feature domain size");
  simulate->add_option("--hypothesis-cap", opt.hypothesis_cap,
                       "seeded hypothesis subset size (0 = default class)");
  simulate->add_option("--n-subsample", opt.n_subsample,
                       "rank hypotheses on this many subsampled edges"
                       " (0 = exact weighted ERM)");
  simulate->add_option("--threads", opt.threads, "concurrent trials"
                                                 " (0 = all cores)");
  simulate->get_option("--format")->default_str("csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (simulate->parsed() && !simulate->get_option("--format")->count())
    opt.format = "csv";

  try {
    if (info->parsed()) return cmd_info(opt);
    if (optimize->parsed()) return cmd_optimize(opt);
    if (equal->parsed()) return cmd_equal(opt);
    if (bounds->parsed()) return cmd_bounds(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
  } catch (const nw::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const nw::EmptyGraph& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const nw::TooLarge& e) {
    std::cerr << "size cap: " << e.what() << "\n";
    return 3;
  } catch (const nw::NotAMatching& e) {
    std::cerr << "matching invariant violated: " << e.what() << "\n";
    return 5;
  } catch (const nw::NegativeEntry& e) {
    std::cerr << "matching invariant violated: " << e.what() << "\n";
    return 5;
  } catch (const nw::LengthMismatch& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
