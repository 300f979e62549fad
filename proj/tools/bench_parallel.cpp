// Compares the serial grid/trial loops against the OpenMP ones on a
// mid-sized star-plus-matching input and checks the results agree bitwise.

#include <chrono>
#include <cstdio>
#include <string>

#include "netweight/erm.hpp"
#include "netweight/fptas.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace netweight;
using clk = std::chrono::steady_clock;

static double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

int main(int argc, char** argv) {
  int m = 40;
  double epsilon = 0.2;
  if (argc > 1) m = std::stoi(argv[1]);
  if (argc > 2) epsilon = std::stod(argv[2]);

  int hw = 1;
#ifdef _OPENMP
  hw = omp_get_max_threads();
#endif
  std::printf("star-plus-matching m=%d, epsilon=%g, hardware threads=%d\n", m,
              epsilon, hw);

  const DataGraph g = star_plus_matching(m);
  const BoundParams params{0.5, std::exp(-1.0)};
  FptasConfig cfg = FptasConfig::for_epsilon(epsilon);

  cfg.threads = 1;
  auto t0 = clk::now();
  const FptasResult serial = run_fptas(g, params, cfg);
  const double t_serial = seconds_since(t0);

  cfg.threads = hw;
  t0 = clk::now();
  const FptasResult parallel = run_fptas(g, params, cfg);
  const double t_parallel = seconds_since(t0);

  bool same = serial.best_index == parallel.best_index &&
              serial.trace.size() == parallel.trace.size();
  for (std::size_t i = 0; same && i < serial.trace.size(); ++i)
    same = serial.trace[i].b == parallel.trace[i].b &&
           serial.trace[i].p == parallel.trace[i].p;
  std::printf("fptas grid (%d points): serial %.3fs, %d threads %.3fs,"
              " speedup %.2fx, identical=%s\n",
              serial.grid_size, t_serial, hw, t_parallel,
              t_serial / t_parallel, same ? "yes" : "no");

  const SyntheticInstance inst = demo_instance(7);
  const auto hyps = demo_hypotheses();
  std::vector<std::pair<std::string, EdgeVector>> schemes;
  schemes.emplace_back("equal", EdgeVector(g.m(), 1.0 / g.m()));
  schemes.emplace_back("fptas", serial.best().p);

  t0 = clk::now();
  const auto trials_serial =
      excess_risk_trials(inst, g, hyps, schemes, 2000, 7, 1);
  const double e_serial = seconds_since(t0);
  t0 = clk::now();
  const auto trials_parallel =
      excess_risk_trials(inst, g, hyps, schemes, 2000, 7, hw);
  const double e_parallel = seconds_since(t0);
  const bool same_trials = trials_serial == trials_parallel;
  std::printf("erm trials (2000): serial %.3fs, %d threads %.3fs,"
              " speedup %.2fx, identical=%s\n",
              e_serial, hw, e_parallel, e_serial / e_parallel,
              same_trials ? "yes" : "no");

  return same && same_trials ? 0 : 1;
}
