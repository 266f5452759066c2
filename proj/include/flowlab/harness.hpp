#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flowlab/types.hpp"

namespace flowlab {

enum class BaselinePolicy { Auto, Srpt, BruteForce, Witness, SumP };

BaselinePolicy baseline_policy_from_string(const std::string& s);

struct RatioReport {
  TimeQ alg_flow;
  TimeQ baseline_flow;
  TimeQ ratio;
  BaselineKind baseline_used = BaselineKind::None;
  bool exact = false;  // false: the baseline is a bound on OPT, not OPT
};

/// Picks a baseline and computes alg_flow / baseline_flow exactly.
/// Auto order: brute force (n <= 9, m <= 3), SRPT (m = 1, exact preemptive
/// OPT), the generator witness when the instance carries one (an upper
/// bound on OPT, so the ratio is a certified lower bound), else sum of
/// sizes (a lower bound on OPT, so the ratio is an upper bound).
RatioReport compute_ratio(const TimeQ& alg_flow, const Instance& instance,
                          BaselinePolicy policy);

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Ordinary least squares on (ln x, ln y). Needs >= 3 positive points.
FitResult fit_scaling(const std::vector<std::pair<double, double>>& points);

/// Seeded random instance with exact rational releases and sizes:
/// r in [0, max_release_num/denominator], p in (0, max_size_num/denominator].
struct RandomSpec {
  int n = 10;
  int m = 1;
  long long max_release_num = 40;
  long long max_size_num = 40;
  long long denominator = 4;
};

Instance random_instance(const RandomSpec& spec, uint64_t seed);

/// Dispatch by name: greedy, det-np, kill-restart, kill-restart-unknown-n,
/// rand-single, rand-multi, srpt. The seed feeds the randomized policies.
Schedule run_algorithm(const std::string& alg, const Instance& instance,
                       uint64_t seed);

/// Build an instance of the named family: single-rand-lb, multi-lb,
/// multi-restart-lb (witness flow lands in meta), or random.
Instance make_family_instance(const std::string& family, int n, int m,
                              uint64_t seed);

struct BenchRow {
  std::string family;
  std::string alg;
  int n = 0;
  int m = 0;
  int rep = 0;
  uint64_t seed = 0;  // the derived per-rep seed
  TimeQ alg_flow;
  TimeQ baseline_flow;
  TimeQ ratio;
  BaselineKind baseline = BaselineKind::None;
  bool exact = false;
};

/// Runs reps x |ns| jobs over a worker pool (FLOWLAB_THREADS overrides the
/// size); rep r uses seed' = hash(seed, r). Rows come back sorted by
/// (n, rep), so equal invocations give byte-identical CSV.
std::vector<BenchRow> run_bench(const std::string& alg,
                                const std::string& family,
                                const std::vector<int>& ns, int m, int reps,
                                uint64_t seed);

/// CSV with header; values as 20-significant-digit decimals, or exact
/// rationals when exact_values is set.
std::string bench_csv(const std::vector<BenchRow>& rows, bool exact_values);

}  // namespace flowlab
