#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "flowlab/engine.hpp"
#include "flowlab/types.hpp"

namespace flowlab {

/// A generated lower-bound instance together with a feasible witness
/// schedule certifying an upper bound on OPT.
struct GeneratedFamily {
  Instance instance;
  Schedule witness;
  TimeQ witness_flow;
  long long k = 0;
  TimeQ eps;
  std::vector<int> coins;
};

/// Single-machine randomized family: one size-2 job at 0, then k waves of k
/// tiny jobs; the first wave lands at 1 or 2 on a coin flip.
GeneratedFamily gen_single_rand_lb(int n, uint64_t seed);

/// Multi-machine gadget family: k batches (5 apart) of m gadgets, each one
/// large size-2 job plus two waves of k jobs of size 1/k; the first wave's
/// offset depends on the batch coin.
GeneratedFamily gen_multi_lb(int n, int m, uint64_t seed);

/// Kill-and-restart gadget family: batches 7 apart, two large jobs (sizes 2
/// and 3) per gadget plus the two small waves.
GeneratedFamily gen_multi_restart_lb(int n, int m, uint64_t seed);

struct ConflictPeriod {
  TimeQ start;       // the small-job period [start, start+1)
  int large_starts = 0;  // x: large segments starting in [start-1.5, start+0.5]
                         // that overlap the period by at least 1/2
  TimeQ small_flow;  // total flow of the period's small jobs
  TimeQ bound;       // x * k / 8
  bool ok = true;
};

struct ConflictReport {
  std::vector<ConflictPeriod> periods;
  bool ok = true;
};

/// Checks the per-period lower bound: any schedule whose large jobs conflict
/// with a small-job period pays at least x*k/8 flow on that period's jobs.
ConflictReport analyze_conflicts(const GeneratedFamily& family, const Schedule& schedule);

using PolicyFactory =
    std::function<std::unique_ptr<SchedulingPolicy>(int n, int m)>;

struct DuelResult {
  Instance instance;  // the realized adaptive instance
  Schedule schedule;  // what the algorithm did
  TimeQ alg_flow;
  Schedule witness;
  TimeQ witness_flow;
  std::vector<TranscriptEvent> transcript;
  bool protocol_complete = true;  // false if the horizon guard tripped
};

/// Adaptive single-machine adversary against kill-and-restart algorithms:
/// builds an unsolved job in phase 1, then releases one tiny job whenever
/// the current run of that job survives to the next harmonic threshold.
DuelResult duel_restart_lb(const PolicyFactory& factory, int n);

/// Adaptive adversary for non-preemptive policies: a unit job at 0, then
/// n/m batches of m tiny jobs right after the algorithm's first start.
DuelResult duel_nm2(const PolicyFactory& factory, int n, int m);

struct UnknownNDuelResult {
  bool type_a = false;
  int t = 0;  // Type A: the unit interval [t, t+1) holding enough mass
  GeneratedFamily family;
  std::vector<TimeQ> probe_starts;
  int trials = 0;
};

/// Probes an algorithm (black box, possibly randomized) on a one-job
/// instance to estimate its start-time distribution, then emits the
/// matching punishment instance with zero-size dummy jobs.
UnknownNDuelResult duel_unknown_n(
    const std::function<Schedule(const Instance&, uint64_t)>& runner, int n0,
    int trials, int m, uint64_t seed);

}  // namespace flowlab
