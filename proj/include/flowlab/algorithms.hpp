#pragma once

#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "flowlab/engine.hpp"
#include "flowlab/partition.hpp"
#include "flowlab/rng.hpp"
#include "flowlab/types.hpp"

namespace flowlab {

struct RunResult {
  Schedule schedule;
  std::vector<TranscriptEvent> transcript;
  int type_a_kills = 0;  // unknown-n variant only
  int type_b_kills = 0;
};

/// FIFO: whenever a machine frees, start the earliest-released waiting job.
RunResult run_greedy(const Instance& instance);

/// Deterministic non-preemptive multi-machine policy: rank-based partition
/// with l = floor(sqrt(n*m)), machine roles (one large-only machine, mixed
/// machines activated by the quota gamma(k), the rest small-only).
RunResult run_det_nonpreemptive(const Instance& instance);

/// Kill-and-restart policy with the refined partition, blocked-small counter
/// phi and threshold kills at phi = floor(sqrt(n*m)).
RunResult run_kill_restart(const Instance& instance);

/// Kill-and-restart without knowing n: doubling estimate N, dynamic
/// currently-large labels, type-A kills on N updates and type-B kills when
/// more than l currently-small jobs wait behind a running currently-large job.
RunResult run_kill_restart_unknown_n(const Instance& instance);

/// gamma(k) = floor(k / sqrt(n/m)) evaluated exactly in integers.
long long det_np_gamma(long long k, long long n, long long m);

/// floor(N^alpha * sqrt(m)) with alpha = (sqrt(5)-1)/2; the one deliberately
/// floating-point computation (documented).
int unknown_n_capacity(long long N, int m);

/// Randomized dynamic policies (single machine and the multi-machine
/// extension). The schedule is rebuilt at every release: small and proxy
/// jobs follow NSJF; each unproxied large job j is inserted on its drawn
/// machine at the first instant where the machine's idle time since r_j
/// reaches w_j * p_j. The executed prefix never changes (online stability).
struct RandRunResult {
  Schedule schedule;
  std::vector<Schedule> rounds;  // one per release when record_rounds is set
  std::vector<TimeQ> round_times;
};

RandRunResult run_rand_single(const Instance& instance, const RngPolicy& rng,
                              bool record_rounds = false);
RandRunResult run_rand_multi(const Instance& instance, const RngPolicy& rng,
                             bool record_rounds = false);

// Engine policies, exposed so the adversary duels can drive them step-wise.

class GreedyPolicy : public SchedulingPolicy {
 public:
  void on_release(SimEngine& sim, const Job& job) override;
  void dispatch(SimEngine& sim) override;

 private:
  std::set<std::pair<TimeQ, JobId>> queue_;  // (release, id)
};

class KillRestartPolicy : public SchedulingPolicy {
 public:
  KillRestartPolicy(int n, int m);
  void on_release(SimEngine& sim, const Job& job) override;
  void dispatch(SimEngine& sim) override;
  int capacity() const { return capacity_; }

 private:
  struct Unit {  // schedulable unit: an original job or a proxy
    TimeQ size;
    JobId unit_id;  // sort id (proxy id for proxies)
    JobId actual;   // job the engine runs
    bool operator<(const Unit& o) const {
      if (size != o.size) return size < o.size;
      return unit_id < o.unit_id;
    }
  };
  bool small_only(int machine) const { return machine < m_ / 2; }
  bool active_large_processing(const SimEngine& sim) const;
  void kill_processing_active_large(SimEngine& sim);

  int m_;
  int capacity_;
  PartitionState partition_;
  int phi_ = 0;
  std::set<Unit> waiting_small_;
  std::set<Unit> waiting_large_;  // waiting active large jobs
};

class DetNpPolicy : public SchedulingPolicy {
 public:
  DetNpPolicy(int n, int m);
  void on_release(SimEngine& sim, const Job& job) override;
  void dispatch(SimEngine& sim) override;

 private:
  enum class Role { LargeOnly, Mixed, SmallOnly };
  Role role(int machine) const;
  struct Unit {
    TimeQ size;
    JobId unit_id;
    JobId actual;
    bool operator<(const Unit& o) const {
      if (size != o.size) return size < o.size;
      return unit_id < o.unit_id;
    }
  };

  long long n_;
  int m_;
  int capacity_;
  PartitionState partition_;
  std::set<Unit> waiting_small_;
  std::set<Unit> waiting_large_;
  std::vector<bool> running_large_;  // per machine: current unit is large
};

class UnknownNPolicy : public SchedulingPolicy {
 public:
  explicit UnknownNPolicy(int m);
  void on_release(SimEngine& sim, const Job& job) override;
  void dispatch(SimEngine& sim) override;
  int type_a_kills() const { return type_a_kills_; }
  int type_b_kills() const { return type_b_kills_; }

 private:
  bool small_only(int machine) const { return machine < m_ / 2; }
  std::set<JobId> currently_large(const SimEngine& sim) const;

  int m_;
  long long released_ = 0;
  long long estimate_n_ = 1;  // N
  int capacity_ = 0;          // l
  TimeQ released_work_;
  // rank order: larger size first, earlier id first on ties
  struct RankKey {
    TimeQ size;
    JobId id;
    bool operator<(const RankKey& o) const {
      if (size != o.size) return size > o.size;
      return id < o.id;
    }
  };
  std::set<RankKey> by_size_;
  std::set<std::pair<TimeQ, JobId>> waiting_;  // (size, id) dispatch order
  std::set<JobId> prev_large_;
  int type_a_kills_ = 0;
  int type_b_kills_ = 0;
};

}  // namespace flowlab
