#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>

#include "flowlab/types.hpp"

namespace flowlab {

enum class JobClass { Small, ActiveLarge, Proxied, Committed };

struct Displaced {
  JobId job = -1;             // the job evicted from A
  bool proxied = false;       // true: a proxy was created; false: committed
  std::optional<Job> proxy;   // set when proxied
};

struct ClassifyOutcome {
  bool large = false;
  std::optional<Displaced> displaced;
};

/// Online rank-based partitioning of arriving jobs into small and large,
/// with an active-large set A of capacity l. A displaced job that is still
/// waiting is replaced by a fresh proxy job of the same size released now;
/// a displaced job that already started is marked committed.
class PartitionState {
 public:
  PartitionState(int capacity, JobId next_proxy_id)
      : capacity_(capacity), next_proxy_id_(next_proxy_id) {}

  /// Rank rule only: fill A while |A| < l, displace the minimum of A when
  /// the arrival outranks it, otherwise small. Equal sizes never displace.
  ClassifyOutcome classify(const Job& job,
                           const std::function<bool(JobId)>& is_waiting);

  /// Absolute rule first: small when p <= 4P/l (P includes the arriving
  /// job's size); otherwise the rank rule.
  ClassifyOutcome classify_refined(const Job& job,
                                   const std::function<bool(JobId)>& is_waiting);

  int capacity() const { return capacity_; }
  const TimeQ& released_work() const { return released_work_; }
  JobId next_proxy_id() const { return next_proxy_id_; }
  std::optional<JobClass> state_of(JobId id) const;
  bool in_active_set(JobId id) const;
  size_t active_count() const { return active_.size(); }

 private:
  struct RankKey {
    TimeQ size;
    JobId id;
    // Ascending rank order: smaller size first; on ties the later id is
    // the smaller job, so equal-size incumbents are never displaced.
    bool operator<(const RankKey& o) const {
      if (size != o.size) return size < o.size;
      return id > o.id;
    }
  };

  ClassifyOutcome rank_rule(const Job& job,
                            const std::function<bool(JobId)>& is_waiting);
  void note_arrival(const Job& job);

  int capacity_;
  JobId next_proxy_id_;
  std::set<RankKey> active_;
  std::map<JobId, JobClass> job_state_;
  std::map<JobId, Job> jobs_;
  TimeQ released_work_;
};

}  // namespace flowlab
