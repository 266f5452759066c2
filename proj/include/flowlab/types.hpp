#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowlab/rational.hpp"

namespace flowlab {

using JobId = int;

struct Job {
  JobId id = 0;
  TimeQ release;
  TimeQ size;
  JobId proxy_of = -1;  // -1: original job; otherwise id of the proxied job

  bool is_proxy() const { return proxy_of >= 0; }
};

/// Total order on sizes used for ranking (set A membership, top-l lists).
/// On equal sizes the earlier id ranks as the larger job, so an arriving
/// job never displaces an equal-size incumbent.
inline bool size_rank_less(const Job& a, const Job& b) {
  if (a.size != b.size) return a.size < b.size;
  return a.id > b.id;
}

/// Dispatch order: smallest size first, ties by id.
inline bool dispatch_less(const Job& a, const Job& b) {
  if (a.size != b.size) return a.size < b.size;
  return a.id < b.id;
}

struct Instance {
  int machines = 1;
  bool allow_zero_size = false;
  std::vector<Job> jobs;  // sorted by (release, id); ids dense 0..n-1
  std::map<std::string, std::string> meta;

  int n() const { return static_cast<int>(jobs.size()); }
  /// Jobs indexed by id (ids are dense 0..n-1).
  std::vector<const Job*> index_by_id() const;
  const Job& job_by_id(JobId id) const;
  TimeQ total_size() const {
    TimeQ s = 0;
    for (const auto& j : jobs) s += j.size;
    return s;
  }
  void sort_jobs();
  void check() const;  // throws on malformed instances
};

enum class Outcome { Completed, Killed };

struct ScheduleSegment {
  JobId job = 0;
  int machine = 0;
  TimeQ start;
  TimeQ end;
  Outcome outcome = Outcome::Completed;

  TimeQ length() const { return end - start; }
};

enum class ScheduleModel { NonPreemptive, KillRestart, Preemptive, PreemptiveMigratory };

std::string to_string(ScheduleModel m);
ScheduleModel model_from_string(const std::string& s);

struct Schedule {
  ScheduleModel model = ScheduleModel::NonPreemptive;
  std::vector<ScheduleSegment> segments;

  /// Completion time of a job: end of its (last) Completed segment.
  std::map<JobId, TimeQ> completions() const;
  void sort_segments();  // canonical order: (start, machine, job, end)
};

struct Violation {
  std::string rule;
  JobId job = -1;
  int segment_index = -1;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::string summary() const;
};

enum class BaselineKind { Srpt, BruteForce, Witness, SumP, None };

std::string to_string(BaselineKind b);

struct FlowReport {
  std::map<JobId, TimeQ> per_job;
  TimeQ total;
  BaselineKind baseline_used = BaselineKind::None;
};

ValidationReport validate_schedule(const Instance& instance, const Schedule& schedule);

/// Requires a schedule that passed validation.
FlowReport total_flow(const Instance& instance, const Schedule& schedule);

}  // namespace flowlab
