#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flowlab/types.hpp"

namespace flowlab {

struct TranscriptEvent {
  TimeQ time;
  std::string kind;  // release / start / kill / complete / note kinds
  JobId job = -1;
  int machine = -1;
  std::string note;
};

std::string transcript_to_jsonl(const std::vector<TranscriptEvent>& events);

class SimEngine;

/// Scheduling policy hooks. on_release fires once per released job (in id
/// order within a timestamp); dispatch fires once per event time after all
/// completions and releases at that time.
class SchedulingPolicy {
 public:
  virtual ~SchedulingPolicy() = default;
  virtual void on_release(SimEngine& sim, const Job& job) = 0;
  virtual void dispatch(SimEngine& sim) = 0;
};

/// Privileged observer used by adaptive adversaries: sees starts, kills and
/// completions, may request wake-ups and inject future releases.
class DuelAdversary {
 public:
  virtual ~DuelAdversary() = default;
  virtual void on_start(SimEngine&, JobId) {}
  virtual void on_kill(SimEngine&, JobId) {}
  virtual void on_complete(SimEngine&, JobId) {}
  virtual std::optional<TimeQ> next_wake(const SimEngine&) { return std::nullopt; }
  virtual void on_wake(SimEngine&) {}
};

class SimEngine {
 public:
  SimEngine(int machines, ScheduleModel model);

  /// Queue a job for release at job.release (must be >= now once running).
  void add_job(const Job& job);

  /// Run until no completions, releases or wake-ups remain. Returns false
  /// if the horizon guard tripped first.
  bool run(SchedulingPolicy& policy, DuelAdversary* adversary = nullptr,
           std::optional<TimeQ> horizon = std::nullopt);

  // Actions (valid during callbacks).
  void start(JobId job, int machine);
  void kill(JobId job);
  void log(const std::string& kind, JobId job = -1, int machine = -1,
           std::string note = "");

  // Queries.
  const TimeQ& now() const { return now_; }
  int machines() const { return machines_; }
  JobId running_on(int machine) const { return machine_job_[machine]; }
  bool is_idle(int machine) const { return machine_job_[machine] < 0; }
  bool is_released(JobId j) const { return rec(j).released; }
  bool is_completed(JobId j) const { return rec(j).completed; }
  bool is_running(JobId j) const { return rec(j).machine >= 0; }
  /// Released, not running, not completed (a killed job waits again).
  bool is_waiting(JobId j) const {
    const Rec& r = rec(j);
    return r.released && !r.completed && r.machine < 0;
  }
  const Job& job(JobId j) const { return rec(j).job; }
  const TimeQ& run_start(int machine) const { return machine_start_[machine]; }
  int released_count() const { return released_count_; }
  int job_count() const { return static_cast<int>(recs_.size()); }
  /// First time the job ever started, if any.
  std::optional<TimeQ> first_start(JobId j) const { return rec(j).first_start; }

  Schedule take_schedule();
  const std::vector<TranscriptEvent>& transcript() const { return transcript_; }

 private:
  struct Rec {
    Job job;
    bool released = false;
    bool completed = false;
    int machine = -1;  // -1 when not running
    TimeQ started_at;
    std::optional<TimeQ> first_start;
  };
  const Rec& rec(JobId j) const { return recs_.at(j); }
  Rec& rec(JobId j) { return recs_.at(j); }
  void process_time(SchedulingPolicy& policy, DuelAdversary* adversary);

  int machines_;
  ScheduleModel model_;
  TimeQ now_;
  std::map<JobId, Rec> recs_;
  std::set<std::pair<TimeQ, JobId>> pending_;  // (release, id)
  std::vector<JobId> machine_job_;
  std::vector<TimeQ> machine_start_;
  std::vector<ScheduleSegment> segments_;
  std::vector<TranscriptEvent> transcript_;
  int released_count_ = 0;
  int running_count_ = 0;
  DuelAdversary* adversary_ = nullptr;
};

}  // namespace flowlab
