#include "flowlab/types.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace flowlab {

std::vector<const Job*> Instance::index_by_id() const {
  std::vector<const Job*> idx(jobs.size(), nullptr);
  for (const auto& j : jobs) {
    if (j.id >= 0 && j.id < static_cast<int>(jobs.size())) idx[j.id] = &j;
  }
  return idx;
}

const Job& Instance::job_by_id(JobId id) const {
  for (const auto& j : jobs)
    if (j.id == id) return j;
  throw std::out_of_range("job_by_id: unknown id");
}

void Instance::sort_jobs() {
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    if (a.release != b.release) return a.release < b.release;
    return a.id < b.id;
  });
}

void Instance::check() const {
  if (machines < 1) throw std::invalid_argument("instance: machines < 1");
  std::vector<bool> seen(jobs.size(), false);
  for (const auto& j : jobs) {
    if (j.id < 0 || j.id >= static_cast<int>(jobs.size()) || seen[j.id])
      throw std::invalid_argument("instance: job ids must be dense 0..n-1");
    seen[j.id] = true;
    if (j.release.is_negative()) throw std::invalid_argument("instance: negative release");
    if (j.size.is_negative()) throw std::invalid_argument("instance: negative size");
    if (j.size.is_zero() && !allow_zero_size)
      throw std::invalid_argument("instance: zero size without allow_zero_size");
  }
  for (size_t i = 1; i < jobs.size(); ++i) {
    const Job& a = jobs[i - 1];
    const Job& b = jobs[i];
    if (a.release > b.release || (a.release == b.release && a.id >= b.id))
      throw std::invalid_argument("instance: jobs not sorted by (release, id)");
  }
}

std::string to_string(ScheduleModel m) {
  switch (m) {
    case ScheduleModel::NonPreemptive: return "non-preemptive";
    case ScheduleModel::KillRestart: return "kill-restart";
    case ScheduleModel::Preemptive: return "preemptive";
    case ScheduleModel::PreemptiveMigratory: return "preemptive-migratory";
  }
  return "?";
}

ScheduleModel model_from_string(const std::string& s) {
  if (s == "non-preemptive") return ScheduleModel::NonPreemptive;
  if (s == "kill-restart") return ScheduleModel::KillRestart;
  if (s == "preemptive") return ScheduleModel::Preemptive;
  if (s == "preemptive-migratory") return ScheduleModel::PreemptiveMigratory;
  throw std::invalid_argument("unknown schedule model: " + s);
}

std::string to_string(BaselineKind b) {
  switch (b) {
    case BaselineKind::Srpt: return "srpt";
    case BaselineKind::BruteForce: return "brute-force";
    case BaselineKind::Witness: return "witness";
    case BaselineKind::SumP: return "sum-p";
    case BaselineKind::None: return "none";
  }
  return "?";
}

std::map<JobId, TimeQ> Schedule::completions() const {
  std::map<JobId, TimeQ> out;
  for (const auto& s : segments) {
    if (s.outcome != Outcome::Completed) continue;
    auto it = out.find(s.job);
    if (it == out.end() || it->second < s.end) out[s.job] = s.end;
  }
  return out;
}

void Schedule::sort_segments() {
  std::sort(segments.begin(), segments.end(),
            [](const ScheduleSegment& a, const ScheduleSegment& b) {
              if (a.start != b.start) return a.start < b.start;
              if (a.machine != b.machine) return a.machine < b.machine;
              if (a.job != b.job) return a.job < b.job;
              return a.end < b.end;
            });
}

std::string ValidationReport::summary() const {
  if (ok) return "ok";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  for (const auto& v : violations) {
    os << " [job " << v.job << " seg " << v.segment_index << ": " << v.rule << "]";
  }
  return os.str();
}

namespace {

void add(ValidationReport& r, std::string rule, JobId job, int seg) {
  r.ok = false;
  r.violations.push_back({std::move(rule), job, seg});
}

}  // namespace

ValidationReport validate_schedule(const Instance& instance, const Schedule& schedule) {
  ValidationReport report;
  const int n = instance.n();
  const auto& segs = schedule.segments;
  const auto byid = instance.index_by_id();

  for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
    const auto& s = segs[i];
    if (s.job < 0 || s.job >= n || byid[s.job] == nullptr) {
      add(report, "unknown job id", s.job, i);
      continue;
    }
    if (s.machine < 0 || s.machine >= instance.machines)
      add(report, "unknown machine", s.job, i);
    const Job& j = *byid[s.job];
    if (s.start < j.release) add(report, "start before release", s.job, i);
    if (s.end < s.start) add(report, "negative length", s.job, i);
    if (s.end == s.start &&
        !(j.size.is_zero() && s.outcome == Outcome::Completed))
      add(report, "zero-length segment", s.job, i);
    if (s.outcome == Outcome::Killed && s.length() > j.size)
      add(report, "killed segment longer than size", s.job, i);
  }
  if (!report.ok) return report;  // structural problems; skip the rest

  // Machine overlap (half-open intervals).
  std::vector<std::vector<int>> per_machine(instance.machines);
  for (int i = 0; i < static_cast<int>(segs.size()); ++i)
    per_machine[segs[i].machine].push_back(i);
  for (auto& idx : per_machine) {
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      if (segs[a].start != segs[b].start) return segs[a].start < segs[b].start;
      return segs[a].end < segs[b].end;
    });
    for (size_t i = 1; i < idx.size(); ++i) {
      const auto& prev = segs[idx[i - 1]];
      const auto& cur = segs[idx[i]];
      if (prev.start < prev.end && cur.start < cur.end && cur.start < prev.end)
        add(report, "machine overlap", cur.job, idx[i]);
    }
  }

  // Per-job checks.
  std::vector<std::vector<int>> per_job(n);
  for (int i = 0; i < static_cast<int>(segs.size()); ++i)
    per_job[segs[i].job].push_back(i);

  for (JobId j = 0; j < n; ++j) {
    auto& idx = per_job[j];
    const Job& job = *byid[j];
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return segs[a].start < segs[b].start;
    });
    for (size_t i = 1; i < idx.size(); ++i) {
      const auto& prev = segs[idx[i - 1]];
      const auto& cur = segs[idx[i]];
      if (prev.start < prev.end && cur.start < cur.end && cur.start < prev.end)
        add(report, "job runs on two machines at once", j, idx[i]);
    }
    int completed = 0;
    TimeQ completed_len = 0, sum_len = 0;
    int completed_idx = -1;
    for (int i : idx) {
      sum_len += segs[i].length();
      if (segs[i].outcome == Outcome::Completed) {
        ++completed;
        completed_len += segs[i].length();
        completed_idx = i;
      }
    }
    if (completed == 0) {
      add(report, "unfinished job", j, -1);
      continue;
    }
    switch (schedule.model) {
      case ScheduleModel::NonPreemptive:
        if (idx.size() != 1)
          add(report, "multiple segments in non-preemptive model", j, idx.back());
        if (completed_len != job.size)
          add(report, "segment length differs from size", j, completed_idx);
        break;
      case ScheduleModel::KillRestart: {
        if (completed != 1)
          add(report, "multiple completed segments in kill-restart model", j, completed_idx);
        else if (segs[completed_idx].length() != job.size)
          add(report, "completed segment length differs from size", j, completed_idx);
        for (int i : idx) {
          if (segs[i].outcome == Outcome::Killed && completed_idx >= 0 &&
              segs[i].end > segs[completed_idx].start)
            add(report, "killed segment after completion", j, i);
        }
        break;
      }
      case ScheduleModel::Preemptive: {
        int machine = segs[idx.front()].machine;
        for (int i : idx) {
          if (segs[i].outcome != Outcome::Completed)
            add(report, "killed segment in preemptive model", j, i);
          if (segs[i].machine != machine)
            add(report, "migration in non-migratory model", j, i);
        }
        if (sum_len != job.size)
          add(report, "segment lengths do not sum to size", j, idx.back());
        break;
      }
      case ScheduleModel::PreemptiveMigratory: {
        for (int i : idx) {
          if (segs[i].outcome != Outcome::Completed)
            add(report, "killed segment in preemptive model", j, i);
        }
        if (sum_len != job.size)
          add(report, "segment lengths do not sum to size", j, idx.back());
        break;
      }
    }
  }
  return report;
}

FlowReport total_flow(const Instance& instance, const Schedule& schedule) {
  FlowReport fr;
  auto done = schedule.completions();
  for (const auto& j : instance.jobs) {
    auto it = done.find(j.id);
    if (it == done.end()) throw std::logic_error("total_flow: unfinished job");
    TimeQ f = it->second - j.release;
    fr.per_job[j.id] = f;
    fr.total += f;
  }
  return fr;
}

}  // namespace flowlab
