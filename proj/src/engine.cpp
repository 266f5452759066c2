#include "flowlab/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace flowlab {

using nlohmann::json;

std::string transcript_to_jsonl(const std::vector<TranscriptEvent>& events) {
  std::ostringstream os;
  for (const auto& e : events) {
    json line;
    line["t"] = e.time.str();
    line["kind"] = e.kind;
    if (e.job >= 0) line["job"] = e.job;
    if (e.machine >= 0) line["machine"] = e.machine;
    if (!e.note.empty()) line["note"] = e.note;
    os << line.dump() << "\n";
  }
  return os.str();
}

SimEngine::SimEngine(int machines, ScheduleModel model)
    : machines_(machines),
      model_(model),
      machine_job_(machines, -1),
      machine_start_(machines, TimeQ(0)) {
  if (machines < 1) throw std::invalid_argument("SimEngine: machines < 1");
}

void SimEngine::add_job(const Job& job) {
  if (recs_.count(job.id)) throw std::logic_error("SimEngine: duplicate job id");
  if (job.release < now_) throw std::logic_error("SimEngine: release in the past");
  recs_[job.id] = Rec{job};
  pending_.insert({job.release, job.id});
}

void SimEngine::start(JobId j, int machine) {
  Rec& r = rec(j);
  if (!r.released || r.completed || r.machine >= 0)
    throw std::logic_error("SimEngine::start: job not startable");
  if (machine_job_[machine] >= 0)
    throw std::logic_error("SimEngine::start: machine busy");
  log("start", j, machine);
  if (!r.first_start) r.first_start = now_;
  if (r.job.size.is_zero()) {
    segments_.push_back({j, machine, now_, now_, Outcome::Completed});
    r.completed = true;
    log("complete", j, machine);
    if (adversary_) {
      adversary_->on_start(*this, j);
      adversary_->on_complete(*this, j);
    }
    return;
  }
  machine_job_[machine] = j;
  machine_start_[machine] = now_;
  r.machine = machine;
  r.started_at = now_;
  ++running_count_;
  if (adversary_) adversary_->on_start(*this, j);
}

void SimEngine::kill(JobId j) {
  Rec& r = rec(j);
  if (r.machine < 0) throw std::logic_error("SimEngine::kill: job not running");
  int machine = r.machine;
  if (r.started_at < now_) {
    segments_.push_back({j, machine, r.started_at, now_, Outcome::Killed});
  }  // a same-instant kill leaves no trace
  machine_job_[machine] = -1;
  r.machine = -1;
  --running_count_;
  log("kill", j, machine);
  if (adversary_) adversary_->on_kill(*this, j);
}

void SimEngine::log(const std::string& kind, JobId job, int machine,
                    std::string note) {
  transcript_.push_back({now_, kind, job, machine, std::move(note)});
}

bool SimEngine::run(SchedulingPolicy& policy, DuelAdversary* adversary,
                    std::optional<TimeQ> horizon) {
  adversary_ = adversary;
  while (true) {
    std::optional<TimeQ> t;
    auto consider = [&](const TimeQ& x) {
      if (x < now_) return;
      if (!t || x < *t) t = x;
    };
    if (!pending_.empty()) consider(pending_.begin()->first);
    for (int i = 0; i < machines_; ++i) {
      if (machine_job_[i] >= 0)
        consider(machine_start_[i] + rec(machine_job_[i]).job.size);
    }
    if (adversary) {
      auto w = adversary->next_wake(*this);
      if (w) consider(*w);
    }
    if (!t) break;
    if (horizon && *t > *horizon) {
      log("horizon", -1, -1, "guard tripped");
      adversary_ = nullptr;
      return false;
    }
    now_ = *t;
    process_time(policy, adversary);
  }
  adversary_ = nullptr;
  return true;
}

void SimEngine::process_time(SchedulingPolicy& policy, DuelAdversary* adversary) {
  // Completions first (job id order within the instant).
  std::vector<JobId> done;
  for (int i = 0; i < machines_; ++i) {
    JobId j = machine_job_[i];
    if (j >= 0 && machine_start_[i] + rec(j).job.size == now_) done.push_back(j);
  }
  std::sort(done.begin(), done.end());
  for (JobId j : done) {
    Rec& r = rec(j);
    segments_.push_back({j, r.machine, r.started_at, now_, Outcome::Completed});
    machine_job_[r.machine] = -1;
    r.machine = -1;
    r.completed = true;
    --running_count_;
    log("complete", j);
    if (adversary) adversary->on_complete(*this, j);
  }

  // Releases, adversary wake-ups, then one dispatch pass. Loop in case the
  // adversary or a start triggers further same-instant releases.
  bool first_pass = true;
  while (true) {
    bool any = first_pass;
    first_pass = false;
    while (!pending_.empty() && pending_.begin()->first <= now_) {
      JobId j = pending_.begin()->second;
      pending_.erase(pending_.begin());
      Rec& r = rec(j);
      r.released = true;
      ++released_count_;
      log("release", j);
      policy.on_release(*this, r.job);
      any = true;
    }
    if (adversary) {
      auto w = adversary->next_wake(*this);
      if (w && *w <= now_) {
        adversary->on_wake(*this);
        any = true;
        continue;  // wake may inject releases at now
      }
    }
    if (!any) break;
    policy.dispatch(*this);
  }
}

Schedule SimEngine::take_schedule() {
  Schedule s;
  s.model = model_;
  s.segments = segments_;
  s.sort_segments();
  return s;
}

}  // namespace flowlab
