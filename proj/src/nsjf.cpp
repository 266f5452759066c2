#include "flowlab/nsjf.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace flowlab {

Schedule run_nsjf(const std::vector<Job>& jobs, int machines,
                  const BlockingVector& blocking) {
  if (!blocking.empty() && static_cast<int>(blocking.size()) != machines)
    throw std::invalid_argument("run_nsjf: blocking length != machines");

  Schedule out;
  out.model = ScheduleModel::NonPreemptive;

  std::vector<Job> pending = jobs;
  std::sort(pending.begin(), pending.end(), [](const Job& a, const Job& b) {
    if (a.release != b.release) return a.release < b.release;
    return a.id < b.id;
  });

  std::vector<TimeQ> free_at(machines, TimeQ(0));
  for (int i = 0; i < static_cast<int>(blocking.size()); ++i) free_at[i] = blocking[i];

  // (size, id) dispatch order.
  auto cmp = [](const Job& a, const Job& b) { return dispatch_less(a, b); };
  std::set<Job, decltype(cmp)> waiting(cmp);

  size_t next_rel = 0;
  TimeQ t = 0;
  if (!pending.empty()) t = flowlab::min(TimeQ(0), pending.front().release);

  while (next_rel < pending.size() || !waiting.empty()) {
    while (next_rel < pending.size() && pending[next_rel].release <= t)
      waiting.insert(pending[next_rel++]);

    // One dispatch pass: machines in index order, smallest job first.
    for (int i = 0; i < machines && !waiting.empty(); ++i) {
      while (free_at[i] <= t && !waiting.empty()) {
        Job j = *waiting.begin();
        waiting.erase(waiting.begin());
        out.segments.push_back({j.id, i, t, t + j.size, Outcome::Completed});
        free_at[i] = t + j.size;
        if (!j.size.is_zero()) break;  // zero-size jobs free the machine instantly
      }
    }

    // Advance to the next event: a future release or a machine freeing while
    // work is waiting.
    std::optional<TimeQ> next;
    if (next_rel < pending.size()) next = pending[next_rel].release;
    if (!waiting.empty()) {
      for (int i = 0; i < machines; ++i) {
        if (free_at[i] > t && (!next || free_at[i] < *next)) next = free_at[i];
      }
    }
    if (!next) break;
    t = *next;
  }
  out.sort_segments();
  return out;
}

namespace {

bool in_threshold(const Job& j, const std::optional<TimeQ>& p) {
  return !p || j.size <= *p;
}

}  // namespace

TimeQ progress_volume_started(const Schedule& schedule, const std::vector<Job>& jobs,
                              const std::optional<TimeQ>& p, const TimeQ& t) {
  std::map<JobId, TimeQ> first_start;
  for (const auto& s : schedule.segments) {
    auto it = first_start.find(s.job);
    if (it == first_start.end() || s.start < it->second) first_start[s.job] = s.start;
  }
  TimeQ sum = 0;
  for (const auto& j : jobs) {
    if (!in_threshold(j, p) || j.release > t) continue;
    auto it = first_start.find(j.id);
    if (it != first_start.end() && it->second <= t) sum += j.size;
  }
  return sum;
}

TimeQ progress_volume_processed(const Schedule& schedule, const std::vector<Job>& jobs,
                                const std::optional<TimeQ>& p, const TimeQ& t) {
  std::map<JobId, const Job*> byid;
  for (const auto& j : jobs) byid[j.id] = &j;
  TimeQ sum = 0;
  for (const auto& s : schedule.segments) {
    const Job& j = *byid.at(s.job);
    if (!in_threshold(j, p) || j.release > t) continue;
    TimeQ hi = flowlab::min(s.end, t);
    if (hi > s.start) sum += hi - s.start;
  }
  return sum;
}

int progress_count_completed(const Schedule& schedule, const std::vector<Job>& jobs,
                             const std::optional<TimeQ>& p, const TimeQ& t) {
  auto done = schedule.completions();
  int count = 0;
  for (const auto& j : jobs) {
    if (!in_threshold(j, p) || j.release > t) continue;
    auto it = done.find(j.id);
    if (it != done.end() && it->second <= t) ++count;
  }
  return count;
}

TimeQ active_power(const BlockingVector& blocking, const TimeQ& t) {
  TimeQ sum = 0;
  for (const auto& b : blocking) {
    if (t > b) sum += t - b;
  }
  return sum;
}

TimeQ active_power_inverse(const BlockingVector& blocking, const TimeQ& w) {
  if (w.is_negative()) throw std::invalid_argument("active_power_inverse: w < 0");
  std::vector<TimeQ> b = blocking;
  std::sort(b.begin(), b.end());
  if (b.empty()) throw std::invalid_argument("active_power_inverse: no machines");
  if (w.is_zero()) return TimeQ(0);  // A(0) = 0 already
  // Between consecutive blocking times, A grows linearly with slope = number
  // of machines already unblocked.
  TimeQ acc = 0;
  for (size_t i = 0; i < b.size(); ++i) {
    TimeQ start = b[i];
    TimeQ end = (i + 1 < b.size()) ? b[i + 1] : start;
    int slope = static_cast<int>(i) + 1;
    if (i + 1 < b.size()) {
      TimeQ gain = TimeQ(slope) * (end - start);
      if (acc + gain >= w) return start + (w - acc) / TimeQ(slope);
      acc += gain;
    } else {
      return start + (w - acc) / TimeQ(slope);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace flowlab
