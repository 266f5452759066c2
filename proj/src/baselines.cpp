#include "flowlab/baselines.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace flowlab {

Schedule run_srpt(const Instance& instance, bool migratory) {
  instance.check();
  const int m = instance.machines;
  Schedule out;
  out.model = migratory ? ScheduleModel::PreemptiveMigratory : ScheduleModel::Preemptive;

  std::vector<Job> arrivals = instance.jobs;  // already (release, id) sorted
  size_t idx = 0;
  std::map<JobId, TimeQ> remaining;
  std::map<JobId, int> assigned;  // non-migratory home machine
  std::vector<JobId> cur(m, -1);
  std::vector<TimeQ> seg_start(m, TimeQ(0));
  TimeQ t = 0;

  auto close_segment = [&](int i) {
    if (cur[i] >= 0 && seg_start[i] < t)
      out.segments.push_back({cur[i], i, seg_start[i], t, Outcome::Completed});
    cur[i] = -1;
  };

  while (true) {
    // completions at t
    for (int i = 0; i < m; ++i) {
      if (cur[i] >= 0 && remaining.at(cur[i]).is_zero()) {
        JobId j = cur[i];
        close_segment(i);
        remaining.erase(j);
      }
    }
    // releases at t
    while (idx < arrivals.size() && arrivals[idx].release <= t) {
      const Job& j = arrivals[idx++];
      if (j.size.is_zero()) {
        out.segments.push_back({j.id, 0, j.release, j.release, Outcome::Completed});
      } else {
        remaining[j.id] = j.size;
      }
    }
    // choose the running set
    std::vector<std::pair<TimeQ, JobId>> alive;
    alive.reserve(remaining.size());
    for (const auto& [j, rem] : remaining) alive.push_back({rem, j});
    std::sort(alive.begin(), alive.end());

    std::vector<JobId> next_cur(m, -1);
    if (migratory) {
      std::vector<JobId> chosen;
      for (const auto& [rem, j] : alive) {
        if (static_cast<int>(chosen.size()) == m) break;
        chosen.push_back(j);
      }
      std::vector<bool> taken(m, false);
      std::vector<JobId> unplaced;
      for (JobId j : chosen) {  // keep running jobs on their machine
        int i = -1;
        for (int q = 0; q < m; ++q)
          if (cur[q] == j) { i = q; break; }
        if (i >= 0) { next_cur[i] = j; taken[i] = true; }
        else unplaced.push_back(j);
      }
      for (JobId j : unplaced) {
        for (int q = 0; q < m; ++q)
          if (!taken[q]) { next_cur[q] = j; taken[q] = true; break; }
      }
    } else {
      std::vector<bool> taken(m, false);
      int placed = 0;
      for (const auto& [rem, j] : alive) {
        if (placed == m) break;
        auto it = assigned.find(j);
        if (it != assigned.end()) {
          if (!taken[it->second]) {
            next_cur[it->second] = j;
            taken[it->second] = true;
            ++placed;
          }
        } else {
          for (int q = 0; q < m; ++q) {
            if (!taken[q]) {
              assigned[j] = q;
              next_cur[q] = j;
              taken[q] = true;
              ++placed;
              break;
            }
          }
        }
      }
    }
    for (int i = 0; i < m; ++i) {
      if (cur[i] != next_cur[i]) {
        close_segment(i);
        if (next_cur[i] >= 0) {
          cur[i] = next_cur[i];
          seg_start[i] = t;
        }
      }
    }

    // next event: a release or the earliest running completion
    std::optional<TimeQ> next;
    if (idx < arrivals.size()) next = arrivals[idx].release;
    for (int i = 0; i < m; ++i) {
      if (cur[i] >= 0) {
        TimeQ c = t + remaining.at(cur[i]);
        if (!next || c < *next) next = c;
      }
    }
    if (!next) break;
    TimeQ dt = *next - t;
    for (int i = 0; i < m; ++i) {
      if (cur[i] >= 0) remaining.at(cur[i]) -= dt;
    }
    t = *next;
  }
  out.sort_segments();
  return out;
}

namespace {

struct BruteForce {
  std::vector<const Job*> jobs;  // by id
  std::unordered_map<uint32_t, std::pair<TimeQ, std::vector<JobId>>> order_cache;
  std::unordered_map<uint64_t, std::pair<TimeQ, uint32_t>> split_cache;  // (k,mask) -> (flow, first-machine subset)

  TimeQ subset_size(uint32_t mask) const {
    TimeQ s = 0;
    for (int j = 0; j < static_cast<int>(jobs.size()); ++j)
      if (mask & (1u << j)) s += jobs[j]->size;
    return s;
  }

  const std::pair<TimeQ, std::vector<JobId>>& best_order(uint32_t mask) {
    auto it = order_cache.find(mask);
    if (it != order_cache.end()) return it->second;

    std::optional<TimeQ> best;
    std::vector<JobId> best_seq, seq;
    std::function<void(uint32_t, const TimeQ&, const TimeQ&)> dfs =
        [&](uint32_t rem, const TimeQ& cur_end, const TimeQ& acc) {
          if (best && acc + subset_size(rem) >= *best) return;  // flow >= p per job
          if (rem == 0) {
            best = acc;
            best_seq = seq;
            return;
          }
          for (int j = 0; j < static_cast<int>(jobs.size()); ++j) {
            if (!(rem & (1u << j))) continue;
            TimeQ s = flowlab::max(cur_end, jobs[j]->release);
            TimeQ e = s + jobs[j]->size;
            seq.push_back(j);
            dfs(rem & ~(1u << j), e, acc + (e - jobs[j]->release));
            seq.pop_back();
          }
        };
    dfs(mask, TimeQ(0), TimeQ(0));
    return order_cache.emplace(mask, std::make_pair(*best, best_seq)).first->second;
  }

  TimeQ solve(int k, uint32_t mask) {
    if (mask == 0) return 0;
    if (k == 1) return best_order(mask).first;
    uint64_t key = (static_cast<uint64_t>(k) << 32) | mask;
    auto it = split_cache.find(key);
    if (it != split_cache.end()) return it->second.first;

    uint32_t low = mask & (~mask + 1);  // symmetry break: lowest id stays on machine 1
    std::optional<TimeQ> best;
    uint32_t best_sub = 0;
    uint32_t sub = mask;
    while (true) {
      if (sub & low) {
        TimeQ v = best_order(sub).first + solve(k - 1, mask & ~sub);
        if (!best || v < *best) { best = v; best_sub = sub; }
      }
      if (sub == 0) break;
      sub = (sub - 1) & mask;
    }
    split_cache[key] = {*best, best_sub};
    return *best;
  }
};

}  // namespace

std::pair<Schedule, TimeQ> brute_force_opt_np(const Instance& instance) {
  instance.check();
  const int n = instance.n();
  const int m = instance.machines;
  if (n > 9 || m > 3)
    throw std::invalid_argument("brute_force_opt_np: guarded to n <= 9, m <= 3");

  Schedule sched;
  sched.model = ScheduleModel::NonPreemptive;
  if (n == 0) return {sched, TimeQ(0)};

  BruteForce bf;
  auto byid = instance.index_by_id();
  for (int j = 0; j < n; ++j) bf.jobs.push_back(byid[j]);

  uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  TimeQ total = bf.solve(m, full);

  // Reconstruct the witness: machine i takes the cached first-machine subset
  // at each split level, the last machine takes the remainder.
  uint32_t mask = full;
  for (int machine = 0; machine < m; ++machine) {
    uint32_t sub;
    if (machine == m - 1 || mask == 0) {
      sub = mask;
    } else {
      uint64_t key = (static_cast<uint64_t>(m - machine) << 32) | mask;
      sub = bf.split_cache.at(key).second;
    }
    if (sub != 0) {
      const auto& [flow, seq] = bf.best_order(sub);
      TimeQ end = 0;
      for (JobId j : seq) {
        TimeQ s = flowlab::max(end, bf.jobs[j]->release);
        end = s + bf.jobs[j]->size;
        sched.segments.push_back({j, machine, s, end, Outcome::Completed});
      }
    }
    mask &= ~sub;
  }
  sched.sort_segments();
  return {sched, total};
}

Schedule reassign_to_fewer_machines(const Schedule& schedule,
                                    const Instance& instance, int k) {
  const int m = instance.machines;
  if (k < 1 || k >= m)
    throw std::invalid_argument("reassign_to_fewer_machines: need 1 <= k <= m-1");

  // Home machine per job; the transform needs single-machine jobs.
  std::map<JobId, int> home;
  std::map<JobId, TimeQ> first_start;
  std::vector<TimeQ> load(m, TimeQ(0));
  for (const auto& s : schedule.segments) {
    auto it = home.find(s.job);
    if (it == home.end()) {
      home[s.job] = s.machine;
      first_start[s.job] = s.start;
    } else if (it->second != s.machine) {
      throw std::invalid_argument(
          "reassign_to_fewer_machines: job spans machines");
    }
    if (s.start < first_start[s.job]) first_start[s.job] = s.start;
    load[s.machine] += s.length();
  }

  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (load[a] != load[b]) return load[a] < load[b];
    return a < b;
  });
  std::vector<bool> light(m, false);
  for (int i = 0; i < k; ++i) light[order[i]] = true;

  std::vector<int> new_index(m, -1);
  int next = 0;
  for (int i = 0; i < m; ++i)
    if (!light[i]) new_index[i] = next++;
  const int survivors = m - k;

  // Resident timelines on surviving machines.
  std::vector<std::vector<ScheduleSegment>> line(survivors);
  std::vector<std::set<JobId>> jobs_on(survivors);
  std::vector<std::pair<TimeQ, JobId>> moved;  // (original first start, id)
  std::map<JobId, const Job*> byjob;
  for (const auto& j : instance.jobs) byjob[j.id] = &j;

  for (const auto& s : schedule.segments) {
    if (light[s.machine]) continue;
    ScheduleSegment t = s;
    t.machine = new_index[s.machine];
    line[t.machine].push_back(t);
    jobs_on[t.machine].insert(s.job);
  }
  for (auto& l : line) {
    std::sort(l.begin(), l.end(), [](const ScheduleSegment& a, const ScheduleSegment& b) {
      return a.start < b.start;
    });
  }
  for (const auto& [j, h] : home) {
    if (light[h]) moved.push_back({first_start[j], j});
  }
  std::sort(moved.begin(), moved.end());

  for (const auto& [t0, j] : moved) {
    // fewest-jobs surviving machine, ties by index
    int target = 0;
    for (int q = 1; q < survivors; ++q)
      if (jobs_on[q].size() < jobs_on[target].size()) target = q;
    auto& l = line[target];
    const TimeQ p = byjob.at(j)->size;

    // split a resident segment straddling t0
    for (size_t i = 0; i < l.size(); ++i) {
      if (l[i].start < t0 && t0 < l[i].end) {
        ScheduleSegment tail = l[i];
        tail.start = t0;
        l[i].end = t0;
        l.insert(l.begin() + i + 1, tail);
        break;
      }
    }
    auto pos = std::lower_bound(
        l.begin(), l.end(), t0,
        [](const ScheduleSegment& s, const TimeQ& t) { return s.start < t; });
    pos = l.insert(pos, {j, target, t0, t0 + p, Outcome::Completed});
    TimeQ prev_end = t0 + p;
    for (auto it = pos + 1; it != l.end(); ++it) {
      if (it->start < prev_end) {
        TimeQ len = it->length();
        it->start = prev_end;
        it->end = it->start + len;
      }
      prev_end = it->end;
    }
    jobs_on[target].insert(j);
  }

  Schedule out;
  out.model = schedule.model;
  for (const auto& l : line)
    for (const auto& s : l) out.segments.push_back(s);
  out.sort_segments();
  return out;
}

}  // namespace flowlab
