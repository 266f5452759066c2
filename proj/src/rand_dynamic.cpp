#include <algorithm>
#include <stdexcept>
#include <vector>

#include "flowlab/algorithms.hpp"
#include "flowlab/nsjf.hpp"
#include "flowlab/partition.hpp"

namespace flowlab {

namespace {

struct Slot {
  JobId unit_id;  // ordering id (proxy id for proxy units)
  JobId actual;   // job that really runs in this slot
  TimeQ start;
  TimeQ size;
};

struct Builder {
  const Instance* inst;
  int machines;
  int capacity;   // l
  int wmax;       // upper end of the w draw
  bool draw_machines;
  RngPolicy rng;

  std::vector<Job> small_units;           // original smalls + proxies
  std::vector<JobId> unproxied_large;     // release order
  std::map<JobId, JobId> unit_actual;     // proxy unit id -> original id

  int w_of(JobId j) const { return rng.uniform_1_to(wmax, j, 0); }
  int machine_of(JobId j) const {
    return draw_machines ? rng.uniform_below(machines, j, 1) : 0;
  }

  std::vector<std::vector<Slot>> build_timelines() const {
    Schedule s1 = run_nsjf(small_units, machines);
    std::vector<std::vector<Slot>> tl(machines);
    auto byid = [&](JobId unit) {
      auto it = unit_actual.find(unit);
      return it == unit_actual.end() ? unit : it->second;
    };
    for (const auto& seg : s1.segments) {
      tl[seg.machine].push_back({seg.job, byid(seg.job), seg.start, seg.length()});
    }
    for (auto& line : tl) {
      std::sort(line.begin(), line.end(), [](const Slot& a, const Slot& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.unit_id < b.unit_id;
      });
    }
    for (JobId j : unproxied_large) {
      const Job& job = inst->job_by_id(j);
      int q = machine_of(j);
      TimeQ target = TimeQ(w_of(j)) * job.size;
      auto& line = tl[q];
      // Walk idle gaps since the release until `target` idle has passed.
      TimeQ cursor = job.release;
      TimeQ idle = 0;
      TimeQ t_ins;
      bool found = false;
      for (const auto& slot : line) {
        TimeQ end = slot.start + slot.size;
        if (end <= cursor) continue;
        if (slot.start > cursor) {
          TimeQ gap = slot.start - cursor;
          if (idle + gap >= target) {
            t_ins = cursor + (target - idle);
            found = true;
            break;
          }
          idle += gap;
        }
        cursor = flowlab::max(cursor, end);
      }
      if (!found) t_ins = cursor + (target - idle);
      // Insert and push later slots back, preserving their order.
      auto pos = std::lower_bound(
          line.begin(), line.end(), t_ins,
          [](const Slot& s, const TimeQ& t) { return s.start < t; });
      pos = line.insert(pos, {j, j, t_ins, job.size});
      TimeQ prev_end = t_ins + job.size;
      for (auto it = pos + 1; it != line.end(); ++it) {
        if (it->start < prev_end) it->start = prev_end;
        prev_end = it->start + it->size;
      }
    }
    return tl;
  }

  Schedule build_schedule() const {
    Schedule out;
    out.model = ScheduleModel::NonPreemptive;
    auto tl = build_timelines();
    for (int q = 0; q < machines; ++q) {
      for (const auto& slot : tl[q]) {
        out.segments.push_back(
            {slot.actual, q, slot.start, slot.start + slot.size, Outcome::Completed});
      }
    }
    out.sort_segments();
    return out;
  }
};

RandRunResult run_rand_dynamic(const Instance& instance, const RngPolicy& rng,
                               int capacity, int wmax, bool draw_machines,
                               bool record_rounds) {
  instance.check();
  Builder b;
  b.inst = &instance;
  b.machines = instance.machines;
  b.capacity = capacity;
  b.wmax = wmax;
  b.draw_machines = draw_machines;
  b.rng = rng;

  PartitionState partition(capacity, instance.n());

  std::vector<Job> arrivals = instance.jobs;
  std::sort(arrivals.begin(), arrivals.end(), [](const Job& x, const Job& y) {
    if (x.release != y.release) return x.release < y.release;
    return x.id < y.id;
  });

  RandRunResult result;
  std::optional<Schedule> current;  // schedule before the next arrival

  for (const Job& job : arrivals) {
    auto is_waiting = [&](JobId j) {
      if (!current) current = b.build_schedule();
      for (const auto& seg : current->segments) {
        if (seg.job == j && seg.start < job.release) return false;  // started
      }
      return true;
    };
    ClassifyOutcome out = partition.classify(job, is_waiting);
    if (out.large) {
      b.unproxied_large.push_back(job.id);
      if (out.displaced && out.displaced->proxied) {
        const Job& proxy = *out.displaced->proxy;
        b.unproxied_large.erase(std::find(b.unproxied_large.begin(),
                                          b.unproxied_large.end(),
                                          out.displaced->job));
        Job unit = proxy;  // scheduled like a small job, runs the original
        b.small_units.push_back(unit);
        b.unit_actual[proxy.id] = out.displaced->job;
      }
    } else {
      b.small_units.push_back(job);
    }
    current.reset();
    if (record_rounds) {
      current = b.build_schedule();
      result.rounds.push_back(*current);
      result.round_times.push_back(job.release);
    }
  }

  result.schedule = current ? *current : b.build_schedule();
  if (instance.jobs.empty()) result.schedule.model = ScheduleModel::NonPreemptive;
  return result;
}

}  // namespace

RandRunResult run_rand_single(const Instance& instance, const RngPolicy& rng,
                              bool record_rounds) {
  if (instance.machines != 1)
    throw std::invalid_argument("run_rand_single: needs m = 1");
  int root_n = isqrt(BigInt(instance.n())).convert_to<int>();
  int wmax = std::max(1, root_n);
  return run_rand_dynamic(instance, rng, std::max(1, root_n), wmax, false,
                          record_rounds);
}

RandRunResult run_rand_multi(const Instance& instance, const RngPolicy& rng,
                             bool record_rounds) {
  long long n = instance.n();
  long long m = instance.machines;
  int capacity = isqrt(BigInt(n) * BigInt(m)).convert_to<int>();
  // floor(sqrt(n/m)): largest w with w^2 * m <= n
  int wmax = isqrt(BigInt(n) / BigInt(m)).convert_to<int>();
  {
    BigInt w(wmax);
    while ((w + 1) * (w + 1) * m <= n) ++w;
    while (w > 0 && w * w * m > n) --w;
    wmax = w.convert_to<int>();
  }
  if (wmax < 1) wmax = 1;  // n < m: degenerate draw, w := 1
  return run_rand_dynamic(instance, rng, std::max(1, capacity), wmax, true,
                          record_rounds);
}

}  // namespace flowlab
