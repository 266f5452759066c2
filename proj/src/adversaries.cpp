#include "flowlab/adversaries.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "flowlab/rng.hpp"

namespace flowlab {

namespace {

// Sequential single-machine witness: serve the jobs in the given order,
// each starting at max(previous end, release). Returns the total flow.
TimeQ sequential_witness(const std::vector<const Job*>& order, Schedule& out,
                         int machine = 0) {
  TimeQ end = 0;
  TimeQ flow = 0;
  for (const Job* j : order) {
    TimeQ s = flowlab::max(end, j->release);
    end = s + j->size;
    out.segments.push_back({j->id, machine, s, end, Outcome::Completed});
    flow += end - j->release;
  }
  return flow;
}

// A job plus where the witness schedule puts it.
struct Planned {
  Job job;
  int machine = 0;
  TimeQ start;
};

GeneratedFamily assemble(std::vector<Planned> planned, int machines,
                         ScheduleModel witness_model) {
  std::stable_sort(planned.begin(), planned.end(),
                   [](const Planned& a, const Planned& b) {
                     return a.job.release < b.job.release;
                   });
  GeneratedFamily fam;
  fam.instance.machines = machines;
  fam.witness.model = witness_model;
  JobId id = 0;
  for (auto& p : planned) {
    p.job.id = id++;
    fam.instance.jobs.push_back(p.job);
    TimeQ end = p.start + p.job.size;
    fam.witness.segments.push_back(
        {p.job.id, p.machine, p.start, end, Outcome::Completed});
    fam.witness_flow += end - p.job.release;
  }
  fam.witness.sort_segments();
  return fam;
}

}  // namespace

GeneratedFamily gen_single_rand_lb(int n, uint64_t seed) {
  if (n < 3) throw std::invalid_argument("gen_single_rand_lb: need n >= 3");
  long long k = isqrt(BigInt(n - 2)).convert_to<long long>();
  TimeQ eps(BigInt(1), BigInt(2) * n * n);
  RngPolicy rng{seed};
  int coin = rng.coin(0) ? 1 : 0;

  std::vector<Planned> planned;
  planned.push_back({{0, TimeQ(0), TimeQ(2)}, 0, TimeQ(0)});  // plan fixed below
  // Wave 1 lands at 1 + coin; waves t = 2..k land at t + 1.
  std::vector<TimeQ> waves;
  waves.push_back(TimeQ(1 + coin));
  for (long long t = 2; t <= k; ++t) waves.push_back(TimeQ(t + 1));
  for (const TimeQ& w : waves) {
    for (long long i = 0; i < k; ++i) planned.push_back({{0, w, eps}, 0, TimeQ(0)});
  }

  // Witness: with the wave at 2 the big job runs first; with the wave at 1
  // the first wave runs first, then the big job. Later waves queue behind.
  TimeQ end = 0;
  auto place = [&](Planned& p) {
    p.start = flowlab::max(end, p.job.release);
    end = p.start + p.job.size;
  };
  if (coin == 1) {
    place(planned[0]);
    for (size_t i = 1; i < planned.size(); ++i) place(planned[i]);
  } else {
    for (long long i = 0; i < k; ++i) place(planned[1 + i]);  // wave at 1
    place(planned[0]);
    for (size_t i = 1 + k; i < planned.size(); ++i) place(planned[i]);
  }

  GeneratedFamily fam = assemble(std::move(planned), 1, ScheduleModel::NonPreemptive);
  fam.k = k;
  fam.eps = eps;
  fam.coins = {coin};
  fam.instance.meta["family"] = "single-rand-lb";
  fam.instance.meta["k"] = std::to_string(k);
  fam.instance.meta["seed"] = std::to_string(seed);
  fam.instance.meta["coins"] = std::to_string(coin);
  fam.instance.meta["witness_flow"] = fam.witness_flow.str();
  return fam;
}

namespace {

GeneratedFamily gen_gadget_family(int n, int m, uint64_t seed, bool restart) {
  if (m < 1) throw std::invalid_argument("gadget family: need m >= 1");
  // Per gadget: restart has two large jobs and 2k smalls, the plain family
  // one large and 2k smalls.
  const long long per_small = 2;
  const long long per_large = restart ? 2 : 1;
  long long k = 0;
  while (static_cast<long long>(m) * (k + 1) * (per_small * (k + 1) + per_large) <= n)
    ++k;
  if (k < 1)
    throw std::invalid_argument("gadget family: n too small for one batch");

  const long long spacing = restart ? 7 : 5;
  RngPolicy rng{seed};
  std::vector<Planned> planned;
  std::vector<int> coins;

  for (long long b = 0; b < k; ++b) {
    TimeQ t(b * spacing);
    int c = rng.coin(static_cast<uint64_t>(b), 7) ? 1 : 0;
    coins.push_back(c);
    for (int g = 0; g < m; ++g) {
      if (restart) {
        // Two large jobs; the witness runs the coin-chosen one first, a
        // small wave, then the other.
        Planned big0{{0, t, TimeQ(2)}, g, TimeQ(0)};
        Planned big1{{0, t, TimeQ(3)}, g, TimeQ(0)};
        if (c == 0) {
          big0.start = t;                // [t, t+2)
          big1.start = t + TimeQ(3);     // [t+3, t+6)
        } else {
          big1.start = t;                // [t, t+3)
          big0.start = t + TimeQ(4);     // [t+4, t+6)
        }
        planned.push_back(big0);
        planned.push_back(big1);
      } else {
        Planned big{{0, t, TimeQ(2)}, g, TimeQ(0)};
        big.start = (c == 1) ? t : t + TimeQ(2);
        planned.push_back(big);
      }
      TimeQ inv_k(BigInt(1), BigInt(k));
      TimeQ rand_base = t + TimeQ((restart ? 2 : 1) + c);
      TimeQ fixed_base = t + TimeQ(restart ? 6 : 4);
      for (long long i = 0; i < k; ++i) {
        TimeQ off = TimeQ(BigInt(i), BigInt(k));
        planned.push_back({{0, rand_base + off, inv_k}, g, rand_base + off});
        planned.push_back({{0, fixed_base + off, inv_k}, g, fixed_base + off});
      }
    }
  }

  GeneratedFamily fam = assemble(std::move(planned), m, ScheduleModel::NonPreemptive);
  fam.k = k;
  fam.coins = coins;
  fam.instance.meta["family"] = restart ? "multi-restart-lb" : "multi-lb";
  fam.instance.meta["k"] = std::to_string(k);
  fam.instance.meta["seed"] = std::to_string(seed);
  std::string cs;
  for (int c : coins) cs += static_cast<char>('0' + c);
  fam.instance.meta["coins"] = cs;
  fam.instance.meta["witness_flow"] = fam.witness_flow.str();
  return fam;
}

}  // namespace

GeneratedFamily gen_multi_lb(int n, int m, uint64_t seed) {
  return gen_gadget_family(n, m, seed, false);
}

GeneratedFamily gen_multi_restart_lb(int n, int m, uint64_t seed) {
  return gen_gadget_family(n, m, seed, true);
}

ConflictReport analyze_conflicts(const GeneratedFamily& family,
                                 const Schedule& schedule) {
  const Instance& inst = family.instance;
  auto fam_it = inst.meta.find("family");
  if (fam_it == inst.meta.end())
    throw std::invalid_argument("analyze_conflicts: not a generated family");
  const std::string& name = fam_it->second;

  // Small-job period starts, one unit long each.
  std::vector<TimeQ> periods;
  if (name == "single-rand-lb") {
    periods.push_back(TimeQ(1 + family.coins.at(0)));
    for (long long t = 2; t <= family.k; ++t) periods.push_back(TimeQ(t + 1));
  } else if (name == "multi-lb" || name == "multi-restart-lb") {
    bool restart = (name == "multi-restart-lb");
    long long spacing = restart ? 7 : 5;
    for (size_t b = 0; b < family.coins.size(); ++b) {
      TimeQ t(static_cast<long long>(b) * spacing);
      periods.push_back(t + TimeQ((restart ? 2 : 1) + family.coins[b]));
      periods.push_back(t + TimeQ(restart ? 6 : 4));
    }
  } else {
    throw std::invalid_argument("analyze_conflicts: unsupported family");
  }

  auto completions = schedule.completions();
  auto byid = inst.index_by_id();

  ConflictReport report;
  const TimeQ half = TimeQ::from_fraction(1, 2);
  for (const TimeQ& T : periods) {
    ConflictPeriod p;
    p.start = T;
    TimeQ period_end = T + TimeQ(1);
    for (const Job& j : inst.jobs) {
      if (j.size >= TimeQ(1)) continue;  // large
      if (j.release < T || j.release >= period_end) continue;
      p.small_flow += completions.at(j.id) - j.release;
    }
    for (const auto& seg : schedule.segments) {
      if (byid[seg.job]->size < TimeQ(1)) continue;
      if (seg.start < T - TimeQ(1) - half || seg.start > T + half) continue;
      TimeQ overlap = flowlab::min(seg.end, period_end) - flowlab::max(seg.start, T);
      if (overlap >= half) ++p.large_starts;
    }
    p.bound = TimeQ(p.large_starts) * TimeQ(family.k) / TimeQ(8);
    p.ok = p.small_flow >= p.bound;
    if (!p.ok) report.ok = false;
    report.periods.push_back(p);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Adaptive duels
// ---------------------------------------------------------------------------

namespace {

// Single-machine adversary against kill-and-restart policies. Phase 1 sets
// up one job the algorithm has not finished; phase 2 releases one tiny job
// each time the current run of that job survives to the next harmonic
// threshold, so an algorithm that never abandons it accumulates flow while
// the witness stays constant.
class RestartAdversary : public DuelAdversary {
 public:
  explicit RestartAdversary(int n) : n_(n) {
    eps_ = TimeQ(BigInt(1), BigInt(2) * n * n);
    cn_ = n / 2;
    remaining_ = n - 2 - cn_;
    TimeQ h = 0;
    std::vector<TimeQ> H;
    for (int i = 1; i <= n; ++i) {
      h += TimeQ(BigInt(1), BigInt(i));
      H.push_back(h);
    }
    for (int i = 0; i < n; ++i) thresholds_.push_back(H[i] / H[n - 1]);
  }

  void preload(SimEngine& sim) {
    add(sim, TimeQ(0), TimeQ(4));
    add(sim, TimeQ(2), TimeQ(1));
    wake_ = TimeQ(3);
  }

  const std::vector<Job>& jobs() const { return jobs_; }
  bool worked_big_early() const { return worked0_; }
  int remaining() const { return remaining_; }
  JobId target() const { return u_; }

  std::optional<TimeQ> next_wake(const SimEngine&) override { return wake_; }

  void on_start(SimEngine& sim, JobId j) override {
    if (j <= 1) {
      running_[j] = true;
      last_start_[j] = sim.now();
      if (j == 0 && sim.now() < TimeQ(3)) worked0_ = true;
    }
    if (phase_ == Phase::WaitStar && star_ids_.count(j) && !star_seen_) {
      star_seen_ = true;
      TimeQ t = sim.now();
      bool both_done = sim.is_completed(0) && sim.is_completed(1);
      if (both_done || t - t_star_ >= TimeQ(1)) {
        sim.log("note", -1, -1, "early exit: dumping the rest");
        flush(sim);
      } else {
        u_ = sim.is_completed(0) ? 1 : 0;
        phase_ = Phase::Gap;
        wake_ = t + TimeQ(cn_) * eps_;
        sim.log("note", u_, -1, "phase 2 target chosen");
      }
      return;
    }
    if (phase_ == Phase::Two && j == u_) arm(sim);
  }

  void on_kill(SimEngine& sim, JobId j) override {
    (void)sim;
    if (j <= 1) running_[j] = false;
    if (phase_ == Phase::Two && j == u_) wake_ = std::nullopt;
  }

  void on_complete(SimEngine& sim, JobId j) override {
    if (j <= 1) running_[j] = false;
    if ((phase_ == Phase::Gap || phase_ == Phase::Two) && j == u_) {
      // The target finished before all punishment jobs went out. Analysis
      // says this cannot happen against a work-conserving policy; flushing
      // keeps the instance well formed either way.
      sim.log("note", u_, -1, "target finished early: dumping the rest");
      flush(sim);
    }
  }

  void on_wake(SimEngine& sim) override {
    TimeQ now = sim.now();
    if (phase_ == Phase::One) {  // the decision point at time 3
      wake_ = std::nullopt;
      if (worked0_) {
        release_wave(sim, cn_ / 2, TimeQ(3), false);
        release_wave(sim, cn_ - cn_ / 2, TimeQ(7), true);
        t_star_ = TimeQ(7);
      } else {
        release_wave(sim, cn_, TimeQ(5), true);
        t_star_ = TimeQ(5);
      }
      phase_ = Phase::WaitStar;
      return;
    }
    if (phase_ == Phase::Gap) {
      phase_ = Phase::Two;
      wake_ = std::nullopt;
      sim.log("note", u_, -1, "phase 2 begins");
      if (running_[u_]) arm(sim);
      return;
    }
    if (phase_ == Phase::Two) {
      wake_ = std::nullopt;
      if (!running_[u_]) return;
      add(sim, now, eps_);
      sim.log("note", jobs_.back().id, -1, "phase 2 release");
      if (--remaining_ == 0) {
        phase_ = Phase::Done;
      } else {
        arm(sim);
      }
      return;
    }
    wake_ = std::nullopt;
  }

 private:
  enum class Phase { One, WaitStar, Gap, Two, Done };

  void add(SimEngine& sim, const TimeQ& r, const TimeQ& p) {
    Job j{next_id_++, r, p};
    jobs_.push_back(j);
    sim.add_job(j);
  }

  void release_wave(SimEngine& sim, int count, const TimeQ& r, bool star) {
    for (int i = 0; i < count; ++i) {
      add(sim, r, eps_);
      if (star) star_ids_.insert(jobs_.back().id);
    }
  }

  void flush(SimEngine& sim) {
    release_wave(sim, remaining_, sim.now(), false);
    remaining_ = 0;
    phase_ = Phase::Done;
    wake_ = std::nullopt;
  }

  // Wake at the next harmonic threshold of the target's current run.
  void arm(SimEngine& sim) {
    TimeQ elapsed = sim.now() - last_start_[u_];
    for (const TimeQ& tau : thresholds_) {
      if (tau > elapsed) {
        wake_ = last_start_[u_] + tau;
        return;
      }
    }
    wake_ = std::nullopt;  // thresholds exhausted for this run
  }

  int n_;
  TimeQ eps_;
  int cn_;
  int remaining_;
  std::vector<TimeQ> thresholds_;  // H_i / H_n, i = 1..n
  Phase phase_ = Phase::One;
  std::optional<TimeQ> wake_;
  bool worked0_ = false;
  bool star_seen_ = false;
  TimeQ t_star_;
  JobId u_ = 0;
  bool running_[2] = {false, false};
  TimeQ last_start_[2];
  std::set<JobId> star_ids_;
  std::vector<Job> jobs_;
  JobId next_id_ = 0;
};

}  // namespace

DuelResult duel_restart_lb(const PolicyFactory& factory, int n) {
  if (n < 8) throw std::invalid_argument("duel_restart_lb: need n >= 8");
  SimEngine sim(1, ScheduleModel::KillRestart);
  RestartAdversary adv(n);
  adv.preload(sim);
  auto policy = factory(n, 1);
  bool ran = sim.run(*policy, &adv, TimeQ(10) * TimeQ(n));

  DuelResult res;
  res.protocol_complete = ran && adv.remaining() == 0;
  res.instance.machines = 1;
  res.instance.jobs = adv.jobs();
  res.instance.sort_jobs();
  res.instance.meta["family"] = "duel-restart";
  res.schedule = sim.take_schedule();
  res.transcript = sim.transcript();
  if (res.protocol_complete)
    res.alg_flow = total_flow(res.instance, res.schedule).total;

  // Witness: if the algorithm worked on the big job before 3, serve the
  // medium job and the wave at 3 first, the big job after; otherwise run
  // the big job to completion, then everything in release order.
  std::vector<const Job*> order;
  std::set<JobId> placed;
  auto push = [&](const Job& j) {
    order.push_back(&j);
    placed.insert(j.id);
  };
  const auto& jobs = res.instance.jobs;
  auto byid = res.instance.index_by_id();
  if (adv.worked_big_early()) {
    push(*byid[1]);
    for (const Job& j : jobs)
      if (j.id >= 2 && j.release == TimeQ(3)) push(j);
    push(*byid[0]);
  } else {
    push(*byid[0]);
    push(*byid[1]);
  }
  for (const Job& j : jobs)
    if (!placed.count(j.id)) push(j);
  res.witness.model = ScheduleModel::NonPreemptive;
  res.witness_flow = sequential_witness(order, res.witness);
  res.witness.sort_segments();
  return res;
}

namespace {

// Unit job at 0; once the algorithm commits to it, n/m batches of m tiny
// jobs land right behind the start, each batch 1/n apart.
class Nm2Adversary : public DuelAdversary {
 public:
  Nm2Adversary(int n, int m) : n_(n), m_(m) {}

  void preload(SimEngine& sim) { add(sim, TimeQ(0), TimeQ(1)); }

  void on_start(SimEngine& sim, JobId j) override {
    if (started_ || j != 0) return;
    started_ = true;
    t_ = sim.now();
    int batches = n_ / m_;
    for (int i = 1; i <= batches; ++i) {
      TimeQ r = t_ + TimeQ(BigInt(i), BigInt(n_));
      for (int q = 0; q < m_; ++q) add(sim, r, TimeQ(BigInt(1), BigInt(n_)));
    }
  }

  const std::vector<Job>& jobs() const { return jobs_; }
  bool started() const { return started_; }
  const TimeQ& start_time() const { return t_; }

 private:
  void add(SimEngine& sim, const TimeQ& r, const TimeQ& p) {
    Job j{next_id_++, r, p};
    jobs_.push_back(j);
    sim.add_job(j);
  }

  int n_, m_;
  bool started_ = false;
  TimeQ t_;
  std::vector<Job> jobs_;
  JobId next_id_ = 0;
};

}  // namespace

DuelResult duel_nm2(const PolicyFactory& factory, int n, int m) {
  if (m < 1 || n < m) throw std::invalid_argument("duel_nm2: need n >= m >= 1");
  SimEngine sim(m, ScheduleModel::NonPreemptive);
  Nm2Adversary adv(n, m);
  adv.preload(sim);
  int batches = n / m;
  auto policy = factory(1 + batches * m, m);
  bool ran = sim.run(*policy, &adv, TimeQ(10) * TimeQ(n));

  DuelResult res;
  res.protocol_complete = ran && adv.started();
  res.instance.machines = m;
  res.instance.jobs = adv.jobs();
  res.instance.sort_jobs();
  res.instance.meta["family"] = "duel-nm2";
  res.schedule = sim.take_schedule();
  res.transcript = sim.transcript();
  if (res.protocol_complete)
    res.alg_flow = total_flow(res.instance, res.schedule).total;

  // Witness: every tiny job runs at its release (batch i puts one job per
  // machine); the unit job runs at 0 if the algorithm started late, else
  // after the tiny jobs are out of the way.
  res.witness.model = ScheduleModel::NonPreemptive;
  TimeQ last_end_m0 = 0;
  const auto& jobs = res.instance.jobs;
  for (const Job& j : jobs) {
    if (j.id == 0) continue;
    int q = (j.id - 1) % m;
    TimeQ end = j.release + j.size;
    res.witness.segments.push_back({j.id, q, j.release, end, Outcome::Completed});
    res.witness_flow += j.size;
    if (q == 0) last_end_m0 = flowlab::max(last_end_m0, end);
  }
  const Job& unit = res.instance.job_by_id(0);
  TimeQ s = adv.started() && adv.start_time() > TimeQ(1)
                ? TimeQ(0)
                : flowlab::max(TimeQ(2), last_end_m0);
  res.witness.segments.push_back({0, 0, s, s + unit.size, Outcome::Completed});
  res.witness_flow += s + unit.size - unit.release;
  res.witness.sort_segments();
  return res;
}

UnknownNDuelResult duel_unknown_n(
    const std::function<Schedule(const Instance&, uint64_t)>& runner, int n0,
    int trials, int m, uint64_t seed) {
  if (n0 < 1 || trials < 1 || m < 1)
    throw std::invalid_argument("duel_unknown_n: bad parameters");

  Instance probe;
  probe.machines = m;
  probe.jobs.push_back({0, TimeQ(0), TimeQ(2)});
  probe.meta["family"] = "duel-unknown-n-probe";

  UnknownNDuelResult res;
  res.trials = trials;
  for (int r = 0; r < trials; ++r) {
    Schedule s = runner(probe, hash_combine(seed, static_cast<uint64_t>(r)));
    std::optional<TimeQ> first;
    for (const auto& seg : s.segments) {
      if (seg.job != 0) continue;
      if (!first || seg.start < *first) first = seg.start;
    }
    if (!first)
      throw std::runtime_error("duel_unknown_n: probe run never started the job");
    res.probe_starts.push_back(*first);
  }

  // Find a unit interval [t, t+1), t in 1..n0, holding start probability at
  // least 1/(2 n0); if none exists, punish the heavy tail instead (Type B).
  res.type_a = false;
  for (int t = 1; t <= n0; ++t) {
    long long count = 0;
    for (const TimeQ& s : res.probe_starts)
      if (s >= TimeQ(t) && s < TimeQ(t + 1)) ++count;
    if (count * 2 * n0 >= trials) {
      res.type_a = true;
      res.t = t;
      break;
    }
  }

  TimeQ dummy_release = res.type_a ? TimeQ(res.t + 1) : TimeQ(n0 + 1);
  GeneratedFamily& fam = res.family;
  fam.instance.machines = m;
  fam.instance.allow_zero_size = true;
  fam.k = n0;
  fam.instance.jobs.push_back({0, TimeQ(0), TimeQ(2)});
  int dummies = n0 * m;
  for (int i = 0; i < dummies; ++i)
    fam.instance.jobs.push_back({i + 1, dummy_release, TimeQ(0)});
  fam.instance.meta["family"] = "duel-unknown-n";
  fam.instance.meta["type"] = res.type_a ? "A" : "B";
  fam.instance.meta["t"] = std::to_string(res.type_a ? res.t : n0);

  // Witness: the big job at 0, every zero-size job at its release.
  fam.witness.model = ScheduleModel::NonPreemptive;
  fam.witness.segments.push_back({0, 0, TimeQ(0), TimeQ(2), Outcome::Completed});
  for (int i = 0; i < dummies; ++i)
    fam.witness.segments.push_back(
        {i + 1, i % m, dummy_release, dummy_release, Outcome::Completed});
  fam.witness_flow = TimeQ(2);
  fam.instance.meta["witness_flow"] = fam.witness_flow.str();
  return res;
}

}  // namespace flowlab
