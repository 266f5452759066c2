#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "flowlab/adversaries.hpp"
#include "flowlab/algorithms.hpp"
#include "flowlab/harness.hpp"

using namespace flowlab;

namespace {

TimeQ checked_flow(const Instance& inst, const Schedule& s) {
  ValidationReport vr = validate_schedule(inst, s);
  REQUIRE_MESSAGE(vr.ok, vr.summary());
  return total_flow(inst, s).total;
}

PolicyFactory greedy_factory() {
  return [](int, int) { return std::make_unique<GreedyPolicy>(); };
}

PolicyFactory kill_restart_factory() {
  return [](int n, int m) { return std::make_unique<KillRestartPolicy>(n, m); };
}

TimeQ harmonic(int n) {
  TimeQ h;
  for (int i = 1; i <= n; ++i) h += TimeQ::from_fraction(1, i);
  return h;
}

// Test-only policy: serves every job except job 1 in id order, and holds
// job 1 back until time 7 so the adaptive restart adversary reaches its
// punishment phase with job 1 as the unsolved target.
class HoldBackPolicy : public SchedulingPolicy {
 public:
  void on_release(SimEngine&, const Job& job) override { ids_.insert(job.id); }
  void dispatch(SimEngine& sim) override {
    if (!sim.is_idle(0)) return;
    for (JobId j : ids_) {
      if (j == 1 || !sim.is_waiting(j)) continue;
      sim.start(j, 0);
      return;
    }
    if (sim.is_waiting(1) && sim.now() >= TimeQ(7)) sim.start(1, 0);
  }

 private:
  std::set<JobId> ids_;
};

}  // namespace

TEST_CASE("single-machine randomized family: shape and witness") {
  GeneratedFamily fam = gen_single_rand_lb(102, 3);
  CHECK(fam.k == 10);
  CHECK(fam.eps == TimeQ::from_fraction(1, 20808));
  CHECK(fam.instance.n() == 101);  // 1 + k*k
  CHECK(fam.instance.machines == 1);
  REQUIRE(fam.coins.size() == 1);
  CHECK(fam.instance.meta.at("family") == "single-rand-lb");
  CHECK(fam.instance.meta.at("coins") == std::to_string(fam.coins[0]));
  CHECK(fam.instance.meta.at("witness_flow") == fam.witness_flow.str());
  CHECK(checked_flow(fam.instance, fam.witness) == fam.witness_flow);
  CHECK(fam.witness_flow <= TimeQ(4));
  CHECK(fam.witness_flow >= TimeQ(2));

  SUBCASE("both coin outcomes occur and the build is deterministic") {
    std::set<int> seen;
    for (uint64_t seed = 0; seed < 20; ++seed)
      seen.insert(gen_single_rand_lb(102, seed).coins[0]);
    CHECK(seen == std::set<int>{0, 1});

    GeneratedFamily again = gen_single_rand_lb(102, 3);
    REQUIRE(again.instance.n() == fam.instance.n());
    for (int i = 0; i < fam.instance.n(); ++i) {
      CHECK(again.instance.jobs[i].release == fam.instance.jobs[i].release);
      CHECK(again.instance.jobs[i].size == fam.instance.jobs[i].size);
    }
  }
  SUBCASE("too small") { CHECK_THROWS(gen_single_rand_lb(2, 0)); }
}

TEST_CASE("gadget families: job counts, witness bounds, reproducibility") {
  struct Row {
    int n, m;
    long long k_lb, k_restart;
  };
  // largest k with m*k*(2k+1) <= n, resp. m*k*(2k+2) <= n
  std::vector<Row> rows{{58, 1, 5, 4}, {230, 2, 7, 7}, {926, 4, 10, 10}};
  for (const Row& row : rows) {
    CAPTURE(row.n);
    CAPTURE(row.m);
    GeneratedFamily lb = gen_multi_lb(row.n, row.m, 11);
    CHECK(lb.k == row.k_lb);
    CHECK(lb.instance.n() == row.m * row.k_lb * (2 * row.k_lb + 1));
    CHECK(lb.instance.n() <= row.n);
    CHECK(checked_flow(lb.instance, lb.witness) == lb.witness_flow);
    CHECK(lb.witness_flow <= TimeQ(6 * row.m * row.k_lb));
    CHECK(static_cast<long long>(lb.coins.size()) == lb.k);
    CHECK(lb.instance.meta.at("family") == "multi-lb");

    GeneratedFamily rs = gen_multi_restart_lb(row.n, row.m, 11);
    CHECK(rs.k == row.k_restart);
    CHECK(rs.instance.n() == row.m * row.k_restart * (2 * row.k_restart + 2));
    CHECK(rs.instance.n() <= row.n);
    CHECK(checked_flow(rs.instance, rs.witness) == rs.witness_flow);
    CHECK(rs.witness_flow <= TimeQ(11 * row.m * row.k_restart));
    CHECK(rs.instance.meta.at("family") == "multi-restart-lb");
  }

  GeneratedFamily a = gen_multi_lb(230, 2, 42);
  GeneratedFamily b = gen_multi_lb(230, 2, 42);
  CHECK(a.coins == b.coins);
  std::string cs;
  for (int c : a.coins) cs += static_cast<char>('0' + c);
  CHECK(a.instance.meta.at("coins") == cs);
}

TEST_CASE("conflict analysis") {
  GeneratedFamily fam = gen_multi_lb(58, 1, 7);

  SUBCASE("the witness schedule never conflicts") {
    ConflictReport rep = analyze_conflicts(fam, fam.witness);
    CHECK(rep.ok);
    REQUIRE(rep.periods.size() == 2 * fam.coins.size());
    for (const ConflictPeriod& p : rep.periods) {
      CHECK(p.large_starts == 0);
      CHECK(p.bound == TimeQ(0));
    }
  }
  SUBCASE("greedy pays the per-period bound") {
    Schedule s = run_algorithm("greedy", fam.instance, 0);
    checked_flow(fam.instance, s);
    ConflictReport rep = analyze_conflicts(fam, s);
    CHECK(rep.ok);
    for (const ConflictPeriod& p : rep.periods) CHECK(p.small_flow >= p.bound);
  }
  SUBCASE("kill-restart pays the bound on the restart family") {
    GeneratedFamily rs = gen_multi_restart_lb(58, 1, 7);
    Schedule s = run_algorithm("kill-restart", rs.instance, 0);
    checked_flow(rs.instance, s);
    CHECK(analyze_conflicts(rs, s).ok);
  }
  SUBCASE("single-machine family periods follow the coin") {
    GeneratedFamily single = gen_single_rand_lb(27, 1);
    Schedule s = run_algorithm("greedy", single.instance, 0);
    ConflictReport rep = analyze_conflicts(single, s);
    CHECK(rep.ok);
    REQUIRE(static_cast<long long>(rep.periods.size()) == single.k);
    CHECK(rep.periods[0].start == TimeQ(1 + single.coins[0]));
    for (long long t = 2; t <= single.k; ++t)
      CHECK(rep.periods[t - 1].start == TimeQ(t + 1));
  }
  SUBCASE("rejects instances without family metadata") {
    GeneratedFamily plain;
    RandomSpec spec;
    plain.instance = random_instance(spec, 1);
    CHECK_THROWS(analyze_conflicts(plain, Schedule{}));
  }
}

TEST_CASE("adaptive restart duel: protocol and flow bound") {
  const int n = 100;
  TimeQ bound = (TimeQ(n - 2) - TimeQ(n / 2)) / harmonic(n) - TimeQ(1);
  for (bool greedy : {true, false}) {
    CAPTURE(greedy);
    DuelResult res =
        duel_restart_lb(greedy ? greedy_factory() : kill_restart_factory(), n);
    CHECK(res.protocol_complete);
    CHECK(res.instance.n() == n);  // the adversary releases exactly n jobs
    CHECK(checked_flow(res.instance, res.schedule) == res.alg_flow);
    CHECK(checked_flow(res.instance, res.witness) == res.witness_flow);
    CHECK(res.witness_flow <= TimeQ(10));
    CHECK(res.alg_flow >= bound);
    CHECK_FALSE(res.transcript.empty());
  }
  CHECK_THROWS(duel_restart_lb(greedy_factory(), 7));
}

TEST_CASE("adaptive restart duel: punishment follows harmonic thresholds") {
  // Hold job 1 back so it is the unsolved target; once it runs, one tiny
  // job must land at each threshold H_i / H_n of the run. n = 8: H_8 =
  // 761/280, so the offsets are 280/761 and 420/761.
  const int n = 8;
  DuelResult res = duel_restart_lb(
      [](int, int) { return std::make_unique<HoldBackPolicy>(); }, n);
  CHECK(res.protocol_complete);
  REQUIRE(res.instance.n() == n);
  checked_flow(res.instance, res.schedule);

  std::optional<TimeQ> target_start;
  for (const auto& seg : res.schedule.segments)
    if (seg.job == 1 && (!target_start || seg.start < *target_start))
      target_start = seg.start;
  REQUIRE(target_start.has_value());

  const Job& p1 = res.instance.job_by_id(6);
  const Job& p2 = res.instance.job_by_id(7);
  CHECK(p1.release == *target_start + TimeQ::from_fraction(280, 761));
  CHECK(p2.release == *target_start + TimeQ::from_fraction(420, 761));

  int phase2 = 0;
  for (const auto& ev : res.transcript)
    if (ev.note == "phase 2 release") ++phase2;
  CHECK(phase2 == 2);
}

TEST_CASE("batch-flood duel") {
  SUBCASE("greedy on one machine") {
    DuelResult res = duel_nm2(greedy_factory(), 100, 1);
    CHECK(res.protocol_complete);
    CHECK(res.instance.n() == 101);
    CHECK(checked_flow(res.instance, res.schedule) == res.alg_flow);
    CHECK(checked_flow(res.instance, res.witness) == res.witness_flow);
    CHECK(res.witness_flow == TimeQ(4));
    // sum_{i=1}^{n} i/n: every batch job waits behind the unit job
    TimeQ bound = TimeQ::from_fraction(100 * 101 / 2, 100);
    CHECK(res.alg_flow >= bound);
  }
  SUBCASE("greedy on two machines") {
    DuelResult res = duel_nm2(greedy_factory(), 10, 2);
    CHECK(res.protocol_complete);
    CHECK(res.instance.n() == 11);  // 1 + (n/m)*m
    CHECK(checked_flow(res.instance, res.schedule) == res.alg_flow);
    checked_flow(res.instance, res.witness);
    TimeQ bound;
    for (int i = 1; i <= 5; ++i) bound += TimeQ::from_fraction(i, 10);
    CHECK(res.alg_flow >= bound);
  }
  SUBCASE("bad parameters") { CHECK_THROWS(duel_nm2(greedy_factory(), 1, 2)); }
}

TEST_CASE("unknown-length duel: start-time probing") {
  auto fixed_start_runner = [](const TimeQ& start) {
    return [start](const Instance& inst, uint64_t) {
      Schedule s;
      s.model = ScheduleModel::NonPreemptive;
      s.segments.push_back(
          {0, 0, start, start + inst.jobs[0].size, Outcome::Completed});
      return s;
    };
  };

  SUBCASE("mass inside a unit window is Type A") {
    UnknownNDuelResult res =
        duel_unknown_n(fixed_start_runner(TimeQ::from_fraction(3, 2)), 10, 20,
                       1, 99);
    CHECK(res.type_a);
    CHECK(res.t == 1);
    CHECK(res.trials == 20);
    CHECK(static_cast<int>(res.probe_starts.size()) == 20);
    CHECK(res.family.instance.n() == 11);  // probe target + n0 * m dummies
    CHECK(res.family.instance.allow_zero_size);
    CHECK(res.family.instance.jobs.back().release == TimeQ(2));
    CHECK(res.family.instance.meta.at("type") == "A");
    CHECK(checked_flow(res.family.instance, res.family.witness) ==
          res.family.witness_flow);
    CHECK(res.family.witness_flow == TimeQ(2));
  }
  SUBCASE("early starts escape every window: Type B") {
    UnknownNDuelResult res = duel_unknown_n(
        fixed_start_runner(TimeQ::from_fraction(1, 2)), 10, 20, 2, 99);
    CHECK_FALSE(res.type_a);
    CHECK(res.family.instance.n() == 21);
    CHECK(res.family.instance.jobs.back().release == TimeQ(11));  // n0 + 1
    CHECK(res.family.instance.meta.at("type") == "B");
    CHECK(checked_flow(res.family.instance, res.family.witness) ==
          res.family.witness_flow);
  }
  SUBCASE("the frequency threshold 1/(2 n0) is inclusive") {
    // exactly one hit out of trials = 2 * n0 runs
    int calls = 0;
    auto runner = [&calls](const Instance& inst, uint64_t) {
      TimeQ start = (calls++ == 0) ? TimeQ::from_fraction(3, 2)
                                   : TimeQ::from_fraction(1, 2);
      Schedule s;
      s.model = ScheduleModel::NonPreemptive;
      s.segments.push_back(
          {0, 0, start, start + inst.jobs[0].size, Outcome::Completed});
      return s;
    };
    UnknownNDuelResult res = duel_unknown_n(runner, 10, 20, 1, 99);
    CHECK(res.type_a);
    CHECK(res.t == 1);
  }
  SUBCASE("bad parameters") {
    CHECK_THROWS(duel_unknown_n(fixed_start_runner(TimeQ(1)), 0, 1, 1, 0));
  }
}

TEST_CASE("unknown-length duel drives the doubling policy to Type A") {
  // The randomized single-machine policy inserts a lone size-2 job after one
  // unit of idle time, so its start mass sits in [t, t+1) deterministically.
  auto runner = [](const Instance& inst, uint64_t seed) {
    return run_rand_single(inst, RngPolicy{seed}).schedule;
  };
  UnknownNDuelResult res = duel_unknown_n(runner, 8, 16, 1, 5);
  CHECK(res.type_a);
  CHECK(res.t >= 1);
}
