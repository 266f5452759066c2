#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <vector>

#include "flowlab/baselines.hpp"
#include "flowlab/nsjf.hpp"
#include "flowlab/rng.hpp"

using namespace flowlab;

namespace {

Instance random_small_instance(uint64_t trial, int max_n, int max_m,
                               long long max_size_quarters) {
  RngPolicy rng{trial};
  Instance inst;
  inst.machines = 1 + static_cast<int>(rng.draw(0, 50) % max_m);
  int n = 1 + static_cast<int>(rng.draw(0, 51) % max_n);
  for (int i = 0; i < n; ++i) {
    TimeQ r(BigInt(rng.draw(i, 52) % 33), BigInt(4));
    TimeQ p(BigInt(1 + rng.draw(i, 53) % max_size_quarters), BigInt(4));
    inst.jobs.push_back({i, r, p});
  }
  inst.sort_jobs();
  for (int i = 0; i < n; ++i) inst.jobs[i].id = i;
  return inst;
}

TimeQ flow_of(const Instance& inst, const Schedule& s) {
  REQUIRE(validate_schedule(inst, s).ok);
  return total_flow(inst, s).total;
}

std::vector<TimeQ> event_times(const Instance& inst, const Schedule& a,
                               const Schedule& b) {
  std::set<TimeQ> ts{TimeQ(0)};
  for (const Job& j : inst.jobs) ts.insert(j.release);
  for (const auto& seg : a.segments) {
    ts.insert(seg.start);
    ts.insert(seg.end);
  }
  for (const auto& seg : b.segments) {
    ts.insert(seg.start);
    ts.insert(seg.end);
  }
  return {ts.begin(), ts.end()};
}

}  // namespace

TEST_CASE("smallest job first on one machine") {
  std::vector<Job> jobs{{0, TimeQ(0), TimeQ(3)}, {1, TimeQ(0), TimeQ(1)}};
  Schedule s = run_nsjf(jobs, 1);
  REQUIRE(s.segments.size() == 2);
  CHECK(s.segments[0].job == 1);
  CHECK(s.segments[0].start == TimeQ(0));
  CHECK(s.segments[0].end == TimeQ(1));
  CHECK(s.segments[1].job == 0);
  CHECK(s.segments[1].end == TimeQ(4));

  Instance inst;
  inst.machines = 1;
  inst.jobs = jobs;
  CHECK(flow_of(inst, s) == TimeQ(5));
}

TEST_CASE("blocking delays the start") {
  std::vector<Job> jobs{{0, TimeQ(0), TimeQ(1)}};
  Schedule s = run_nsjf(jobs, 1, {TimeQ(1)});
  REQUIRE(s.segments.size() == 1);
  CHECK(s.segments[0].start == TimeQ(1));
  CHECK(s.segments[0].end == TimeQ(2));
}

TEST_CASE("two machines, three equal jobs") {
  std::vector<Job> jobs{{0, TimeQ(0), TimeQ(2)},
                        {1, TimeQ(0), TimeQ(2)},
                        {2, TimeQ(0), TimeQ(2)}};
  Schedule s = run_nsjf(jobs, 2);
  Instance inst;
  inst.machines = 2;
  inst.jobs = jobs;
  CHECK(flow_of(inst, s) == TimeQ(8));
}

TEST_CASE("progress curve worked examples") {
  std::vector<Job> jobs{{0, TimeQ(0), TimeQ(3)}, {1, TimeQ(0), TimeQ(1)}};
  Schedule s = run_nsjf(jobs, 1);
  CHECK(progress_volume_started(s, jobs, TimeQ(3), TimeQ(0)) == TimeQ(1));
  CHECK(progress_volume_started(s, jobs, TimeQ(3), TimeQ(1)) == TimeQ(4));
  CHECK(progress_count_completed(s, jobs, TimeQ(3), TimeQ(1)) == 1);
  CHECK(progress_count_completed(s, jobs, TimeQ(3), TimeQ(4)) == 2);
  CHECK(progress_volume_started(s, jobs, TimeQ::from_fraction(1, 2), TimeQ(2)) ==
        TimeQ(0));  // no job that small

  // SRPT of (r=0,p=3),(r=1,p=1): one unit of j0 plus all of j1 by t=2.
  Instance inst;
  inst.machines = 1;
  inst.jobs = {{0, TimeQ(0), TimeQ(3)}, {1, TimeQ(1), TimeQ(1)}};
  Schedule srpt = run_srpt(inst, true);
  CHECK(flow_of(inst, srpt) == TimeQ(5));
  CHECK(progress_volume_processed(srpt, inst.jobs, TimeQ(3), TimeQ(2)) == TimeQ(2));
}

TEST_CASE("active power and its inverse") {
  BlockingVector b{TimeQ(0), TimeQ(1)};
  CHECK(active_power(b, TimeQ::from_fraction(1, 2)) == TimeQ::from_fraction(1, 2));
  CHECK(active_power(b, TimeQ(2)) == TimeQ(3));
  CHECK(active_power_inverse(b, TimeQ(3)) == TimeQ(2));
  CHECK(active_power_inverse(b, TimeQ(0)) == TimeQ(0));

  BlockingVector none{TimeQ(0), TimeQ(0), TimeQ(0)};
  CHECK(active_power(none, TimeQ(5)) == TimeQ(15));
  CHECK(active_power_inverse(none, TimeQ(15)) == TimeQ(5));
  CHECK(active_power_inverse(none, TimeQ(7)) == TimeQ::from_fraction(7, 3));

  // A(t) bounds: m*t - B <= A(t) <= m*t; inverse is a right inverse.
  RngPolicy rng{4};
  for (int trial = 0; trial < 40; ++trial) {
    int m = 1 + static_cast<int>(rng.draw(trial, 0) % 4);
    BlockingVector bv;
    TimeQ bsum;
    for (int i = 0; i < m; ++i) {
      bv.push_back(TimeQ(BigInt(rng.draw(trial * 10 + i, 1) % 9), BigInt(2)));
      bsum += bv.back();
    }
    TimeQ t(BigInt(rng.draw(trial, 2) % 41), BigInt(4));
    TimeQ a = active_power(bv, t);
    CHECK(a <= TimeQ(m) * t);
    CHECK(a >= TimeQ(m) * t - bsum);
    CHECK(active_power(bv, active_power_inverse(bv, a)) == a);
  }
}

TEST_CASE("determinism: identical inputs, identical schedules") {
  Instance inst = random_small_instance(12345, 12, 3, 16);
  Schedule a = run_nsjf(inst.jobs, inst.machines);
  Schedule b = run_nsjf(inst.jobs, inst.machines);
  REQUIRE(a.segments.size() == b.segments.size());
  for (size_t i = 0; i < a.segments.size(); ++i) {
    CHECK(a.segments[i].job == b.segments[i].job);
    CHECK(a.segments[i].start == b.segments[i].start);
  }
}

TEST_CASE("dominance and flow bounds vs migratory SRPT") {
  // Lemmas: started-volume NSJF(t+tau) >= processed-volume SRPT(t);
  // completed-count NSJF(t+2tau) >= completed-count SRPT(t);
  // F(NSJF) <= F(SRPT) + 2 n tau. tau = max size.
  for (uint64_t trial = 0; trial < 60; ++trial) {
    Instance inst = random_small_instance(trial, 10, 3, 12);
    TimeQ tau;
    std::set<TimeQ> sizes;
    for (const Job& j : inst.jobs) {
      tau = max(tau, j.size);
      sizes.insert(j.size);
    }
    Schedule nsjf = run_nsjf(inst.jobs, inst.machines);
    Schedule srpt = run_srpt(inst, true);
    TimeQ f_nsjf = flow_of(inst, nsjf);
    TimeQ f_srpt = flow_of(inst, srpt);
    CHECK(f_nsjf <= f_srpt + TimeQ(2 * inst.n()) * tau);

    for (const TimeQ& t : event_times(inst, nsjf, srpt)) {
      for (const TimeQ& p : sizes) {
        CHECK(progress_volume_started(nsjf, inst.jobs, p, t + tau) >=
              progress_volume_processed(srpt, inst.jobs, p, t));
        CHECK(progress_count_completed(nsjf, inst.jobs, p, t + TimeQ(2) * tau) >=
              progress_count_completed(srpt, inst.jobs, p, t));
      }
      CHECK(progress_volume_started(nsjf, inst.jobs, std::nullopt, t + tau) >=
            progress_volume_processed(srpt, inst.jobs, std::nullopt, t));
    }
  }
}

TEST_CASE("blocked dominance and flow bounds") {
  // Lemma A.2: blocked count dominance at t' = Ainv(m(t+2tau));
  // Lemma A.3: F(NSJF(b)) <= F(SRPT) + 2 n tau + n B / m.
  RngPolicy rng{777};
  for (uint64_t trial = 0; trial < 40; ++trial) {
    Instance inst = random_small_instance(trial + 1000, 8, 3, 12);
    const int m = inst.machines;
    BlockingVector bv;
    TimeQ bsum;
    for (int i = 0; i < m; ++i) {
      bv.push_back(TimeQ(BigInt(rng.draw(trial * 10 + i, 0) % 9), BigInt(2)));
      bsum += bv.back();
    }
    TimeQ tau;
    std::set<TimeQ> sizes;
    for (const Job& j : inst.jobs) {
      tau = max(tau, j.size);
      sizes.insert(j.size);
    }
    Schedule blocked = run_nsjf(inst.jobs, m, bv);
    Schedule srpt = run_srpt(inst, true);
    TimeQ f_blocked = flow_of(inst, blocked);
    TimeQ f_srpt = flow_of(inst, srpt);
    CHECK(f_blocked <=
          f_srpt + TimeQ(2 * inst.n()) * tau + TimeQ(inst.n()) * bsum / TimeQ(m));

    for (const TimeQ& t : event_times(inst, blocked, srpt)) {
      TimeQ tp = active_power_inverse(bv, TimeQ(m) * (t + TimeQ(2) * tau));
      for (const TimeQ& p : sizes) {
        CHECK(progress_count_completed(blocked, inst.jobs, p, tp) >=
              progress_count_completed(srpt, inst.jobs, p, t));
      }
    }
  }
}
