#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <string>
#include <vector>

#include "flowlab/baselines.hpp"
#include "flowlab/harness.hpp"

using namespace flowlab;

namespace {

Instance two_job_instance() {
  Instance inst;
  inst.machines = 1;
  inst.jobs = {{0, TimeQ(0), TimeQ(3)}, {1, TimeQ(1), TimeQ(1)}};
  return inst;
}

}  // namespace

TEST_CASE("ratio baselines") {
  Instance inst = two_job_instance();

  SUBCASE("auto picks brute force on tiny instances") {
    RatioReport r = compute_ratio(TimeQ(6), inst, BaselinePolicy::Auto);
    CHECK(r.baseline_used == BaselineKind::BruteForce);
    CHECK(r.baseline_flow == TimeQ(6));
    CHECK(r.ratio == TimeQ(1));
    CHECK(r.exact);
  }
  SUBCASE("preemptive optimum on one machine") {
    RatioReport r = compute_ratio(TimeQ(6), inst, BaselinePolicy::Srpt);
    CHECK(r.baseline_flow == TimeQ(5));
    CHECK(r.ratio == TimeQ::from_fraction(6, 5));
    CHECK(r.exact);
  }
  SUBCASE("sum of sizes is a bound, not an optimum") {
    RatioReport r = compute_ratio(TimeQ(6), inst, BaselinePolicy::SumP);
    CHECK(r.baseline_used == BaselineKind::SumP);
    CHECK(r.baseline_flow == TimeQ(4));
    CHECK(r.ratio == TimeQ::from_fraction(3, 2));
    CHECK_FALSE(r.exact);
  }
  SUBCASE("witness baseline needs generator metadata") {
    CHECK_THROWS(compute_ratio(TimeQ(6), inst, BaselinePolicy::Witness));
    Instance gen = make_family_instance("multi-lb", 58, 1, 7);
    TimeQ w = TimeQ::parse(gen.meta.at("witness_flow"));
    RatioReport r = compute_ratio(w, gen, BaselinePolicy::Witness);
    CHECK(r.baseline_used == BaselineKind::Witness);
    CHECK(r.ratio == TimeQ(1));
    CHECK_FALSE(r.exact);
  }
  SUBCASE("auto prefers the witness over sum-p on large instances") {
    Instance gen = make_family_instance("multi-lb", 230, 2, 7);
    RatioReport r = compute_ratio(TimeQ(100), gen, BaselinePolicy::Auto);
    CHECK(r.baseline_used == BaselineKind::Witness);
  }
  SUBCASE("zero baseline is rejected") {
    Instance empty;
    empty.machines = 2;  // m = 2 skips SRPT; no witness; sum p = 0
    empty.jobs = {};
    CHECK_THROWS(compute_ratio(TimeQ(1), empty, BaselinePolicy::SumP));
  }
}

TEST_CASE("log-log least squares") {
  SUBCASE("pure power law is recovered exactly") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {4.0, 16.0, 64.0, 256.0}) pts.push_back({x, 3.0 * std::sqrt(x)});
    FitResult f = fit_scaling(pts);
    CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("constant data has slope zero") {
    FitResult f = fit_scaling({{2, 7}, {8, 7}, {32, 7}});
    CHECK(f.slope == doctest::Approx(0.0));
  }
  SUBCASE("rejects short or non-positive input") {
    CHECK_THROWS(fit_scaling({{1, 1}, {2, 2}}));
    CHECK_THROWS(fit_scaling({{1, 1}, {2, 2}, {-3, 3}}));
    CHECK_THROWS(fit_scaling({{1, 1}, {2, 0}, {3, 3}}));
  }
}

TEST_CASE("seeded instances and the algorithm dispatcher") {
  RandomSpec spec;
  spec.n = 20;
  spec.m = 2;
  Instance a = random_instance(spec, 9);
  Instance b = random_instance(spec, 9);
  REQUIRE(a.n() == 20);
  CHECK(a.machines == 2);
  for (int i = 0; i < a.n(); ++i) {
    CHECK(a.jobs[i].release == b.jobs[i].release);
    CHECK(a.jobs[i].size == b.jobs[i].size);
    CHECK(a.jobs[i].release >= TimeQ(0));
    CHECK(a.jobs[i].release <= TimeQ(10));
    CHECK(a.jobs[i].size > TimeQ(0));
    CHECK(a.jobs[i].size <= TimeQ(10));
  }

  for (const char* alg : {"greedy", "det-np", "kill-restart",
                          "kill-restart-unknown-n", "rand-single", "rand-multi",
                          "srpt"}) {
    CAPTURE(std::string(alg));
    Instance inst = a;
    if (std::string(alg) == "rand-single") inst.machines = 1;
    Schedule s = run_algorithm(alg, inst, 3);
    ValidationReport vr = validate_schedule(inst, s);
    std::string msg = std::string(alg) + ": " + vr.summary();
    CHECK_MESSAGE(vr.ok, msg);
  }
  CHECK_THROWS(run_algorithm("no-such-alg", a, 0));
  CHECK_THROWS(make_family_instance("no-such-family", 20, 1, 0));
}

TEST_CASE("bench runs are deterministic and the CSV is stable") {
  std::vector<int> ns{20, 40};
  std::vector<BenchRow> rows = run_bench("greedy", "random", ns, 1, 3, 123);
  REQUIRE(rows.size() == 6);
  for (size_t i = 1; i < rows.size(); ++i) {
    bool sorted = rows[i - 1].n < rows[i].n ||
                  (rows[i - 1].n == rows[i].n && rows[i - 1].rep < rows[i].rep);
    CHECK(sorted);
  }
  for (const BenchRow& r : rows) {
    CHECK(r.alg == "greedy");
    CHECK(r.family == "random");
    CHECK(r.ratio == r.alg_flow / r.baseline_flow);
    CHECK(r.exact);  // m = 1: SRPT is the exact preemptive optimum
    CHECK(r.baseline == BaselineKind::Srpt);
  }

  std::string csv1 = bench_csv(rows, false);
  std::string csv2 = bench_csv(run_bench("greedy", "random", ns, 1, 3, 123), false);
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("family,alg,n,m,seed,alg_flow,baseline,baseline_flow,ratio,kind\n",
                   0) == 0);
  CHECK(csv1.find(",exact\n") != std::string::npos);

  std::string exact_csv = bench_csv(rows, true);
  CHECK(exact_csv != csv1);  // exact rationals instead of 20-digit decimals

  SUBCASE("thread count does not change the result") {
    setenv("FLOWLAB_THREADS", "1", 1);
    std::string serial = bench_csv(run_bench("greedy", "random", ns, 1, 3, 123), false);
    unsetenv("FLOWLAB_THREADS");
    CHECK(serial == csv1);
  }
  SUBCASE("witness families report bound rows") {
    // m = 2 so neither brute force nor SRPT applies and Auto uses the witness
    std::vector<BenchRow> wrows =
        run_bench("greedy", "multi-lb", {230}, 2, 2, 123);
    REQUIRE(wrows.size() == 2);
    for (const BenchRow& r : wrows) {
      CHECK(r.baseline == BaselineKind::Witness);
      CHECK_FALSE(r.exact);
      CHECK(r.ratio >= TimeQ(1));  // the witness bounds OPT from above
    }
  }
}
