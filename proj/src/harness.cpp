#include "flowlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "flowlab/adversaries.hpp"
#include "flowlab/algorithms.hpp"
#include "flowlab/baselines.hpp"
#include "flowlab/rng.hpp"

namespace flowlab {

BaselinePolicy baseline_policy_from_string(const std::string& s) {
  if (s == "auto") return BaselinePolicy::Auto;
  if (s == "srpt") return BaselinePolicy::Srpt;
  if (s == "brute-force") return BaselinePolicy::BruteForce;
  if (s == "witness") return BaselinePolicy::Witness;
  if (s == "sum-p") return BaselinePolicy::SumP;
  throw std::invalid_argument("unknown baseline: " + s);
}

RatioReport compute_ratio(const TimeQ& alg_flow, const Instance& instance,
                          BaselinePolicy policy) {
  bool has_witness = instance.meta.count("witness_flow") > 0;
  if (policy == BaselinePolicy::Auto) {
    if (instance.n() <= 9 && instance.machines <= 3)
      policy = BaselinePolicy::BruteForce;
    else if (instance.machines == 1)
      policy = BaselinePolicy::Srpt;
    else if (has_witness)
      policy = BaselinePolicy::Witness;
    else
      policy = BaselinePolicy::SumP;
  }

  RatioReport rep;
  rep.alg_flow = alg_flow;
  switch (policy) {
    case BaselinePolicy::BruteForce:
      rep.baseline_flow = brute_force_opt_np(instance).second;
      rep.baseline_used = BaselineKind::BruteForce;
      rep.exact = true;  // exact non-preemptive OPT
      break;
    case BaselinePolicy::Srpt:
      rep.baseline_flow = total_flow(instance, run_srpt(instance, true)).total;
      rep.baseline_used = BaselineKind::Srpt;
      rep.exact = (instance.machines == 1);  // exact preemptive OPT on m=1
      break;
    case BaselinePolicy::Witness:
      if (!has_witness)
        throw std::invalid_argument(
            "compute_ratio: witness baseline needs a generated instance");
      rep.baseline_flow = TimeQ::parse(instance.meta.at("witness_flow"));
      rep.baseline_used = BaselineKind::Witness;
      rep.exact = false;  // witness >= OPT: the ratio is a lower bound
      break;
    case BaselinePolicy::SumP:
      rep.baseline_flow = instance.total_size();
      rep.baseline_used = BaselineKind::SumP;
      rep.exact = false;  // sum p <= OPT: the ratio is an upper bound
      break;
    case BaselinePolicy::Auto:
      break;  // unreachable
  }
  if (rep.baseline_flow.is_zero())
    throw std::domain_error("compute_ratio: zero baseline flow");
  rep.ratio = alg_flow / rep.baseline_flow;
  return rep;
}

FitResult fit_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("fit_scaling: need at least 3 points");
  std::vector<double> xs, ys;
  for (const auto& [x, y] : points) {
    if (x <= 0 || y <= 0)
      throw std::invalid_argument("fit_scaling: points must be positive");
    xs.push_back(std::log(x));
    ys.push_back(std::log(y));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0)
    throw std::invalid_argument("fit_scaling: degenerate x variance");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = (syy == 0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

Instance random_instance(const RandomSpec& spec, uint64_t seed) {
  if (spec.n < 0 || spec.m < 1 || spec.denominator < 1 ||
      spec.max_size_num < 1 || spec.max_release_num < 0)
    throw std::invalid_argument("random_instance: bad spec");
  RngPolicy rng{seed};
  Instance inst;
  inst.machines = spec.m;
  for (int i = 0; i < spec.n; ++i) {
    Job j;
    j.release = TimeQ(
        BigInt(rng.draw(i, 10) % static_cast<uint64_t>(spec.max_release_num + 1)),
        BigInt(spec.denominator));
    j.size = TimeQ(
        BigInt(1 + rng.draw(i, 11) % static_cast<uint64_t>(spec.max_size_num)),
        BigInt(spec.denominator));
    inst.jobs.push_back(j);
  }
  std::stable_sort(inst.jobs.begin(), inst.jobs.end(),
                   [](const Job& a, const Job& b) { return a.release < b.release; });
  for (int i = 0; i < spec.n; ++i) inst.jobs[i].id = i;
  inst.meta["family"] = "random";
  inst.meta["seed"] = std::to_string(seed);
  return inst;
}

Schedule run_algorithm(const std::string& alg, const Instance& instance,
                       uint64_t seed) {
  if (alg == "greedy") return run_greedy(instance).schedule;
  if (alg == "det-np") return run_det_nonpreemptive(instance).schedule;
  if (alg == "kill-restart") return run_kill_restart(instance).schedule;
  if (alg == "kill-restart-unknown-n")
    return run_kill_restart_unknown_n(instance).schedule;
  if (alg == "rand-single") return run_rand_single(instance, RngPolicy{seed}).schedule;
  if (alg == "rand-multi") return run_rand_multi(instance, RngPolicy{seed}).schedule;
  if (alg == "srpt") return run_srpt(instance, true);
  throw std::invalid_argument("unknown algorithm: " + alg);
}

Instance make_family_instance(const std::string& family, int n, int m,
                              uint64_t seed) {
  if (family == "single-rand-lb") {
    if (m != 1)
      throw std::invalid_argument("single-rand-lb: needs m = 1");
    return gen_single_rand_lb(n, seed).instance;
  }
  if (family == "multi-lb") return gen_multi_lb(n, m, seed).instance;
  if (family == "multi-restart-lb") return gen_multi_restart_lb(n, m, seed).instance;
  if (family == "random") {
    RandomSpec spec;
    spec.n = n;
    spec.m = m;
    return random_instance(spec, seed);
  }
  throw std::invalid_argument("unknown family: " + family);
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("FLOWLAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::vector<BenchRow> run_bench(const std::string& alg,
                                const std::string& family,
                                const std::vector<int>& ns, int m, int reps,
                                uint64_t seed) {
  struct Task {
    int n;
    int rep;
  };
  std::vector<Task> tasks;
  for (int n : ns)
    for (int r = 0; r < reps; ++r) tasks.push_back({n, r});

  std::vector<BenchRow> rows(tasks.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mu;

  auto work = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size() || failed.load()) return;
      const Task& t = tasks[i];
      try {
        uint64_t rep_seed = hash_combine(seed, static_cast<uint64_t>(t.rep));
        Instance inst = make_family_instance(family, t.n, m, rep_seed);
        Schedule sched = run_algorithm(alg, inst, rep_seed);
        ValidationReport vr = validate_schedule(inst, sched);
        if (!vr.ok) throw std::runtime_error("invalid schedule: " + vr.summary());
        TimeQ flow = total_flow(inst, sched).total;
        RatioReport rr = compute_ratio(flow, inst, BaselinePolicy::Auto);
        BenchRow& row = rows[i];
        row.family = family;
        row.alg = alg;
        row.n = t.n;
        row.m = m;
        row.rep = t.rep;
        row.seed = rep_seed;
        row.alg_flow = flow;
        row.baseline_flow = rr.baseline_flow;
        row.ratio = rr.ratio;
        row.baseline = rr.baseline_used;
        row.exact = rr.exact;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        error = e.what();
        failed.store(true);
        return;
      }
    }
  };

  int threads = std::min<int>(worker_count(), static_cast<int>(tasks.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("bench failed: " + error);

  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.rep < b.rep;
  });
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool exact_values) {
  auto fmt = [&](const TimeQ& q) {
    return exact_values ? q.str() : q.decimal(20);
  };
  std::ostringstream os;
  os << "family,alg,n,m,seed,alg_flow,baseline,baseline_flow,ratio,kind\n";
  for (const auto& r : rows) {
    os << r.family << ',' << r.alg << ',' << r.n << ',' << r.m << ','
       << r.seed << ',' << fmt(r.alg_flow) << ',' << to_string(r.baseline)
       << ',' << fmt(r.baseline_flow) << ',' << fmt(r.ratio) << ','
       << (r.exact ? "exact" : "bound") << '\n';
  }
  return os.str();
}

}  // namespace flowlab
