#include "flowlab/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowlab {

namespace {

int sqrt_capacity(long long n, long long m) {
  BigInt l = isqrt(BigInt(n) * BigInt(m));
  return l.convert_to<int>();
}

template <typename Policy>
RunResult run_instance(const Instance& instance, ScheduleModel model, Policy& policy) {
  instance.check();
  SimEngine sim(instance.machines, model);
  for (const auto& j : instance.jobs) sim.add_job(j);
  sim.run(policy);
  RunResult r;
  r.schedule = sim.take_schedule();
  r.transcript = sim.transcript();
  return r;
}

}  // namespace

long long det_np_gamma(long long k, long long n, long long m) {
  if (k <= 0) return 0;
  // largest g with g^2 * n <= k^2 * m
  BigInt q = (BigInt(k) * k * m) / n;
  return isqrt(q).convert_to<long long>();
}

int unknown_n_capacity(long long N, int m) {
  static const double kAlpha = (std::sqrt(5.0) - 1.0) / 2.0;
  double v = std::pow(static_cast<double>(N), kAlpha) * std::sqrt(static_cast<double>(m));
  return static_cast<int>(std::floor(v));
}

// ---------------------------------------------------------------- greedy

void GreedyPolicy::on_release(SimEngine&, const Job& job) {
  queue_.insert({job.release, job.id});
}

void GreedyPolicy::dispatch(SimEngine& sim) {
  for (int i = 0; i < sim.machines(); ++i) {
    while (sim.is_idle(i) && !queue_.empty()) {
      JobId j = queue_.begin()->second;
      queue_.erase(queue_.begin());
      sim.start(j, i);
    }
  }
}

RunResult run_greedy(const Instance& instance) {
  GreedyPolicy policy;
  return run_instance(instance, ScheduleModel::NonPreemptive, policy);
}

// ---------------------------------------------------- deterministic multi

DetNpPolicy::DetNpPolicy(int n, int m)
    : n_(n),
      m_(m),
      capacity_(sqrt_capacity(n, m)),
      partition_(sqrt_capacity(n, m), n),
      running_large_(m, false) {}

DetNpPolicy::Role DetNpPolicy::role(int machine) const {
  if (m_ == 1) return Role::Mixed;  // degenerate: single machine serves both
  if (machine == 0) return Role::LargeOnly;
  if (machine <= (m_ + 1) / 2) return Role::Mixed;
  return Role::SmallOnly;
}

void DetNpPolicy::on_release(SimEngine& sim, const Job& job) {
  auto waiting = [&sim](JobId j) { return sim.is_waiting(j); };
  ClassifyOutcome out = partition_.classify(job, waiting);
  sim.log("classify", job.id, -1, out.large ? "large" : "small");
  if (!out.large) {
    waiting_small_.insert({job.size, job.id, job.id});
    return;
  }
  waiting_large_.insert({job.size, job.id, job.id});
  if (out.displaced && out.displaced->proxied) {
    const Job& proxy = *out.displaced->proxy;
    waiting_large_.erase({proxy.size, out.displaced->job, out.displaced->job});
    waiting_small_.insert({proxy.size, proxy.id, out.displaced->job});
    sim.log("proxy", out.displaced->job, -1, "proxy id " + std::to_string(proxy.id));
  } else if (out.displaced) {
    sim.log("commit", out.displaced->job);
  }
}

void DetNpPolicy::dispatch(SimEngine& sim) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i = 0; i < m_; ++i) {
      if (!sim.is_idle(i)) continue;
      switch (role(i)) {
        case Role::LargeOnly: {
          if (waiting_large_.empty()) break;
          Unit u = *waiting_large_.begin();
          waiting_large_.erase(waiting_large_.begin());
          running_large_[i] = true;
          sim.start(u.actual, i);
          progress = true;
          break;
        }
        case Role::SmallOnly: {
          if (waiting_small_.empty()) break;
          Unit u = *waiting_small_.begin();
          waiting_small_.erase(waiting_small_.begin());
          running_large_[i] = false;
          sim.start(u.actual, i);
          progress = true;
          break;
        }
        case Role::Mixed: {
          if (!waiting_small_.empty()) {
            Unit u = *waiting_small_.begin();
            waiting_small_.erase(waiting_small_.begin());
            running_large_[i] = false;
            sim.start(u.actual, i);
            progress = true;
            break;
          }
          if (waiting_large_.empty()) break;
          long long theta = 0;
          for (int q = 0; q < m_; ++q) {
            if (role(q) == Role::Mixed && !sim.is_idle(q) && running_large_[q]) ++theta;
          }
          long long k = static_cast<long long>(waiting_large_.size());
          // m = 1 has no large-only machine; the gamma gate would starve
          // large jobs forever, so the single machine ignores it.
          if (m_ == 1 || theta < det_np_gamma(k, n_, m_)) {
            Unit u = *waiting_large_.begin();
            waiting_large_.erase(waiting_large_.begin());
            running_large_[i] = true;
            sim.start(u.actual, i);
            progress = true;
          }
          break;
        }
      }
    }
  }
}

RunResult run_det_nonpreemptive(const Instance& instance) {
  DetNpPolicy policy(instance.n(), instance.machines);
  return run_instance(instance, ScheduleModel::NonPreemptive, policy);
}

// --------------------------------------------------------- kill-restart

KillRestartPolicy::KillRestartPolicy(int n, int m)
    : m_(m),
      capacity_(sqrt_capacity(n, m)),
      partition_(sqrt_capacity(n, m), n) {}

bool KillRestartPolicy::active_large_processing(const SimEngine& sim) const {
  for (int i = 0; i < m_; ++i) {
    JobId a = sim.running_on(i);
    if (a >= 0 && partition_.in_active_set(a)) return true;
  }
  return false;
}

void KillRestartPolicy::kill_processing_active_large(SimEngine& sim) {
  for (int i = 0; i < m_; ++i) {
    JobId a = sim.running_on(i);
    if (a >= 0 && partition_.in_active_set(a)) {
      sim.kill(a);
      waiting_large_.insert({sim.job(a).size, a, a});
    }
  }
}

void KillRestartPolicy::on_release(SimEngine& sim, const Job& job) {
  auto waiting = [&sim](JobId j) { return sim.is_waiting(j); };
  ClassifyOutcome out = partition_.classify_refined(job, waiting);
  sim.log("classify", job.id, -1, out.large ? "large" : "small");
  if (!out.large) {
    waiting_small_.insert({job.size, job.id, job.id});
    if (active_large_processing(sim)) {
      ++phi_;
      if (phi_ >= capacity_) {
        sim.log("phi-kill", -1, -1, "phi reached " + std::to_string(phi_));
        kill_processing_active_large(sim);
        phi_ = 0;
      }
    }
    return;
  }
  waiting_large_.insert({job.size, job.id, job.id});
  if (out.displaced && out.displaced->proxied) {
    const Job& proxy = *out.displaced->proxy;
    waiting_large_.erase({proxy.size, out.displaced->job, out.displaced->job});
    waiting_small_.insert({proxy.size, proxy.id, out.displaced->job});
    sim.log("proxy", out.displaced->job, -1, "proxy id " + std::to_string(proxy.id));
  } else if (out.displaced) {
    sim.log("commit", out.displaced->job);
  }
}

void KillRestartPolicy::dispatch(SimEngine& sim) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i = 0; i < m_; ++i) {  // small-only machines come first by index
      if (!sim.is_idle(i)) continue;
      if (small_only(i)) {
        if (waiting_small_.empty()) continue;
        Unit u = *waiting_small_.begin();
        waiting_small_.erase(waiting_small_.begin());
        sim.start(u.actual, i);
        progress = true;
      } else {
        // Mixed: smallest waiting unproxied job (original smalls, proxies,
        // or waiting large jobs).
        const Unit* pick = nullptr;
        if (!waiting_small_.empty()) pick = &*waiting_small_.begin();
        bool from_large = false;
        if (!waiting_large_.empty() &&
            (pick == nullptr || *waiting_large_.begin() < *pick)) {
          pick = &*waiting_large_.begin();
          from_large = true;
        }
        if (pick == nullptr) continue;
        Unit u = *pick;
        if (from_large) {
          waiting_large_.erase(waiting_large_.begin());
          phi_ = 0;  // a large start resets the counter
        } else {
          waiting_small_.erase(waiting_small_.begin());
        }
        sim.start(u.actual, i);
        progress = true;
      }
    }
  }
}

RunResult run_kill_restart(const Instance& instance) {
  KillRestartPolicy policy(instance.n(), instance.machines);
  return run_instance(instance, ScheduleModel::KillRestart, policy);
}

// ---------------------------------------------------------- unknown n

UnknownNPolicy::UnknownNPolicy(int m)
    : m_(m), capacity_(unknown_n_capacity(1, m)) {}

std::set<JobId> UnknownNPolicy::currently_large(const SimEngine& sim) const {
  std::set<JobId> out;
  int rank = 0;
  TimeQ four_p = TimeQ(4) * released_work_;
  for (const auto& key : by_size_) {
    if (rank >= capacity_) break;
    if (key.size * TimeQ(capacity_) >= four_p) out.insert(key.id);
    ++rank;
  }
  (void)sim;
  return out;
}

void UnknownNPolicy::on_release(SimEngine& sim, const Job& job) {
  ++released_;
  bool updated = false;
  if (released_ > estimate_n_) {
    estimate_n_ *= 2;
    capacity_ = unknown_n_capacity(estimate_n_, m_);
    updated = true;
    sim.log("n-update", -1, -1,
            "N=" + std::to_string(estimate_n_) + " l=" + std::to_string(capacity_));
  }
  released_work_ += job.size;
  by_size_.insert({job.size, job.id});
  waiting_.insert({job.size, job.id});

  std::set<JobId> large = currently_large(sim);
  for (JobId j : large) {
    if (!prev_large_.count(j)) sim.log("label-flip", j, -1, "now large");
  }
  for (JobId j : prev_large_) {
    if (!large.count(j)) sim.log("label-flip", j, -1, "now small");
  }
  prev_large_ = large;

  if (updated) {
    // type-A: currently-large jobs must not occupy small-only machines
    for (int i = 0; i < m_; ++i) {
      if (!small_only(i)) continue;
      JobId a = sim.running_on(i);
      if (a >= 0 && large.count(a)) {
        sim.kill(a);
        waiting_.insert({sim.job(a).size, a});
        ++type_a_kills_;
        sim.log("type-a-kill", a, i);
      }
    }
  }

  bool large_processing = false;
  for (int i = 0; i < m_; ++i) {
    JobId a = sim.running_on(i);
    if (a >= 0 && large.count(a)) { large_processing = true; break; }
  }
  if (large_processing) {
    long long phi = static_cast<long long>(waiting_.size());
    for (JobId j : large) {
      if (waiting_.count({sim.job(j).size, j})) --phi;  // waiting currently-small only
    }
    if (phi > capacity_) {
      ++type_b_kills_;
      sim.log("type-b-kill", -1, -1, "phi=" + std::to_string(phi));
      for (int i = 0; i < m_; ++i) {
        JobId a = sim.running_on(i);
        if (a >= 0 && large.count(a)) {
          sim.kill(a);
          waiting_.insert({sim.job(a).size, a});
        }
      }
    }
  }
}

void UnknownNPolicy::dispatch(SimEngine& sim) {
  std::set<JobId> large = currently_large(sim);
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i = 0; i < m_; ++i) {
      if (!sim.is_idle(i)) continue;
      if (small_only(i)) {
        // smallest waiting currently-small job
        for (auto it = waiting_.begin(); it != waiting_.end(); ++it) {
          if (large.count(it->second)) continue;
          JobId j = it->second;
          waiting_.erase(it);
          sim.start(j, i);
          progress = true;
          break;
        }
      } else {
        if (waiting_.empty()) continue;
        JobId j = waiting_.begin()->second;
        waiting_.erase(waiting_.begin());
        sim.start(j, i);
        progress = true;
      }
    }
  }
}

RunResult run_kill_restart_unknown_n(const Instance& instance) {
  UnknownNPolicy policy(instance.machines);
  RunResult r = run_instance(instance, ScheduleModel::KillRestart, policy);
  r.type_a_kills = policy.type_a_kills();
  r.type_b_kills = policy.type_b_kills();
  return r;
}

}  // namespace flowlab
