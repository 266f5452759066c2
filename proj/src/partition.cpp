#include "flowlab/partition.hpp"

#include <stdexcept>

namespace flowlab {

std::optional<JobClass> PartitionState::state_of(JobId id) const {
  auto it = job_state_.find(id);
  if (it == job_state_.end()) return std::nullopt;
  return it->second;
}

bool PartitionState::in_active_set(JobId id) const {
  auto it = job_state_.find(id);
  return it != job_state_.end() && it->second == JobClass::ActiveLarge;
}

void PartitionState::note_arrival(const Job& job) {
  if (job.is_proxy())
    throw std::logic_error("partition: proxies are never classified");
  if (job_state_.count(job.id))
    throw std::logic_error("partition: job already classified");
  released_work_ += job.size;
  jobs_[job.id] = job;
}

ClassifyOutcome PartitionState::rank_rule(
    const Job& job, const std::function<bool(JobId)>& is_waiting) {
  ClassifyOutcome out;
  RankKey key{job.size, job.id};
  if (static_cast<int>(active_.size()) < capacity_) {
    active_.insert(key);
    job_state_[job.id] = JobClass::ActiveLarge;
    out.large = true;
    return out;
  }
  auto min_it = active_.begin();
  if (min_it->operator<(key)) {  // strictly outranks the minimum of A
    JobId evicted = min_it->id;
    active_.erase(min_it);
    active_.insert(key);
    job_state_[job.id] = JobClass::ActiveLarge;
    out.large = true;
    Displaced d;
    d.job = evicted;
    if (is_waiting(evicted)) {
      d.proxied = true;
      Job proxy;
      proxy.id = next_proxy_id_++;
      proxy.release = job.release;
      proxy.size = jobs_.at(evicted).size;
      proxy.proxy_of = evicted;
      d.proxy = proxy;
      job_state_[evicted] = JobClass::Proxied;
    } else {
      job_state_[evicted] = JobClass::Committed;
    }
    out.displaced = d;
    return out;
  }
  job_state_[job.id] = JobClass::Small;
  return out;
}

ClassifyOutcome PartitionState::classify(
    const Job& job, const std::function<bool(JobId)>& is_waiting) {
  note_arrival(job);
  return rank_rule(job, is_waiting);
}

ClassifyOutcome PartitionState::classify_refined(
    const Job& job, const std::function<bool(JobId)>& is_waiting) {
  note_arrival(job);
  // p <= 4P/l, with P already including this arrival.
  if (job.size * TimeQ(capacity_) <= TimeQ(4) * released_work_) {
    job_state_[job.id] = JobClass::Small;
    return {};
  }
  return rank_rule(job, is_waiting);
}

}  // namespace flowlab
