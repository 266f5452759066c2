#pragma once

#include <optional>
#include <vector>

#include "flowlab/types.hpp"

namespace flowlab {

/// Per-machine initial unavailability: machine i is blocked during [0, b_i).
using BlockingVector = std::vector<TimeQ>;

/// Non-Preemptive Shortest Job First on m machines. Whenever a machine is
/// free (and past its blocking interval) and jobs are waiting, it starts the
/// smallest waiting job (ties by id). Deterministic.
Schedule run_nsjf(const std::vector<Job>& jobs, int machines,
                  const BlockingVector& blocking = {});

/// Total size of jobs with size <= p, released by t, started by t.
/// Threshold nullopt means "no size bound".
TimeQ progress_volume_started(const Schedule& schedule, const std::vector<Job>& jobs,
                              const std::optional<TimeQ>& p, const TimeQ& t);

/// Work executed by time t on jobs with size <= p released by t.
TimeQ progress_volume_processed(const Schedule& schedule, const std::vector<Job>& jobs,
                                const std::optional<TimeQ>& p, const TimeQ& t);

/// Number of jobs with size <= p, released by t, fully completed by t.
int progress_count_completed(const Schedule& schedule, const std::vector<Job>& jobs,
                             const std::optional<TimeQ>& p, const TimeQ& t);

/// A(t) = integral of the number of unblocked machines over [0, t].
TimeQ active_power(const BlockingVector& blocking, const TimeQ& t);

/// Least t with A(t) >= w.
TimeQ active_power_inverse(const BlockingVector& blocking, const TimeQ& w);

}  // namespace flowlab
