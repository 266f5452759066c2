#pragma once

#include <utility>

#include "flowlab/types.hpp"

namespace flowlab {

/// Shortest Remaining Processing Time. At every event the m alive jobs with
/// the smallest remaining work run (ties by id). Exact preemptive optimum on
/// one machine; a feasible upper bound for m >= 2. migratory=false pins each
/// job to the machine where it first ran.
Schedule run_srpt(const Instance& instance, bool migratory);

/// Exact non-preemptive optimum by exhaustive search. Hard guards: n <= 9,
/// m <= 3. Returns the witness schedule and its total flow.
std::pair<Schedule, TimeQ> brute_force_opt_np(const Instance& instance);

/// Moves every job of the k least-loaded machines onto the surviving m-k
/// machines: each moved job is re-inserted as one contiguous block at its
/// original start time on the surviving machine with the fewest jobs,
/// pushing later resident segments back. Requires every job of the input
/// schedule to live on a single machine.
Schedule reassign_to_fewer_machines(const Schedule& schedule,
                                    const Instance& instance, int k);

}  // namespace flowlab
