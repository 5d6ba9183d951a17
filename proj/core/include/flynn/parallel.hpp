/* Copyright 2026 the flynnsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <chrono>
#include <string>
#include <tuple>
#include <vector>

#include "flynn/scheduler.hpp"

namespace flynn {

/// How two runs of the same workload differ, ignoring ordering and
/// simulated time. `equal` holds iff both difference multisets are empty
/// and every task reached the same terminal status.
struct EquivalenceReport {
  using EmitTriple = std::tuple<std::string, std::string, std::int64_t>;  // task, var, value

  struct StatusMismatch {
    std::string task;
    std::string left;
    std::string right;

    bool operator==(const StatusMismatch&) const = default;
  };

  bool equal = false;
  std::vector<EmitTriple> missing;  // in `a` but not `b`
  std::vector<EmitTriple> extra;    // in `b` but not `a`
  std::vector<StatusMismatch> status_mismatches;
};

/// Runs every task on its own OS thread, with sleeps realized as real
/// pauses of `ticks * tick_duration`. Tasks share nothing but the emit
/// collection point, so values can never differ from the simulated
/// runs; only arrival order is nondeterministic. The result carries no
/// simulated time (emit ticks are zeroed, the trace has no events) and
/// wall_ms as informational metadata.
RunResult run_parallel(const Workload& w,
                       std::chrono::microseconds tick_duration = std::chrono::milliseconds(1));

/// Compares emit multisets and terminal statuses of two runs of the same
/// workload. Order and tick stamps are ignored by construction.
EquivalenceReport reconcile(const RunResult& a, const RunResult& b);

}  // namespace flynn
