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

#include <cstdint>
#include <map>
#include <string>

#include "flynn/scheduler.hpp"

namespace flynn {

/// Performance figures for one completed run, all in simulated ticks.
/// On the single simulated processor, idle_ticks is always
/// makespan - compute_ticks; context switches themselves cost nothing.
struct RunMetrics {
  tick_t makespan = 0;
  tick_t compute_ticks = 0;
  tick_t idle_ticks = 0;
  std::size_t context_switches = 0;
  std::map<std::string, tick_t> per_task_turnaround;
  double utilization = 1.0;  // compute_ticks / makespan, 1.0 for an empty span

  bool operator==(const RunMetrics&) const = default;
};

/// Derives metrics purely from the trace events. The trace must be
/// complete (exactly one terminal event per task); otherwise throws
/// std::invalid_argument.
RunMetrics compute_metrics(const Trace& t);

/// An exact makespan ratio, reduced; rendered to two decimals.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Ratio of(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  bool operator==(const Ratio&) const = default;
};

/// Sequential-over-concurrent makespan ratio for the same workload.
/// Throws std::invalid_argument when the concurrent makespan is zero.
Ratio speedup(const RunMetrics& seq, const RunMetrics& conc);

}  // namespace flynn
