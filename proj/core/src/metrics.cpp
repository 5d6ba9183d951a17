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

#include "flynn/metrics.hpp"

#include <numeric>
#include <stdexcept>

namespace flynn {

RunMetrics compute_metrics(const Trace& t) {
  RunMetrics m;
  std::map<std::string, std::size_t> terminal_seen;
  const std::string* last_executing = nullptr;

  for (const ScheduleEvent& ev : t.events) {
    m.makespan = std::max(m.makespan, ev.tick);

    switch (ev.action) {
      case Action::Compute:
      case Action::Emit:
        ++m.compute_ticks;
        [[fallthrough]];
      case Action::Sleep:
      case Action::Fail:
        // Execution events mark the task holding the processor; a change
        // of task between adjacent ones is a context switch.
        if (last_executing != nullptr && *last_executing != ev.task) ++m.context_switches;
        last_executing = &ev.task;
        break;
      default:
        break;
    }

    if (ev.action == Action::Finish || ev.action == Action::Fail) {
      ++terminal_seen[ev.task];
      m.per_task_turnaround[ev.task] = ev.tick;
    }
  }

  if (terminal_seen.size() != t.task_names.size()) {
    throw std::invalid_argument("compute_metrics: incomplete trace");
  }
  for (const std::string& name : t.task_names) {
    auto it = terminal_seen.find(name);
    if (it == terminal_seen.end() || it->second != 1) {
      throw std::invalid_argument("compute_metrics: incomplete trace");
    }
  }

  m.idle_ticks = m.makespan - m.compute_ticks;
  m.utilization = m.makespan == 0
                      ? 1.0
                      : static_cast<double>(m.compute_ticks) / static_cast<double>(m.makespan);
  return m;
}

Ratio Ratio::of(std::int64_t num, std::int64_t den) {
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) return {num / g, den / g};
  return {num, den};
}

std::string Ratio::to_string() const {
  // Exact two-decimal rendering, rounding halves away from zero.
  const std::int64_t scaled = (200 * num + den) / (2 * den);
  std::string out = std::to_string(scaled / 100);
  const std::int64_t frac = scaled % 100;
  out += '.';
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return out;
}

Ratio speedup(const RunMetrics& seq, const RunMetrics& conc) {
  if (conc.makespan == 0) {
    throw std::invalid_argument("speedup: zero concurrent makespan");
  }
  return Ratio::of(seq.makespan, conc.makespan);
}

}  // namespace flynn
