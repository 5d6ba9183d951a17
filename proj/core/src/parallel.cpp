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

#include "flynn/parallel.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace flynn {

namespace {

std::string describe(const TerminalStatus& s) {
  if (s.kind == TerminalStatus::Kind::Finished) return "finished";
  return "failed(" + s.reason + ")";
}

std::vector<EquivalenceReport::EmitTriple> emit_triples(const RunResult& r) {
  std::vector<EquivalenceReport::EmitTriple> out;
  out.reserve(r.emits.size());
  for (const EmitRecord& e : r.emits) out.emplace_back(e.task, e.var, e.value);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

RunResult run_parallel(const Workload& w, std::chrono::microseconds tick_duration) {
  {
    std::vector<ValidationError> errors = validate_workload(w);
    if (!errors.empty()) {
      throw std::invalid_argument("run_parallel: invalid workload: " + errors.front().message);
    }
  }

  const std::size_t n = w.tasks.size();
  std::vector<TaskRun> runs(n);
  std::mutex emit_mutex;
  std::vector<EmitRecord> collected;

  const auto wall_start = std::chrono::steady_clock::now();
  std::vector<std::thread> workers;
  workers.reserve(n);
  try {
    for (std::size_t i = 0; i < n; ++i) {
      const TaskSpec& spec = w.tasks[i];
      const ProgramDef* program = w.find_program(spec.program);
      Env env = bind_env(spec, w.shared);
      workers.emplace_back([&, i, program, env = std::move(env), &spec = spec] {
        auto pause = [&](tick_t ticks) {
          if (ticks > 0 && tick_duration.count() > 0) {
            std::this_thread::sleep_for(ticks * tick_duration);
          }
        };
        auto observe = [&](const StepOutcome& outcome, tick_t) {
          if (const auto* emitted = std::get_if<Emitted>(&outcome)) {
            EmitRecord record = emitted->record;
            record.tick = 0;  // no simulated time in this mode
            std::lock_guard<std::mutex> lock(emit_mutex);
            collected.push_back(std::move(record));
          }
        };
        runs[i] = run_to_completion(*program, env, spec.name, 0, observe, pause);
      });
    }
  } catch (const std::system_error& e) {
    for (std::thread& worker : workers) worker.join();
    throw std::runtime_error(std::string("run_parallel: worker launch failure: ") + e.what());
  }
  for (std::thread& worker : workers) worker.join();
  const auto wall_end = std::chrono::steady_clock::now();

  RunResult result;
  result.mode = RunMode::Parallel;
  result.emits = std::move(collected);
  result.trace.workload_digest = workload_digest(w);
  for (const TaskSpec& t : w.tasks) result.trace.task_names.push_back(t.name);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& name = w.tasks[i].name;
    if (runs[i].ok()) {
      result.statuses[name] = {TerminalStatus::Kind::Finished, 0, ""};
    } else {
      result.statuses[name] = {TerminalStatus::Kind::Failed, 0, runs[i].failure->reason};
    }
  }
  result.wall_ms =
      std::chrono::duration<double, std::milli>(wall_end - wall_start).count();
  return result;
}

EquivalenceReport reconcile(const RunResult& a, const RunResult& b) {
  EquivalenceReport report;

  std::vector<EquivalenceReport::EmitTriple> left = emit_triples(a);
  std::vector<EquivalenceReport::EmitTriple> right = emit_triples(b);
  std::set_difference(left.begin(), left.end(), right.begin(), right.end(),
                      std::back_inserter(report.missing));
  std::set_difference(right.begin(), right.end(), left.begin(), left.end(),
                      std::back_inserter(report.extra));

  auto ai = a.statuses.begin();
  auto bi = b.statuses.begin();
  while (ai != a.statuses.end() || bi != b.statuses.end()) {
    if (bi == b.statuses.end() || (ai != a.statuses.end() && ai->first < bi->first)) {
      report.status_mismatches.push_back({ai->first, describe(ai->second), "absent"});
      ++ai;
    } else if (ai == a.statuses.end() || bi->first < ai->first) {
      report.status_mismatches.push_back({bi->first, "absent", describe(bi->second)});
      ++bi;
    } else {
      // Same task: compare status kind and failure reason, never ticks.
      if (ai->second.kind != bi->second.kind || ai->second.reason != bi->second.reason) {
        report.status_mismatches.push_back(
            {ai->first, describe(ai->second), describe(bi->second)});
      }
      ++ai;
      ++bi;
    }
  }

  report.equal = report.missing.empty() && report.extra.empty() &&
                 report.status_mismatches.empty();
  return report;
}

}  // namespace flynn
