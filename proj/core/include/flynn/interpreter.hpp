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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flynn/workload.hpp"

namespace flynn {

/// Simulated time. One compute or emit instruction costs exactly one
/// tick; a sleep costs zero compute ticks and blocks for its operand.
using tick_t = std::int64_t;

/// A published (task, variable, value) triple, stamped with the tick at
/// which the emit instruction executed.
struct EmitRecord {
  std::string task;
  std::string var;
  std::int64_t value = 0;
  tick_t tick = 0;

  bool operator==(const EmitRecord&) const = default;
};

// Exactly one outcome per executed step. Advanced and Emitted cost one
// tick; Slept costs zero and carries the requested block duration.
struct Advanced {
  bool operator==(const Advanced&) const = default;
};
struct Emitted {
  EmitRecord record;
  bool operator==(const Emitted&) const = default;
};
struct Slept {
  tick_t ticks = 0;
  bool operator==(const Slept&) const = default;
};
struct Finished {
  bool operator==(const Finished&) const = default;
};
struct Failed {
  std::string reason;
  bool operator==(const Failed&) const = default;
};

using StepOutcome = std::variant<Advanced, Emitted, Slept, Finished, Failed>;

/// Who is executing and when; used to stamp emit records and errors.
struct EvalContext {
  std::string_view task;
  tick_t tick = 0;
};

/// Executes a single instruction against `env`, updating it in place on
/// success. Arithmetic is checked: divide by zero and signed 64-bit
/// overflow fail the step (and with it the task, never the process).
/// Division truncates toward zero.
StepOutcome exec_instruction(const Instruction& instr, Env& env, const EvalContext& ctx);

/// Executes the instruction at `pc`, advancing `pc` past it on success.
/// Returns Finished once `pc` is past the end of the body; on Failed the
/// pc stays at the faulting instruction.
StepOutcome step_task(const ProgramDef& p, std::size_t& pc, Env& env, const EvalContext& ctx);

struct TaskFailure {
  std::size_t pc = 0;
  std::string reason;

  bool operator==(const TaskFailure&) const = default;
};

/// Aggregate result of running one task start to finish.
struct TaskRun {
  std::vector<EmitRecord> emits;
  tick_t compute_ticks = 0;
  tick_t sleep_ticks = 0;
  std::optional<TaskFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Observes every step at the simulated time it happened (start_tick
/// offset included). The Finished/Failed outcome is observed last.
using StepObserver = std::function<void(const StepOutcome& outcome, tick_t when)>;

/// Optionally realizes a sleep as a real pause; used by the threaded
/// executor. The simulated runners leave it unset.
using SleepFn = std::function<void(tick_t ticks)>;

/// Runs the whole body with no interleaving. compute_ticks counts the
/// compute and emit instructions executed; sleep_ticks sums the sleep
/// operands. A failure stops this task at its pc and is reported in the
/// result rather than thrown.
TaskRun run_to_completion(const ProgramDef& p, Env env, std::string_view task,
                          tick_t start_tick = 0, const StepObserver& observe = {},
                          const SleepFn& pause = {});

}  // namespace flynn
