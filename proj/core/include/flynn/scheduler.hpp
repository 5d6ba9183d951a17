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
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flynn/interpreter.hpp"
#include "flynn/workload.hpp"

namespace flynn {

/// Round-robin is the only policy: it is the one that reproduces the
/// deterministic task1..taskN output ordering for identical straight-line
/// programs. `quantum` is the maximum number of compute ticks one
/// dispatch may use before the task rotates to the back of the queue.
struct SchedulerConfig {
  std::uint64_t quantum = 1;

  bool operator==(const SchedulerConfig&) const = default;
};

/// Quantum large enough that every dispatch runs until the task sleeps,
/// finishes, or fails.
inline constexpr std::uint64_t kRunToSleep = UINT64_MAX;

enum class Action { Dispatch, Compute, Emit, Sleep, Wake, Finish, Fail, Idle };

std::string_view to_string(Action a);

/// One tick-stamped thing that happened. Ticks are non-decreasing over a
/// trace. Idle events carry no task.
struct ScheduleEvent {
  tick_t tick = 0;
  Action action = Action::Idle;
  std::string task;                   // empty for idle
  std::optional<EmitRecord> emit;     // Action::Emit
  std::optional<tick_t> until;        // Action::Sleep / Action::Idle
  std::optional<std::string> reason;  // Action::Fail

  bool operator==(const ScheduleEvent&) const = default;
};

/// The replayable record of a run: every metric is derivable from the
/// events alone. Dispatch decisions are not recorded as events; they are
/// implied by the task changes in the execution events (compute, emit,
/// sleep, fail).
struct Trace {
  std::vector<ScheduleEvent> events;
  SchedulerConfig config;
  std::uint64_t workload_digest = 0;
  std::vector<std::string> task_names;  // rank order

  bool operator==(const Trace&) const = default;
};

enum class RunMode { Sequential, Concurrent, Parallel };

std::string_view to_string(RunMode m);

struct TerminalStatus {
  enum class Kind { Finished, Failed };

  Kind kind = Kind::Finished;
  tick_t tick = 0;     // zero in parallel mode, which has no simulated time
  std::string reason;  // set when failed

  bool operator==(const TerminalStatus&) const = default;
};

/// Counters maintained while the run happens, independently of the
/// trace. compute_metrics() recomputes the same figures from the events;
/// the two routes must agree.
struct OnlineTally {
  std::size_t dispatches = 0;
  std::size_t context_switches = 0;
  tick_t compute_ticks = 0;

  bool operator==(const OnlineTally&) const = default;
};

struct RunResult {
  std::vector<EmitRecord> emits;  // in result order (trace order when simulated)
  std::map<std::string, TerminalStatus> statuses;
  Trace trace;
  RunMode mode = RunMode::Concurrent;
  OnlineTally tally;
  std::optional<double> wall_ms;  // informational, parallel mode only
};

/// Runtime state of one task under the scheduler.
struct TaskState {
  enum class Status { Ready, Running, Sleeping, Finished, Failed };

  TaskSpec spec;
  Status status = Status::Ready;
  std::size_t pc = 0;
  Env env;
  tick_t wake_tick = 0;      // meaningful while Sleeping
  tick_t terminal_tick = 0;  // meaningful once Finished/Failed
  std::string fail_reason;
};

/// Deterministic single-processor cooperative scheduler.
///
/// All tasks are admitted ready at tick 0 in rank order. Each step
/// dispatches the head of the ready queue for up to `quantum` compute
/// ticks; a sleep instruction immediately blocks the task and ends its
/// turn, and a task whose final instruction is a sleep finishes at its
/// wake tick without being dispatched again. When nothing is ready, the
/// clock jumps to the earliest wake tick, recording an idle event.
///
/// Sleepers are returned to the ready queue at their exact wake tick
/// (ties broken by rank); the running task is never preempted by a wake.
/// A context switch is a pair of adjacent dispatches naming different
/// tasks; idle gaps do not break the pair.
class Scheduler {
 public:
  /// Admits a valid workload (throws std::invalid_argument otherwise,
  /// including for a zero quantum).
  Scheduler(Workload w, SchedulerConfig config);

  /// All tasks reached a terminal state.
  bool done() const { return terminal_count_ == tasks_.size(); }

  /// Makes one scheduling decision: dispatch the head ready task for up
  /// to one quantum, or advance the clock through an idle gap. Returns
  /// the decision event (Action::Dispatch or Action::Idle). Throws
  /// std::logic_error when called on a completed schedule.
  ScheduleEvent step();

  tick_t now() const { return clock_; }
  const Trace& trace() const { return trace_; }
  const std::vector<TaskState>& tasks() const { return tasks_; }
  const std::vector<EmitRecord>& emits() const { return emits_; }
  const OnlineTally& tally() const { return tally_; }

  /// Names of ready tasks in dispatch order.
  std::vector<std::string> ready_names() const;

  /// Terminal status per task; meaningful once done().
  std::map<std::string, TerminalStatus> statuses() const;

 private:
  const ProgramDef& program_of(const TaskState& t) const;
  void record(ScheduleEvent ev);
  void finish_task(std::size_t index);
  void fail_task(std::size_t index, std::string reason);
  // Moves every sleeper whose wake tick has arrived back to the ready
  // queue (or finishes it, when its body is exhausted), in rank order.
  void process_due();

  Workload workload_;
  SchedulerConfig config_;
  std::vector<TaskState> tasks_;  // sorted by rank
  std::vector<std::size_t> program_index_;
  std::deque<std::size_t> ready_;
  tick_t clock_ = 0;
  std::size_t terminal_count_ = 0;
  std::optional<std::size_t> last_dispatched_;
  Trace trace_;
  std::vector<EmitRecord> emits_;
  OnlineTally tally_;
};

/// Drives a Scheduler until every task is terminal. Deterministic: equal
/// (workload, config) pairs produce byte-identical traces.
RunResult run_concurrent(const Workload& w, SchedulerConfig config);

/// The baseline the simulator is measured against: tasks run to
/// completion one after another in rank order, and sleeps block the only
/// processor for their full duration.
RunResult run_sequential(const Workload& w);

}  // namespace flynn
