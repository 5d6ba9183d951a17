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

#include "flynn/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace flynn {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Dispatch: return "dispatch";
    case Action::Compute: return "compute";
    case Action::Emit: return "emit";
    case Action::Sleep: return "sleep";
    case Action::Wake: return "wake";
    case Action::Finish: return "finish";
    case Action::Fail: return "fail";
    case Action::Idle: return "idle";
  }
  return "?";
}

std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::Sequential: return "sequential";
    case RunMode::Concurrent: return "concurrent";
    case RunMode::Parallel: return "parallel";
  }
  return "?";
}

namespace {

void require_valid(const Workload& w) {
  std::vector<ValidationError> errors = validate_workload(w);
  if (errors.empty()) return;
  std::string message = "invalid workload:";
  for (const ValidationError& e : errors) {
    message += ' ';
    message += e.message;
    message += ';';
  }
  throw std::invalid_argument(message);
}

}  // namespace

Scheduler::Scheduler(Workload w, SchedulerConfig config)
    : workload_(std::move(w)), config_(config) {
  if (config_.quantum == 0) throw std::invalid_argument("quantum must be >= 1");
  require_valid(workload_);

  tasks_.reserve(workload_.tasks.size());
  for (const TaskSpec& spec : workload_.tasks) {
    TaskState state;
    state.spec = spec;
    state.env = bind_env(spec, workload_.shared);
    tasks_.push_back(std::move(state));
  }
  std::sort(tasks_.begin(), tasks_.end(),
            [](const TaskState& a, const TaskState& b) { return a.spec.rank < b.spec.rank; });

  program_index_.reserve(tasks_.size());
  for (const TaskState& t : tasks_) {
    const auto it = std::find_if(workload_.programs.begin(), workload_.programs.end(),
                                 [&](const ProgramDef& p) { return p.name == t.spec.program; });
    program_index_.push_back(static_cast<std::size_t>(it - workload_.programs.begin()));
  }

  for (std::size_t i = 0; i < tasks_.size(); ++i) ready_.push_back(i);

  trace_.config = config_;
  trace_.workload_digest = workload_digest(workload_);
  for (const TaskState& t : tasks_) trace_.task_names.push_back(t.spec.name);
}

const ProgramDef& Scheduler::program_of(const TaskState& t) const {
  const std::size_t index = program_index_[static_cast<std::size_t>(&t - tasks_.data())];
  return workload_.programs[index];
}

void Scheduler::record(ScheduleEvent ev) { trace_.events.push_back(std::move(ev)); }

void Scheduler::finish_task(std::size_t index) {
  TaskState& t = tasks_[index];
  t.status = TaskState::Status::Finished;
  t.terminal_tick = clock_;
  ++terminal_count_;
  record({clock_, Action::Finish, t.spec.name, {}, {}, {}});
}

void Scheduler::fail_task(std::size_t index, std::string reason) {
  TaskState& t = tasks_[index];
  t.status = TaskState::Status::Failed;
  t.terminal_tick = clock_;
  t.fail_reason = reason;
  ++terminal_count_;
  record({clock_, Action::Fail, t.spec.name, {}, {}, std::move(reason)});
}

void Scheduler::process_due() {
  // tasks_ is rank-sorted, so simultaneous wakers re-enter in rank order.
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    TaskState& t = tasks_[i];
    if (t.status != TaskState::Status::Sleeping || t.wake_tick > clock_) continue;
    assert(t.wake_tick == clock_);  // the clock never jumps past a wake
    if (t.pc == program_of(t).body.size()) {
      // Trailing sleep: the task is done at its wake tick, no redispatch.
      finish_task(i);
    } else {
      t.status = TaskState::Status::Ready;
      ready_.push_back(i);
      record({clock_, Action::Wake, t.spec.name, {}, {}, {}});
    }
  }
}

ScheduleEvent Scheduler::step() {
  if (done()) throw std::logic_error("step: all tasks are terminal");

  if (ready_.empty()) {
    tick_t earliest = std::numeric_limits<tick_t>::max();
    for (const TaskState& t : tasks_) {
      if (t.status == TaskState::Status::Sleeping) earliest = std::min(earliest, t.wake_tick);
    }
    ScheduleEvent idle{clock_, Action::Idle, "", {}, earliest, {}};
    record(idle);
    clock_ = earliest;
    process_due();
    return idle;
  }

  const std::size_t index = ready_.front();
  ready_.pop_front();
  TaskState& task = tasks_[index];
  task.status = TaskState::Status::Running;

  ScheduleEvent dispatched{clock_, Action::Dispatch, task.spec.name, {}, {}, {}};
  ++tally_.dispatches;
  if (last_dispatched_ && *last_dispatched_ != index) ++tally_.context_switches;
  last_dispatched_ = index;

  const ProgramDef& program = program_of(task);
  std::uint64_t used = 0;
  while (used < config_.quantum) {
    StepOutcome outcome = step_task(program, task.pc, task.env,
                                    EvalContext{task.spec.name, clock_});

    if (std::holds_alternative<Advanced>(outcome) || std::holds_alternative<Emitted>(outcome)) {
      if (const auto* emitted = std::get_if<Emitted>(&outcome)) {
        emits_.push_back(emitted->record);
        record({clock_, Action::Emit, task.spec.name, emitted->record, {}, {}});
      } else {
        record({clock_, Action::Compute, task.spec.name, {}, {}, {}});
      }
      ++tally_.compute_ticks;
      ++used;
      ++clock_;
      process_due();
      if (task.pc == program.body.size()) {
        finish_task(index);
        break;
      }
    } else if (const auto* slept = std::get_if<Slept>(&outcome)) {
      const tick_t until = clock_ + slept->ticks;
      record({clock_, Action::Sleep, task.spec.name, {}, until, {}});
      if (slept->ticks == 0) {
        // A zero sleep is a bare yield: the task stays runnable.
        if (task.pc == program.body.size()) {
          finish_task(index);
        } else {
          task.status = TaskState::Status::Ready;
          ready_.push_back(index);
        }
      } else {
        task.status = TaskState::Status::Sleeping;
        task.wake_tick = until;
      }
      break;
    } else if (const auto* failed = std::get_if<Failed>(&outcome)) {
      fail_task(index, failed->reason);
      break;
    } else {
      assert(false && "dispatched a task with an exhausted body");
      finish_task(index);
      break;
    }
  }

  if (task.status == TaskState::Status::Running) {
    // Quantum exhausted mid-program: rotate to the back of the queue.
    task.status = TaskState::Status::Ready;
    ready_.push_back(index);
  }
  return dispatched;
}

std::vector<std::string> Scheduler::ready_names() const {
  std::vector<std::string> names;
  names.reserve(ready_.size());
  for (std::size_t index : ready_) names.push_back(tasks_[index].spec.name);
  return names;
}

std::map<std::string, TerminalStatus> Scheduler::statuses() const {
  std::map<std::string, TerminalStatus> out;
  for (const TaskState& t : tasks_) {
    if (t.status == TaskState::Status::Finished) {
      out[t.spec.name] = {TerminalStatus::Kind::Finished, t.terminal_tick, ""};
    } else if (t.status == TaskState::Status::Failed) {
      out[t.spec.name] = {TerminalStatus::Kind::Failed, t.terminal_tick, t.fail_reason};
    }
  }
  return out;
}

RunResult run_concurrent(const Workload& w, SchedulerConfig config) {
  Scheduler scheduler(w, config);
  while (!scheduler.done()) scheduler.step();

  RunResult result;
  result.emits = scheduler.emits();
  result.statuses = scheduler.statuses();
  result.trace = scheduler.trace();
  result.mode = RunMode::Concurrent;
  result.tally = scheduler.tally();
  return result;
}

RunResult run_sequential(const Workload& w) {
  require_valid(w);

  std::vector<const TaskSpec*> order;
  order.reserve(w.tasks.size());
  for (const TaskSpec& t : w.tasks) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](const TaskSpec* a, const TaskSpec* b) { return a->rank < b->rank; });

  RunResult result;
  result.mode = RunMode::Sequential;
  result.trace.config = SchedulerConfig{1};
  result.trace.workload_digest = workload_digest(w);
  for (const TaskSpec* t : order) result.trace.task_names.push_back(t->name);

  tick_t clock = 0;
  for (const TaskSpec* spec : order) {
    const ProgramDef* program = w.find_program(spec->program);
    ++result.tally.dispatches;
    if (result.tally.dispatches > 1) ++result.tally.context_switches;

    auto observe = [&](const StepOutcome& outcome, tick_t when) {
      if (std::holds_alternative<Advanced>(outcome)) {
        result.trace.events.push_back({when, Action::Compute, spec->name, {}, {}, {}});
      } else if (const auto* emitted = std::get_if<Emitted>(&outcome)) {
        result.emits.push_back(emitted->record);
        result.trace.events.push_back({when, Action::Emit, spec->name, emitted->record, {}, {}});
      } else if (const auto* slept = std::get_if<Slept>(&outcome)) {
        result.trace.events.push_back(
            {when, Action::Sleep, spec->name, {}, when + slept->ticks, {}});
      } else if (std::holds_alternative<Finished>(outcome)) {
        result.statuses[spec->name] = {TerminalStatus::Kind::Finished, when, ""};
        result.trace.events.push_back({when, Action::Finish, spec->name, {}, {}, {}});
      } else if (const auto* failed = std::get_if<Failed>(&outcome)) {
        result.statuses[spec->name] = {TerminalStatus::Kind::Failed, when, failed->reason};
        result.trace.events.push_back({when, Action::Fail, spec->name, {}, {}, failed->reason});
      }
    };

    TaskRun run = run_to_completion(*program, bind_env(*spec, w.shared), spec->name,
                                    clock, observe);
    result.tally.compute_ticks += run.compute_ticks;
    clock += run.compute_ticks + run.sleep_ticks;
  }
  return result;
}

}  // namespace flynn
