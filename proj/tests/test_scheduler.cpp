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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "flynn/metrics.hpp"
#include "flynn/parallel.hpp"
#include "flynn/scheduler.hpp"
#include "flynn/textio.hpp"
#include "support/fixtures.hpp"
#include "support/random_workloads.hpp"

using namespace flynn;

namespace {

std::vector<std::int64_t> emit_values(const RunResult& r) {
  std::vector<std::int64_t> out;
  for (const EmitRecord& e : r.emits) out.push_back(e.value);
  return out;
}

std::vector<std::string> emit_tasks(const RunResult& r) {
  std::vector<std::string> out;
  for (const EmitRecord& e : r.emits) out.push_back(e.task);
  return out;
}

tick_t makespan_of(const RunResult& r) {
  tick_t last = 0;
  for (const auto& [task, status] : r.statuses) last = std::max(last, status.tick);
  return last;
}

}  // namespace

TEST_CASE("init: all tasks ready at tick 0 in rank order") {
  Scheduler s(testing::program1(), SchedulerConfig{1});
  CHECK(s.now() == 0);
  CHECK(s.ready_names() == std::vector<std::string>{"task1", "task2", "task3", "task4"});
  for (const TaskState& t : s.tasks()) {
    CHECK(t.status == TaskState::Status::Ready);
    CHECK(t.pc == 0);
    CHECK(t.env == bind_env(t.spec, std::nullopt));
  }
}

TEST_CASE("init: a single task makes a queue of one") {
  Workload w;
  w.programs.push_back({"main", {EmitInstr{"a"}}});
  w.tasks.push_back({"only", 0, "main", DataBinding{{"a", 0}}});
  Scheduler s(w, SchedulerConfig{1});
  CHECK(s.ready_names() == std::vector<std::string>{"only"});
}

TEST_CASE("init: zero tasks refused") {
  Workload w;
  CHECK_THROWS_AS(Scheduler(w, SchedulerConfig{1}), std::invalid_argument);
  CHECK_THROWS_AS(Scheduler(testing::program1(), SchedulerConfig{0}), std::invalid_argument);
}

TEST_CASE("first step dispatches task1 for one compute tick") {
  Scheduler s(testing::program1(), SchedulerConfig{1});
  ScheduleEvent decision = s.step();
  CHECK(decision.action == Action::Dispatch);
  CHECK(decision.task == "task1");
  CHECK(decision.tick == 0);

  REQUIRE(s.trace().events.size() == 1);
  const ScheduleEvent& first = s.trace().events[0];
  CHECK(first.tick == 0);
  CHECK(first.task == "task1");
  CHECK(first.action == Action::Compute);
  CHECK(s.tasks()[0].env.at("sum") == 2);
  CHECK(s.now() == 1);
}

TEST_CASE("idle step jumps the clock to the earliest wake") {
  Scheduler s(testing::program1(), SchedulerConfig{1});
  for (int i = 0; i < 12; ++i) s.step();  // 4 adds, 4 emits, 4 sleeps
  CHECK(s.now() == 8);

  ScheduleEvent decision = s.step();
  CHECK(decision.action == Action::Idle);
  CHECK(decision.tick == 8);
  CHECK(decision.until == 208);
  CHECK(s.now() == 208);
  CHECK(s.done());  // trailing sleeps finish at their wake tick
}

TEST_CASE("step on a completed schedule is a contract violation") {
  Workload w;
  w.programs.push_back({"main", {EmitInstr{"a"}}});
  w.tasks.push_back({"only", 0, "main", DataBinding{{"a", 0}}});
  Scheduler s(w, SchedulerConfig{1});
  s.step();
  REQUIRE(s.done());
  CHECK_THROWS_AS(s.step(), std::logic_error);
}

TEST_CASE("concurrent run of program1, quantum 1: the frozen schedule") {
  RunResult r = run_concurrent(testing::program1(), SchedulerConfig{1});

  CHECK(emit_values(r) == std::vector<std::int64_t>{2, 10, 20, 6});
  CHECK(emit_tasks(r) == std::vector<std::string>{"task1", "task2", "task3", "task4"});
  CHECK(makespan_of(r) == 208);
  CHECK(r.tally.dispatches == 12);
  CHECK(r.tally.context_switches == 11);
  CHECK(r.tally.compute_ticks == 8);

  // Hand-evaluated: adds at ticks 0-3, emits at 4-7, sleeps at 8,
  // one idle gap, all finishes at 208.
  std::vector<tick_t> emit_ticks;
  for (const EmitRecord& e : r.emits) emit_ticks.push_back(e.tick);
  CHECK(emit_ticks == std::vector<tick_t>{4, 5, 6, 7});
  for (const auto& [task, status] : r.statuses) {
    CHECK(status.kind == TerminalStatus::Kind::Finished);
    CHECK(status.tick == 208);
  }
}

TEST_CASE("quantum 10 runs each task to its sleep; same emits, same makespan") {
  RunResult r = run_concurrent(testing::program1(), SchedulerConfig{10});
  CHECK(emit_values(r) == std::vector<std::int64_t>{2, 10, 20, 6});
  CHECK(emit_tasks(r) == std::vector<std::string>{"task1", "task2", "task3", "task4"});
  CHECK(makespan_of(r) == 208);
  CHECK(r.tally.dispatches == 4);
  CHECK(r.tally.context_switches == 3);
}

TEST_CASE("single one-instruction task has makespan 1") {
  Workload w;
  w.programs.push_back({"main", {EmitInstr{"a"}}});
  w.tasks.push_back({"only", 0, "main", DataBinding{{"a", 0}}});
  RunResult r = run_concurrent(w, SchedulerConfig{1});
  CHECK(emit_values(r) == std::vector<std::int64_t>{0});
  CHECK(makespan_of(r) == 1);
}

TEST_CASE("sequential run of program1: one task after another") {
  RunResult r = run_sequential(testing::program1());
  CHECK(emit_values(r) == std::vector<std::int64_t>{2, 10, 20, 6});
  CHECK(makespan_of(r) == 808);  // 4 * (2 compute + 200 sleep)
  CHECK(r.tally.dispatches == 4);
  CHECK(r.tally.context_switches == 3);
  CHECK(r.statuses.at("task1").tick == 202);
  CHECK(r.statuses.at("task4").tick == 808);
}

TEST_CASE("sequential cost model: no sleeps means makespan equals instruction count") {
  Workload w;
  w.programs.push_back({"main", {ComputeInstr{"x", Opcode::Add, Operand::var("a"), Operand::lit(1)},
                                 EmitInstr{"x"}}});
  w.tasks.push_back({"t1", 0, "main", DataBinding{{"a", 1}}});
  RunResult r = run_sequential(w);
  CHECK(makespan_of(r) == 2);
}

TEST_CASE("a failing task never stops the others") {
  ParseResult parsed = parse_workload(
      "program main\n x = div a b\n emit x\nend\n"
      "task ok1 main a=8 b=2\n"
      "task boom main a=1 b=0\n"
      "task ok2 main a=9 b=3\n");
  REQUIRE(parsed.ok());
  const Workload w = *parsed.workload;

  for (RunResult r : {run_sequential(w), run_concurrent(w, SchedulerConfig{1})}) {
    CHECK(r.statuses.at("boom").kind == TerminalStatus::Kind::Failed);
    CHECK(r.statuses.at("boom").reason == "divide by zero");
    CHECK(r.statuses.at("ok1").kind == TerminalStatus::Kind::Finished);
    CHECK(r.statuses.at("ok2").kind == TerminalStatus::Kind::Finished);
    std::multiset<std::int64_t> values(emit_values(r).begin(), emit_values(r).end());
    CHECK(values == std::multiset<std::int64_t>{4, 3});
  }
}

TEST_CASE("mid-program sleeps wake in rank order and re-enter the queue") {
  // Both tasks sleep at tick 2 until tick 7, then emit once more.
  Workload w;
  w.programs.push_back({"main",
                        {ComputeInstr{"x", Opcode::Add, Operand::var("a"), Operand::lit(1)},
                         SleepInstr{5},
                         EmitInstr{"x"}}});
  w.tasks = {{"t1", 0, "main", DataBinding{{"a", 1}}}, {"t2", 1, "main", DataBinding{{"a", 2}}}};
  RunResult r = run_concurrent(w, SchedulerConfig{1});
  // t1 computes at 0, t2 at 1; t1 sleeps 2..7, t2 sleeps 2..7 (both at tick 2);
  // idle to 7; t1 emits at 7, t2 at 8.
  CHECK(emit_tasks(r) == std::vector<std::string>{"t1", "t2"});
  std::vector<tick_t> ticks;
  for (const EmitRecord& e : r.emits) ticks.push_back(e.tick);
  CHECK(ticks == std::vector<tick_t>{7, 8});
  CHECK(makespan_of(r) == 9);
}

TEST_CASE("zero-tick sleep yields without blocking") {
  Workload w;
  w.programs.push_back({"main", {SleepInstr{0}, EmitInstr{"a"}}});
  w.programs.push_back({"other", {EmitInstr{"a"}}});
  w.tasks = {{"t1", 0, "main", DataBinding{{"a", 1}}}, {"t2", 1, "other", DataBinding{{"a", 2}}}};
  RunResult r = run_concurrent(w, SchedulerConfig{5});
  // t1 yields at tick 0; t2 emits at tick 0; t1 emits at tick 1.
  CHECK(emit_tasks(r) == std::vector<std::string>{"t2", "t1"});
  CHECK(makespan_of(r) == 2);
}

TEST_CASE("determinism: same workload and config give byte-identical traces") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 25; ++i) {
    const Workload w = testing::random_workload(rng);
    const RunResult a = run_concurrent(w, SchedulerConfig{2});
    const RunResult b = run_concurrent(w, SchedulerConfig{2});
    CHECK(a.trace == b.trace);
    CHECK(render_trace(a.trace) == render_trace(b.trace));
  }
}

TEST_CASE("conservation: scheduling order never changes emitted values") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 60; ++i) {
    const Workload w = testing::random_workload(rng);
    const RunResult seq = run_sequential(w);
    for (std::uint64_t quantum : {std::uint64_t{1}, std::uint64_t{3}, kRunToSleep}) {
      const RunResult conc = run_concurrent(w, SchedulerConfig{quantum});
      EquivalenceReport report = reconcile(seq, conc);
      CHECK(report.equal);
    }
  }
}

TEST_CASE("emit order is rank order for identical straight-line tasks") {
  // One shared single-emit program, tasks over distinct data.
  for (int i = 0; i < 40; ++i) {
    Workload w;
    w.programs.push_back({"main",
                          {ComputeInstr{"s", Opcode::Add, Operand::var("a"), Operand::var("b")},
                           EmitInstr{"s"},
                           SleepInstr{static_cast<std::int64_t>(i % 7) * 10}}});
    const std::size_t n = 1 + static_cast<std::size_t>(i % 8);
    for (std::size_t k = 0; k < n; ++k) {
      w.tasks.push_back({"t" + std::to_string(k + 1), k, "main",
                         DataBinding{{"a", static_cast<std::int64_t>(k)}, {"b", 1}}});
    }
    for (std::uint64_t quantum : {std::uint64_t{1}, std::uint64_t{2}, kRunToSleep}) {
      const RunResult r = run_concurrent(w, SchedulerConfig{quantum});
      std::vector<std::string> expected;
      for (std::size_t k = 0; k < n; ++k) expected.push_back("t" + std::to_string(k + 1));
      CHECK(emit_tasks(r) == expected);
    }
  }
}

TEST_CASE("makespan dominance: concurrent never loses to sequential") {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 60; ++i) {
    const Workload w = testing::random_workload(rng);
    const tick_t seq = makespan_of(run_sequential(w));
    for (std::uint64_t quantum : {std::uint64_t{1}, std::uint64_t{4}, kRunToSleep}) {
      const tick_t conc = makespan_of(run_concurrent(w, SchedulerConfig{quantum}));
      CHECK(conc <= seq);
    }
  }
}

TEST_CASE("two sleeping tasks make the concurrent run strictly faster") {
  RunResult seq = run_sequential(testing::program1());
  RunResult conc = run_concurrent(testing::program1(), SchedulerConfig{1});
  CHECK(makespan_of(conc) < makespan_of(seq));
}
