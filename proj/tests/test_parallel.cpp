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

#include <chrono>
#include <random>
#include <set>

#include "flynn/parallel.hpp"
#include "flynn/scheduler.hpp"
#include "support/fixtures.hpp"
#include "support/random_workloads.hpp"

using namespace flynn;
using namespace std::chrono_literals;

namespace {

std::multiset<EquivalenceReport::EmitTriple> triples(const RunResult& r) {
  std::multiset<EquivalenceReport::EmitTriple> out;
  for (const EmitRecord& e : r.emits) out.insert({e.task, e.var, e.value});
  return out;
}

}  // namespace

TEST_CASE("parallel run produces the program1 emit multiset") {
  RunResult r = run_parallel(testing::program1(), 100us);
  CHECK(triples(r) == std::multiset<EquivalenceReport::EmitTriple>{
                          {"task1", "sum", 2},
                          {"task2", "sum", 10},
                          {"task3", "sum", 20},
                          {"task4", "sum", 6},
                      });
  CHECK(r.mode == RunMode::Parallel);
  CHECK(r.trace.events.empty());
  CHECK(r.wall_ms.has_value());
  for (const auto& [task, status] : r.statuses) {
    CHECK(status.kind == TerminalStatus::Kind::Finished);
  }
}

TEST_CASE("a single task matches the sequential output exactly") {
  Workload w;
  w.programs.push_back({"main", {ComputeInstr{"s", Opcode::Add, Operand::var("a"), Operand::var("b")},
                                 EmitInstr{"s"}}});
  w.tasks.push_back({"solo", 0, "main", DataBinding{{"a", 3}, {"b", 4}}});
  RunResult par = run_parallel(w, 0us);
  RunResult seq = run_sequential(w);
  CHECK(reconcile(par, seq).equal);
  REQUIRE(par.emits.size() == 1);
  CHECK(par.emits[0].task == "solo");
  CHECK(par.emits[0].value == 7);
}

TEST_CASE("one task dividing by zero leaves the others untouched") {
  Workload w;
  w.programs.push_back({"main", {ComputeInstr{"x", Opcode::Div, Operand::var("a"), Operand::var("b")},
                                 EmitInstr{"x"}}});
  w.tasks = {{"ok1", 0, "main", DataBinding{{"a", 8}, {"b", 2}}},
             {"boom", 1, "main", DataBinding{{"a", 1}, {"b", 0}}},
             {"ok2", 2, "main", DataBinding{{"a", 9}, {"b", 3}}}};
  RunResult r = run_parallel(w, 0us);
  CHECK(r.statuses.at("boom").kind == TerminalStatus::Kind::Failed);
  CHECK(r.statuses.at("boom").reason == "divide by zero");
  CHECK(triples(r) == std::multiset<EquivalenceReport::EmitTriple>{
                          {"ok1", "x", 4}, {"ok2", "x", 3}});
}

TEST_CASE("reconcile is reflexive") {
  RunResult r = run_concurrent(testing::program1(), SchedulerConfig{1});
  EquivalenceReport report = reconcile(r, r);
  CHECK(report.equal);
  CHECK(report.missing.empty());
  CHECK(report.extra.empty());
  CHECK(report.status_mismatches.empty());
}

TEST_CASE("reconcile reports differences across distinct workloads") {
  Workload other;
  other.programs.push_back({"main", {EmitInstr{"a"}}});
  other.tasks.push_back({"stranger", 0, "main", DataBinding{{"a", 77}}});

  RunResult a = run_concurrent(testing::program1(), SchedulerConfig{1});
  RunResult b = run_concurrent(other, SchedulerConfig{1});
  EquivalenceReport report = reconcile(a, b);
  CHECK(!report.equal);
  CHECK(report.missing.size() == 4);
  CHECK(report.extra.size() == 1);
  CHECK(report.extra[0] == EquivalenceReport::EmitTriple{"stranger", "a", 77});
  CHECK(!report.status_mismatches.empty());
}

TEST_CASE("reconcile ignores order and ticks but not values") {
  RunResult a = run_concurrent(testing::program1(), SchedulerConfig{1});
  RunResult b = run_sequential(testing::program1());
  CHECK(reconcile(a, b).equal);

  b.emits[0].value += 1;
  EquivalenceReport report = reconcile(a, b);
  CHECK(!report.equal);
  CHECK(report.missing.size() == 1);
  CHECK(report.extra.size() == 1);
}

TEST_CASE("status mismatches name the differing task") {
  RunResult a = run_concurrent(testing::program1(), SchedulerConfig{1});
  RunResult b = a;
  b.statuses["task2"] = {TerminalStatus::Kind::Failed, 0, "overflow"};
  EquivalenceReport report = reconcile(a, b);
  CHECK(!report.equal);
  REQUIRE(report.status_mismatches.size() == 1);
  CHECK(report.status_mismatches[0].task == "task2");
  CHECK(report.status_mismatches[0].left == "finished");
  CHECK(report.status_mismatches[0].right == "failed(overflow)");
}

TEST_CASE("parallel emits match both simulated modes on random workloads") {
  std::mt19937_64 rng(161803);
  for (int i = 0; i < 25; ++i) {
    const Workload w = testing::random_workload(rng);
    RunResult par = run_parallel(w, 20us);
    CHECK(reconcile(run_sequential(w), par).equal);
    CHECK(reconcile(run_concurrent(w, SchedulerConfig{3}), par).equal);
  }
}
