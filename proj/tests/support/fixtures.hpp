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

#include <string>

#include "flynn/workload.hpp"

namespace flynn::testing {

// The four-task add-emit-sleep workload: one program, four data pairs.
inline Workload program1() {
  Workload w;
  w.programs.push_back({"main",
                        {
                            ComputeInstr{"sum", Opcode::Add, Operand::var("a"), Operand::var("b")},
                            EmitInstr{"sum"},
                            SleepInstr{200},
                        }});
  auto task = [](std::string name, std::size_t rank, std::int64_t a, std::int64_t b) {
    return TaskSpec{std::move(name), rank, "main", DataBinding{{"a", a}, {"b", b}}};
  };
  w.tasks = {task("task1", 0, 1, 1), task("task2", 1, 5, 5), task("task3", 2, 10, 10),
             task("task4", 3, 1, 5)};
  return w;
}

}  // namespace flynn::testing
