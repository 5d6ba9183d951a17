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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace flynn {

/// Binary integer operations. This is the whole arithmetic repertoire;
/// there is no floating point, no control flow and no cross-task state.
enum class Opcode { Add, Sub, Mul, Div };

std::string_view to_string(Opcode op);

/// An instruction operand: either a variable name or a signed 64-bit literal.
struct Operand {
  std::variant<std::string, std::int64_t> value;

  static Operand var(std::string name) { return Operand{std::move(name)}; }
  static Operand lit(std::int64_t v) { return Operand{v}; }

  bool is_var() const { return std::holds_alternative<std::string>(value); }
  const std::string& var_name() const { return std::get<std::string>(value); }
  std::int64_t literal() const { return std::get<std::int64_t>(value); }

  bool operator==(const Operand&) const = default;
};

/// dest = op(lhs, rhs); costs one simulated tick.
struct ComputeInstr {
  std::string dest;
  Opcode op;
  Operand lhs;
  Operand rhs;

  bool operator==(const ComputeInstr&) const = default;
};

/// Publish the current value of a variable; costs one simulated tick.
struct EmitInstr {
  std::string var;

  bool operator==(const EmitInstr&) const = default;
};

/// Block the task for `ticks` simulated ticks. Costs zero compute ticks
/// and ends the task's turn on the processor.
struct SleepInstr {
  std::int64_t ticks = 0;

  bool operator==(const SleepInstr&) const = default;
};

using Instruction = std::variant<ComputeInstr, EmitInstr, SleepInstr>;

/// A straight-line program over named integer variables.
struct ProgramDef {
  std::string name;
  std::vector<Instruction> body;

  bool operator==(const ProgramDef&) const = default;
};

/// Named integer inputs for a task. Two bindings are the same dataset
/// iff their maps are value-equal; identity never matters.
using DataBinding = std::map<std::string, std::int64_t>;

/// A task's variable environment at runtime. Starts as a copy of the
/// task's data binding and grows as compute instructions define vars.
using Env = DataBinding;

/// One named unit of work: a rank, a program to run, and optionally its
/// own data. Tasks without own data read the workload's shared binding.
struct TaskSpec {
  std::string name;
  std::size_t rank = 0;
  std::string program;
  std::optional<DataBinding> own_data;

  bool operator==(const TaskSpec&) const = default;
};

struct Workload {
  std::vector<ProgramDef> programs;
  std::optional<DataBinding> shared;
  std::vector<TaskSpec> tasks;

  const ProgramDef* find_program(std::string_view name) const;

  bool operator==(const Workload&) const = default;
};

/// The four program/data quadrants: single/multiple Program crossed with
/// single/multiple Data.
enum class ExecutionModel { SPSD, MPSD, SPMD, MPMD };

std::string_view to_string(ExecutionModel m);

struct ValidationError {
  enum class Kind {
    NoTasks,
    DuplicateProgram,
    EmptyBody,
    NegativeSleep,
    BadIdentifier,
    DuplicateTask,
    DuplicateRank,
    UnknownProgram,
    MissingData,
    UnboundVariable,
  };

  Kind kind;
  std::string message;

  bool operator==(const ValidationError&) const = default;
};

/// Reports every violation in `w`; an empty result means the workload is
/// runnable. Unbound-variable checks are done per task, against the keys
/// of the binding that task would actually run with.
std::vector<ValidationError> validate_workload(const Workload& w);

/// Places a valid workload on the program/data quadrant. P is the number
/// of distinct program names referenced by tasks; D the number of
/// distinct datasets (value-equal bindings collapse, and the shared
/// binding counts once no matter how many tasks read it).
/// Throws std::invalid_argument if the workload does not validate.
ExecutionModel classify(const Workload& w);

/// Initial environment for a task: its own data if present, else the
/// shared binding. Own data shadows shared entirely; maps are never
/// merged. Throws std::invalid_argument when neither source exists.
Env bind_env(const TaskSpec& t, const std::optional<DataBinding>& shared);

/// Stable 64-bit content hash of a workload, used to stamp traces.
std::uint64_t workload_digest(const Workload& w);

/// True iff `s` matches [A-Za-z][A-Za-z0-9_]*.
bool is_identifier(std::string_view s);

}  // namespace flynn
