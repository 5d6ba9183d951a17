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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flynn/metrics.hpp"
#include "flynn/scheduler.hpp"
#include "flynn/workload.hpp"

namespace flynn {

// Workload file grammar (line oriented, UTF-8, '#' starts a comment):
//
//   program <name>
//     <var> = <op> <arg> <arg>      op: add | sub | mul | div
//     emit <var>                    arg: identifier | signed integer
//     sleep <n>                     n >= 0
//   end
//   shared <key>=<int> ...          at most once
//   task <name> <program> [<key>=<int> ...]
//
// Identifiers match [A-Za-z][A-Za-z0-9_]*. Task ranks are assigned in
// file order starting at 0.

/// A parse diagnostic; `line` is 1-based, 0 for whole-file problems.
struct ParseError {
  std::size_t line = 0;
  std::string message;

  bool operator==(const ParseError&) const = default;
};

struct ParseResult {
  std::optional<Workload> workload;
  std::vector<ParseError> errors;

  bool ok() const { return workload.has_value() && errors.empty(); }
};

ParseResult parse_workload(std::string_view text);

/// Canonical text form; parse(serialize(parse(text))) reproduces the
/// same workload.
std::string serialize_workload(const Workload& w);

/// Renders one emit record as the runner's output line, newline
/// included: `the <var> is <value> produced by <task> thread`.
std::string format_emit_line(const EmitRecord& e);

/// One line per event: `tick=<n> task=<name|-> action=<action>` plus
/// `until=` for sleep/idle, `var=`/`value=` for emits and `reason=` for
/// failures. Byte-deterministic.
std::string render_trace(const Trace& t);

/// Stable key=value lines: makespan, compute_ticks, idle_ticks,
/// context_switches, utilization (four decimal places).
std::string render_metrics(const RunMetrics& m);

}  // namespace flynn
