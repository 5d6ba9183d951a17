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

// flynnsim: run workload files on the program/data quadrant runners.
//
// Exit codes: 0 all tasks finished, 1 parse/validation error, 2 usage
// error, 3 run completed with at least one failed task.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "flynn/metrics.hpp"
#include "flynn/parallel.hpp"
#include "flynn/scheduler.hpp"
#include "flynn/textio.hpp"
#include "flynn/workload.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadWorkload = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTaskFailed = 3;

// Reads, parses and validates a workload file; diagnostics go to stderr.
std::optional<flynn::Workload> load_workload(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": error: cannot open file\n";
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  flynn::ParseResult parsed = flynn::parse_workload(buffer.str());
  if (!parsed.ok()) {
    for (const flynn::ParseError& e : parsed.errors) {
      if (e.line == 0) {
        std::cerr << path << ": error: " << e.message << '\n';
      } else {
        std::cerr << path << ':' << e.line << ": error: " << e.message << '\n';
      }
    }
    return std::nullopt;
  }

  std::vector<flynn::ValidationError> errors = flynn::validate_workload(*parsed.workload);
  if (!errors.empty()) {
    for (const flynn::ValidationError& e : errors) {
      std::cerr << path << ": error: " << e.message << '\n';
    }
    return std::nullopt;
  }
  return std::move(parsed.workload);
}

int cmd_run(const std::string& path, const std::string& mode, std::uint64_t quantum,
            bool with_trace, bool with_metrics, std::uint64_t tick_ms) {
  std::optional<flynn::Workload> workload = load_workload(path);
  if (!workload) return kExitBadWorkload;

  if (mode == "threads" && (with_trace || with_metrics)) {
    std::cerr << "error: --trace/--metrics need simulated time; use --mode sim or seq\n";
    return kExitUsage;
  }

  flynn::RunResult result;
  if (mode == "sim") {
    result = flynn::run_concurrent(*workload, flynn::SchedulerConfig{quantum});
  } else if (mode == "seq") {
    result = flynn::run_sequential(*workload);
  } else {
    result = flynn::run_parallel(*workload, std::chrono::milliseconds(tick_ms));
  }

  for (const flynn::EmitRecord& emit : result.emits) {
    std::cout << flynn::format_emit_line(emit);
  }
  if (with_trace) std::cout << flynn::render_trace(result.trace);
  if (with_metrics) std::cout << flynn::render_metrics(flynn::compute_metrics(result.trace));

  bool any_failed = false;
  for (const auto& [task, status] : result.statuses) {
    if (status.kind == flynn::TerminalStatus::Kind::Failed) {
      any_failed = true;
      std::cerr << "task " << task << " failed: " << status.reason << '\n';
    }
  }
  return any_failed ? kExitTaskFailed : kExitOk;
}

int cmd_classify(const std::string& path) {
  std::optional<flynn::Workload> workload = load_workload(path);
  if (!workload) return kExitBadWorkload;
  std::cout << flynn::to_string(flynn::classify(*workload)) << '\n';
  return kExitOk;
}

int cmd_check(const std::string& path) {
  return load_workload(path) ? kExitOk : kExitBadWorkload;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flynn program/data taxonomy workload runner (SPSD/MPSD/SPMD/MPMD)"};
  app.require_subcommand(1);

  std::string file;
  std::string mode = "sim";
  std::uint64_t quantum = 1;
  std::uint64_t tick_ms = 1;
  bool with_trace = false;
  bool with_metrics = false;

  CLI::App* run = app.add_subcommand("run", "Execute a workload file");
  run->add_option("file", file, "workload file")->required();
  run->add_option("--mode", mode, "sim (cooperative simulator), seq (one after another), threads (OS threads)")
      ->check(CLI::IsMember({"sim", "seq", "threads"}));
  run->add_option("--quantum", quantum, "compute ticks per dispatch (sim mode)")
      ->check(CLI::PositiveNumber);
  run->add_flag("--trace", with_trace, "print the schedule trace");
  run->add_flag("--metrics", with_metrics, "print run metrics");
  run->add_option("--tick-ms", tick_ms, "milliseconds per tick (threads mode)");

  CLI::App* classify = app.add_subcommand("classify", "Print the workload's quadrant");
  classify->add_option("file", file, "workload file")->required();

  CLI::App* check = app.add_subcommand("check", "Validate a workload file");
  check->add_option("file", file, "workload file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) {
      return cmd_run(file, mode, quantum, with_trace, with_metrics, tick_ms);
    }
    if (classify->parsed()) return cmd_classify(file);
    if (check->parsed()) return cmd_check(file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadWorkload;
  }
  return kExitUsage;
}
