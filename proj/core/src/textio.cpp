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

#include "flynn/textio.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <unordered_set>

namespace flynn {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::optional<Operand> parse_operand(std::string_view s) {
  if (is_identifier(s)) return Operand::var(std::string(s));
  if (auto lit = parse_int(s)) return Operand::lit(*lit);
  return std::nullopt;
}

std::optional<Opcode> parse_opcode(std::string_view s) {
  if (s == "add") return Opcode::Add;
  if (s == "sub") return Opcode::Sub;
  if (s == "mul") return Opcode::Mul;
  if (s == "div") return Opcode::Div;
  return std::nullopt;
}

struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  bool next(std::string_view& out) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    out = text.substr(pos, end - pos);
    if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    return true;
  }
};

class Parser {
 public:
  explicit Parser(std::string_view text) : reader_{text} {}

  ParseResult run() {
    std::string_view line;
    while (reader_.next(line)) {
      const std::size_t no = reader_.line_no;
      if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      std::vector<std::string_view> tokens = tokenize(line);
      if (tokens.empty()) continue;
      if (in_program_) {
        parse_instruction(tokens, no);
      } else {
        parse_directive(tokens, no);
      }
    }
    if (in_program_) {
      error(program_start_line_, "missing end for program '" + workload_.programs.back().name + "'");
    }
    if (errors_.empty() && workload_.tasks.empty()) {
      error(0, "no tasks");
    }

    ParseResult result;
    result.errors = std::move(errors_);
    if (result.errors.empty()) result.workload = std::move(workload_);
    return result;
  }

 private:
  void error(std::size_t line, std::string message) {
    errors_.push_back({line, std::move(message)});
  }

  std::string str(std::string_view s) { return std::string(s); }

  void parse_directive(const std::vector<std::string_view>& tokens, std::size_t no) {
    const std::string_view head = tokens[0];
    if (head == "program") {
      if (tokens.size() != 2 || !is_identifier(tokens[1])) {
        error(no, "expected: program <name>");
        return;
      }
      if (!program_names_.insert(str(tokens[1])).second) {
        error(no, "duplicate program '" + str(tokens[1]) + "'");
      }
      workload_.programs.push_back({str(tokens[1]), {}});
      in_program_ = true;
      program_start_line_ = no;
    } else if (head == "end") {
      error(no, "unexpected 'end' outside a program block");
    } else if (head == "shared") {
      if (workload_.shared) {
        error(no, "duplicate shared line");
        return;
      }
      DataBinding binding;
      if (parse_bindings(tokens, 1, no, binding)) workload_.shared = std::move(binding);
    } else if (head == "task") {
      if (tokens.size() < 3 || !is_identifier(tokens[1]) || !is_identifier(tokens[2])) {
        error(no, "expected: task <name> <program> [<key>=<int> ...]");
        return;
      }
      if (!task_names_.insert(str(tokens[1])).second) {
        error(no, "duplicate task '" + str(tokens[1]) + "'");
      }
      TaskSpec task;
      task.name = str(tokens[1]);
      task.rank = workload_.tasks.size();
      task.program = str(tokens[2]);
      if (tokens.size() > 3) {
        DataBinding binding;
        if (!parse_bindings(tokens, 3, no, binding)) return;
        task.own_data = std::move(binding);
      }
      workload_.tasks.push_back(std::move(task));
    } else {
      error(no, "unknown directive '" + str(head) + "'");
    }
  }

  void parse_instruction(const std::vector<std::string_view>& tokens, std::size_t no) {
    ProgramDef& program = workload_.programs.back();
    const std::string_view head = tokens[0];
    if (head == "end" && tokens.size() == 1) {
      in_program_ = false;
      return;
    }
    if (head == "emit") {
      if (tokens.size() != 2 || !is_identifier(tokens[1])) {
        error(no, "expected: emit <var>");
        return;
      }
      program.body.push_back(EmitInstr{str(tokens[1])});
      return;
    }
    if (head == "sleep") {
      std::optional<std::int64_t> ticks =
          tokens.size() == 2 ? parse_int(tokens[1]) : std::nullopt;
      if (!ticks || *ticks < 0) {
        error(no, "expected: sleep <non-negative ticks>");
        return;
      }
      program.body.push_back(SleepInstr{*ticks});
      return;
    }
    if (tokens.size() == 5 && tokens[1] == "=") {
      if (!is_identifier(head)) {
        error(no, "invalid identifier '" + str(head) + "'");
        return;
      }
      std::optional<Opcode> op = parse_opcode(tokens[2]);
      if (!op) {
        error(no, "unknown opcode '" + str(tokens[2]) + "'");
        return;
      }
      std::optional<Operand> lhs = parse_operand(tokens[3]);
      std::optional<Operand> rhs = parse_operand(tokens[4]);
      if (!lhs || !rhs) {
        error(no, "malformed operand '" + str(!lhs ? tokens[3] : tokens[4]) + "'");
        return;
      }
      program.body.push_back(ComputeInstr{str(head), *op, std::move(*lhs), std::move(*rhs)});
      return;
    }
    error(no, "malformed instruction");
  }

  bool parse_bindings(const std::vector<std::string_view>& tokens, std::size_t first,
                      std::size_t no, DataBinding& out) {
    for (std::size_t i = first; i < tokens.size(); ++i) {
      const std::string_view token = tokens[i];
      const std::size_t eq = token.find('=');
      if (eq == std::string_view::npos) {
        error(no, "malformed binding '" + str(token) + "'");
        return false;
      }
      const std::string_view key = token.substr(0, eq);
      const std::optional<std::int64_t> value = parse_int(token.substr(eq + 1));
      if (!is_identifier(key) || !value) {
        error(no, "malformed binding '" + str(token) + "'");
        return false;
      }
      if (!out.emplace(std::string(key), *value).second) {
        error(no, "duplicate binding key '" + str(key) + "'");
        return false;
      }
    }
    return true;
  }

  LineReader reader_;
  Workload workload_;
  std::vector<ParseError> errors_;
  std::unordered_set<std::string> program_names_;
  std::unordered_set<std::string> task_names_;
  bool in_program_ = false;
  std::size_t program_start_line_ = 0;
};

std::string render_operand(const Operand& o) {
  return o.is_var() ? o.var_name() : std::to_string(o.literal());
}

void render_binding(std::ostringstream& out, const DataBinding& b) {
  for (const auto& [key, value] : b) out << ' ' << key << '=' << value;
}

}  // namespace

ParseResult parse_workload(std::string_view text) { return Parser(text).run(); }

std::string serialize_workload(const Workload& w) {
  std::ostringstream out;
  for (const ProgramDef& p : w.programs) {
    out << "program " << p.name << '\n';
    for (const Instruction& instr : p.body) {
      if (const auto* c = std::get_if<ComputeInstr>(&instr)) {
        out << "  " << c->dest << " = " << to_string(c->op) << ' '
            << render_operand(c->lhs) << ' ' << render_operand(c->rhs) << '\n';
      } else if (const auto* e = std::get_if<EmitInstr>(&instr)) {
        out << "  emit " << e->var << '\n';
      } else {
        out << "  sleep " << std::get<SleepInstr>(instr).ticks << '\n';
      }
    }
    out << "end\n";
  }
  if (w.shared) {
    out << "shared";
    render_binding(out, *w.shared);
    out << '\n';
  }
  for (const TaskSpec& t : w.tasks) {
    out << "task " << t.name << ' ' << t.program;
    if (t.own_data) render_binding(out, *t.own_data);
    out << '\n';
  }
  return out.str();
}

std::string format_emit_line(const EmitRecord& e) {
  std::string out = "the ";
  out += e.var;
  out += " is ";
  out += std::to_string(e.value);
  out += " produced by ";
  out += e.task;
  out += " thread\n";
  return out;
}

std::string render_trace(const Trace& t) {
  std::ostringstream out;
  for (const ScheduleEvent& ev : t.events) {
    out << "tick=" << ev.tick << " task=" << (ev.task.empty() ? "-" : ev.task)
        << " action=" << to_string(ev.action);
    if (ev.emit) out << " var=" << ev.emit->var << " value=" << ev.emit->value;
    if (ev.until) out << " until=" << *ev.until;
    if (ev.reason) out << " reason=\"" << *ev.reason << '"';
    out << '\n';
  }
  return out.str();
}

std::string render_metrics(const RunMetrics& m) {
  char utilization[32];
  std::snprintf(utilization, sizeof(utilization), "%.4f", m.utilization);
  std::ostringstream out;
  out << "makespan=" << m.makespan << '\n'
      << "compute_ticks=" << m.compute_ticks << '\n'
      << "idle_ticks=" << m.idle_ticks << '\n'
      << "context_switches=" << m.context_switches << '\n'
      << "utilization=" << utilization << '\n';
  return out.str();
}

}  // namespace flynn
