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

#include "flynn/workload.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace flynn {

std::string_view to_string(Opcode op) {
  switch (op) {
    case Opcode::Add: return "add";
    case Opcode::Sub: return "sub";
    case Opcode::Mul: return "mul";
    case Opcode::Div: return "div";
  }
  return "?";
}

std::string_view to_string(ExecutionModel m) {
  switch (m) {
    case ExecutionModel::SPSD: return "SPSD";
    case ExecutionModel::MPSD: return "MPSD";
    case ExecutionModel::SPMD: return "SPMD";
    case ExecutionModel::MPMD: return "MPMD";
  }
  return "?";
}

const ProgramDef* Workload::find_program(std::string_view name) const {
  for (const ProgramDef& p : programs) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

namespace {

void check_binding_keys(const DataBinding& b, std::vector<ValidationError>& out) {
  for (const auto& [key, value] : b) {
    (void)value;
    if (!is_identifier(key)) {
      out.push_back({ValidationError::Kind::BadIdentifier,
                     "invalid identifier '" + key + "' in data binding"});
    }
  }
}

// Variables read by `instr` that are not in `defined`.
void collect_unbound(const Instruction& instr, const std::set<std::string>& defined,
                     std::vector<std::string>& out) {
  auto check_operand = [&](const Operand& o) {
    if (o.is_var() && !defined.contains(o.var_name())) out.push_back(o.var_name());
  };
  if (const auto* c = std::get_if<ComputeInstr>(&instr)) {
    check_operand(c->lhs);
    check_operand(c->rhs);
  } else if (const auto* e = std::get_if<EmitInstr>(&instr)) {
    if (!defined.contains(e->var)) out.push_back(e->var);
  }
}

}  // namespace

std::vector<ValidationError> validate_workload(const Workload& w) {
  std::vector<ValidationError> errors;

  if (w.tasks.empty()) {
    errors.push_back({ValidationError::Kind::NoTasks, "no tasks"});
  }

  std::unordered_set<std::string> program_names;
  for (const ProgramDef& p : w.programs) {
    if (!is_identifier(p.name)) {
      errors.push_back({ValidationError::Kind::BadIdentifier,
                        "invalid identifier '" + p.name + "' as program name"});
    }
    if (!program_names.insert(p.name).second) {
      errors.push_back({ValidationError::Kind::DuplicateProgram,
                        "duplicate program " + p.name});
    }
    if (p.body.empty()) {
      errors.push_back({ValidationError::Kind::EmptyBody,
                        "empty body in program " + p.name});
    }
    for (const Instruction& instr : p.body) {
      if (const auto* c = std::get_if<ComputeInstr>(&instr)) {
        if (!is_identifier(c->dest)) {
          errors.push_back({ValidationError::Kind::BadIdentifier,
                            "invalid identifier '" + c->dest + "' in program " + p.name});
        }
      } else if (const auto* s = std::get_if<SleepInstr>(&instr)) {
        if (s->ticks < 0) {
          errors.push_back({ValidationError::Kind::NegativeSleep,
                            "negative sleep in program " + p.name});
        }
      }
    }
  }

  if (w.shared) check_binding_keys(*w.shared, errors);

  std::unordered_set<std::string> task_names;
  std::unordered_set<std::size_t> ranks;
  // Unbound reads are reported once per (program, variable) even when
  // several tasks trip over the same one.
  std::set<std::pair<std::string, std::string>> reported_unbound;

  for (const TaskSpec& t : w.tasks) {
    if (!is_identifier(t.name)) {
      errors.push_back({ValidationError::Kind::BadIdentifier,
                        "invalid identifier '" + t.name + "' as task name"});
    }
    if (!task_names.insert(t.name).second) {
      errors.push_back({ValidationError::Kind::DuplicateTask,
                        "duplicate task " + t.name});
    }
    if (!ranks.insert(t.rank).second) {
      errors.push_back({ValidationError::Kind::DuplicateRank,
                        "duplicate rank " + std::to_string(t.rank)});
    }
    if (t.own_data) check_binding_keys(*t.own_data, errors);

    const ProgramDef* prog = w.find_program(t.program);
    if (prog == nullptr) {
      errors.push_back({ValidationError::Kind::UnknownProgram,
                        "unknown program " + t.program + " in task " + t.name});
      continue;
    }

    const DataBinding* source = t.own_data ? &*t.own_data
                                : w.shared ? &*w.shared
                                           : nullptr;
    if (source == nullptr) {
      errors.push_back({ValidationError::Kind::MissingData,
                        "task " + t.name + " has no data source"});
      continue;
    }

    std::set<std::string> defined;
    for (const auto& [key, value] : *source) {
      (void)value;
      defined.insert(key);
    }
    for (const Instruction& instr : prog->body) {
      std::vector<std::string> unbound;
      collect_unbound(instr, defined, unbound);
      for (const std::string& var : unbound) {
        if (reported_unbound.insert({prog->name, var}).second) {
          errors.push_back({ValidationError::Kind::UnboundVariable,
                            "unbound variable " + var + " in program " + prog->name});
        }
      }
      if (const auto* c = std::get_if<ComputeInstr>(&instr)) defined.insert(c->dest);
    }
  }

  return errors;
}

ExecutionModel classify(const Workload& w) {
  if (!validate_workload(w).empty()) {
    throw std::invalid_argument("classify: invalid workload");
  }

  std::set<std::string> programs;
  std::set<DataBinding> datasets;
  for (const TaskSpec& t : w.tasks) {
    programs.insert(t.program);
    datasets.insert(t.own_data ? *t.own_data : *w.shared);
  }

  const bool multi_program = programs.size() > 1;
  const bool multi_data = datasets.size() > 1;
  if (multi_program) {
    return multi_data ? ExecutionModel::MPMD : ExecutionModel::MPSD;
  }
  return multi_data ? ExecutionModel::SPMD : ExecutionModel::SPSD;
}

Env bind_env(const TaskSpec& t, const std::optional<DataBinding>& shared) {
  if (t.own_data) return *t.own_data;
  if (shared) return *shared;
  throw std::invalid_argument("task " + t.name + " has no data source");
}

namespace {

// FNV-1a over a canonical byte rendering of the workload.
struct Fnv1a {
  std::uint64_t state = 1469598103934665603ULL;

  void bytes(std::string_view s) {
    for (unsigned char c : s) {
      state ^= c;
      state *= 1099511628211ULL;
    }
    byte(0x1f);  // field separator
  }
  void byte(unsigned char c) {
    state ^= c;
    state *= 1099511628211ULL;
  }
  void num(std::int64_t v) { bytes(std::to_string(v)); }
};

void hash_binding(Fnv1a& h, const DataBinding& b) {
  for (const auto& [key, value] : b) {
    h.bytes(key);
    h.num(value);
  }
  h.byte(0x1e);
}

}  // namespace

std::uint64_t workload_digest(const Workload& w) {
  Fnv1a h;
  for (const ProgramDef& p : w.programs) {
    h.bytes(p.name);
    for (const Instruction& instr : p.body) {
      if (const auto* c = std::get_if<ComputeInstr>(&instr)) {
        h.bytes("compute");
        h.bytes(c->dest);
        h.bytes(to_string(c->op));
        for (const Operand* o : {&c->lhs, &c->rhs}) {
          if (o->is_var()) {
            h.bytes(o->var_name());
          } else {
            h.num(o->literal());
          }
        }
      } else if (const auto* e = std::get_if<EmitInstr>(&instr)) {
        h.bytes("emit");
        h.bytes(e->var);
      } else {
        h.bytes("sleep");
        h.num(std::get<SleepInstr>(instr).ticks);
      }
    }
  }
  if (w.shared) {
    h.bytes("shared");
    hash_binding(h, *w.shared);
  }
  for (const TaskSpec& t : w.tasks) {
    h.bytes(t.name);
    h.num(static_cast<std::int64_t>(t.rank));
    h.bytes(t.program);
    if (t.own_data) hash_binding(h, *t.own_data);
  }
  return h.state;
}

}  // namespace flynn
