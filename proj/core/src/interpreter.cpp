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

#include "flynn/interpreter.hpp"

#include <limits>

namespace flynn {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct OperandValue {
  std::int64_t value = 0;
  std::optional<std::string> unbound;  // set when a var name is not in env
};

OperandValue read_operand(const Operand& o, const Env& env) {
  if (!o.is_var()) return {o.literal(), std::nullopt};
  auto it = env.find(o.var_name());
  if (it == env.end()) return {0, o.var_name()};
  return {it->second, std::nullopt};
}

StepOutcome exec_compute(const ComputeInstr& c, Env& env) {
  OperandValue lhs = read_operand(c.lhs, env);
  if (lhs.unbound) return Failed{"unbound variable " + *lhs.unbound};
  OperandValue rhs = read_operand(c.rhs, env);
  if (rhs.unbound) return Failed{"unbound variable " + *rhs.unbound};

  const std::int64_t a = lhs.value;
  const std::int64_t b = rhs.value;
  std::int64_t result = 0;
  switch (c.op) {
    case Opcode::Add:
      if (__builtin_add_overflow(a, b, &result)) return Failed{"overflow"};
      break;
    case Opcode::Sub:
      if (__builtin_sub_overflow(a, b, &result)) return Failed{"overflow"};
      break;
    case Opcode::Mul:
      if (__builtin_mul_overflow(a, b, &result)) return Failed{"overflow"};
      break;
    case Opcode::Div:
      if (b == 0) return Failed{"divide by zero"};
      if (a == std::numeric_limits<std::int64_t>::min() && b == -1) {
        return Failed{"overflow"};
      }
      result = a / b;  // truncates toward zero
      break;
  }
  env[c.dest] = result;
  return Advanced{};
}

}  // namespace

StepOutcome exec_instruction(const Instruction& instr, Env& env, const EvalContext& ctx) {
  return std::visit(
      Overloaded{
          [&](const ComputeInstr& c) -> StepOutcome { return exec_compute(c, env); },
          [&](const EmitInstr& e) -> StepOutcome {
            auto it = env.find(e.var);
            if (it == env.end()) return Failed{"unbound variable " + e.var};
            return Emitted{EmitRecord{std::string(ctx.task), e.var, it->second, ctx.tick}};
          },
          [&](const SleepInstr& s) -> StepOutcome { return Slept{s.ticks}; },
      },
      instr);
}

StepOutcome step_task(const ProgramDef& p, std::size_t& pc, Env& env, const EvalContext& ctx) {
  if (pc >= p.body.size()) return Finished{};
  StepOutcome outcome = exec_instruction(p.body[pc], env, ctx);
  if (!std::holds_alternative<Failed>(outcome)) ++pc;
  return outcome;
}

TaskRun run_to_completion(const ProgramDef& p, Env env, std::string_view task,
                          tick_t start_tick, const StepObserver& observe,
                          const SleepFn& pause) {
  TaskRun run;
  std::size_t pc = 0;
  tick_t now = start_tick;

  for (;;) {
    StepOutcome outcome = step_task(p, pc, env, EvalContext{task, now});
    if (const auto* emitted = std::get_if<Emitted>(&outcome)) {
      run.emits.push_back(emitted->record);
    }
    if (observe) observe(outcome, now);

    if (std::holds_alternative<Advanced>(outcome) ||
        std::holds_alternative<Emitted>(outcome)) {
      ++run.compute_ticks;
      ++now;
    } else if (const auto* slept = std::get_if<Slept>(&outcome)) {
      run.sleep_ticks += slept->ticks;
      if (pause) pause(slept->ticks);
      now += slept->ticks;
    } else if (const auto* failed = std::get_if<Failed>(&outcome)) {
      run.failure = TaskFailure{pc, failed->reason};
      return run;
    } else {
      return run;  // Finished
    }
  }
}

}  // namespace flynn
