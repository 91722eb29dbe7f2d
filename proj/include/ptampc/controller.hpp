#pragma once

// Receding-horizon controller: sense failures, update the layout, re-plan from
// the current state and execute the first transition of the best plan.

#include "ptampc/error.hpp"
#include "ptampc/model.hpp"
#include "ptampc/optimizer.hpp"
#include "ptampc/triggers.hpp"
#include "ptampc/working_layout.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace ptampc {

struct ControllerMemory {
  Path executed;
  StateId current;
  std::vector<StateId> remaining_desired;
  std::size_t step_index = 0;

  friend bool operator==(const ControllerMemory&, const ControllerMemory&) = default;
};

inline ControllerMemory initial_memory(const Automaton& a) {
  return ControllerMemory{{a.initial()}, a.initial(), a.desired_sequence(), 0};
}

enum class StepKind { Moved, Finished, Unsat };
enum class UnsatCause { NoPath, CurrentStateFailed };

constexpr std::string_view to_string(UnsatCause c) {
  return c == UnsatCause::NoPath ? "no-path" : "current-state-failed";
}

struct StepOutcome {
  StepKind kind = StepKind::Unsat;
  std::optional<Plan> planned_path;
  std::optional<StateId> executed_state;
  std::optional<UnsatCause> cause;
};

// Marks sensed failures. Once any state has failed every redundant chain is
// switched on; the planner then picks whichever detour is usable.
inline WorkingLayout update_operator(const WorkingLayout& layout, const std::set<StateId>& sensed_failures) {
  for (const auto& s : sensed_failures) {
    if (!layout.base().contains(s)) throw PtaError(ErrorKind::UnknownState, "sensed failure of '" + s.value + "'");
  }
  auto next = layout.with_failed(sensed_failures);
  if (next.any_failure()) next = next.with_all_enabled();
  return next;
}

namespace detail {

inline void drop_satisfied_head(ControllerMemory& m) {
  while (!m.remaining_desired.empty() && m.remaining_desired.front() == m.current) {
    m.remaining_desired.erase(m.remaining_desired.begin());
  }
}

}  // namespace detail

inline std::pair<StepOutcome, ControllerMemory> mpc_step(const ControllerMemory& memory, const WorkingLayout& layout,
                                                         const Objective& objective) {
  ControllerMemory next = memory;
  StepOutcome outcome;
  if (layout.is_failed(memory.current)) {
    outcome.kind = StepKind::Unsat;
    outcome.cause = UnsatCause::CurrentStateFailed;
    return {outcome, next};
  }

  detail::drop_satisfied_head(next);
  if (next.remaining_desired.empty()) {
    outcome.kind = StepKind::Finished;
    return {outcome, next};
  }

  auto paths = enumerate_paths(layout, next.current, next.remaining_desired);
  auto plan = argmin_plan(paths, objective, layout);
  if (!plan) {
    outcome.kind = StepKind::Unsat;
    outcome.cause = UnsatCause::NoPath;
    return {outcome, next};
  }

  const StateId step = plan->path.at(1);
  next.executed.push_back(step);
  next.current = step;
  next.step_index += 1;
  if (auto it = std::find(next.remaining_desired.begin(), next.remaining_desired.end(), step);
      it != next.remaining_desired.end()) {
    next.remaining_desired.erase(it);
  }
  outcome.kind = next.remaining_desired.empty() ? StepKind::Finished : StepKind::Moved;
  outcome.planned_path = std::move(plan);
  outcome.executed_state = step;
  return {outcome, next};
}

enum class RunStatus { Finished, Unsat };

struct TraceAction {
  enum class Kind { Move, Unsat, Finished } kind = Kind::Finished;
  std::optional<StateId> next;

  friend bool operator==(const TraceAction&, const TraceAction&) = default;
};

struct TraceRecord {
  std::size_t tick = 0;
  ControllerKind controller = ControllerKind::Plain;
  StateId current;
  Path planned_path;
  std::optional<Rational> planned_V;
  std::set<StateId> fired_failures;
  TraceAction action;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct UnsatPoint {
  std::size_t tick = 0;
  StateId state;
  UnsatCause cause = UnsatCause::NoPath;

  friend bool operator==(const UnsatPoint&, const UnsatPoint&) = default;
};

struct RunResult {
  ControllerKind controller = ControllerKind::Plain;
  RunStatus status = RunStatus::Unsat;
  Path executed;
  std::map<StateId, std::size_t> entry_times;
  std::optional<Rational> reported_V;
  std::optional<Rational> reported_kappa;
  std::optional<UnsatPoint> unsat_at;
  std::vector<Plan> per_step_plans;
  std::vector<TraceRecord> trace;
  std::set<StateId> failed_at_end;
};

// One product through the layout. Sensing happens before planning on every
// tick; a tick is one transition.
inline RunResult run(const Automaton& automaton, const Objective& objective,
                     std::span<const FailureTrigger> failure_schedule) {
  if (!automaton.contains(automaton.initial()) || automaton.is_failed(automaton.initial())) {
    throw PtaError(ErrorKind::InvalidScenario, "initial state missing or failed");
  }
  WorkingLayout layout(automaton);
  ControllerMemory memory = initial_memory(automaton);
  EventLog log;
  log.enter(memory.current, 0);
  std::set<std::size_t> fired;

  RunResult result;
  result.controller = objective.kind;
  const std::size_t tick_limit = 2 * automaton.states().size();

  auto finish = [&](std::size_t tick) {
    result.status = RunStatus::Finished;
    result.reported_kappa = pcm(layout.current(), layout.partition(), memory.executed);
    result.reported_V = objective_pcm(layout.current(), layout.partition(), memory.executed, objective.beta);
    TraceRecord rec;
    rec.tick = tick;
    rec.controller = objective.kind;
    rec.current = memory.current;
    rec.planned_path = {memory.current};
    rec.planned_V = result.reported_V;
    rec.action.kind = TraceAction::Kind::Finished;
    return rec;
  };

  for (;;) {
    const std::size_t tick = memory.step_index;
    if (tick > tick_limit) throw PtaError(ErrorKind::NonTermination, "run exceeded " + std::to_string(tick_limit) + " ticks");

    auto firing = evaluate_triggers(failure_schedule, log, fired);
    fired.insert(firing.fired.begin(), firing.fired.end());
    if (firing.newly_failed.contains(memory.current)) {
      throw PtaError(ErrorKind::InvalidScenario, "failure of occupied state '" + memory.current.value + "' at tick " +
                                                     std::to_string(tick));
    }
    layout = update_operator(layout, firing.newly_failed);

    auto [outcome, next] = mpc_step(memory, layout, objective);

    TraceRecord rec;
    rec.tick = tick;
    rec.controller = objective.kind;
    rec.current = memory.current;
    rec.fired_failures = firing.newly_failed;
    if (outcome.planned_path) {
      rec.planned_path = outcome.planned_path->path;
      rec.planned_V = outcome.planned_path->objective_value;
      result.per_step_plans.push_back(*outcome.planned_path);
    }

    if (outcome.kind == StepKind::Unsat) {
      rec.action.kind = TraceAction::Kind::Unsat;
      result.trace.push_back(std::move(rec));
      result.status = RunStatus::Unsat;
      result.unsat_at = UnsatPoint{tick, memory.current, *outcome.cause};
      break;
    }
    if (!outcome.executed_state) {
      // Already at the goal: nothing to execute.
      memory = std::move(next);
      auto done = finish(tick);
      done.fired_failures = firing.newly_failed;
      result.trace.push_back(std::move(done));
      break;
    }

    rec.action = TraceAction{TraceAction::Kind::Move, outcome.executed_state};
    result.trace.push_back(std::move(rec));
    log.exit(memory.current, tick + 1);
    log.enter(*outcome.executed_state, tick + 1);
    memory = std::move(next);
    if (outcome.kind == StepKind::Finished) {
      result.trace.push_back(finish(tick + 1));
      break;
    }
  }

  result.executed = memory.executed;
  for (const auto& s : memory.executed) {
    if (auto it = log.entries().find(s); it != log.entries().end()) result.entry_times.emplace(s, it->second);
  }
  result.failed_at_end = layout.failed_states();
  return result;
}

}  // namespace ptampc
