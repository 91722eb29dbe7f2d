#pragma once

// Failure triggers keyed to a run's own entry/exit history.

#include "ptampc/model.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ptampc {

namespace when {
struct AtStart {
  friend bool operator==(const AtStart&, const AtStart&) = default;
};
struct AfterExit {
  StateId state;
  friend bool operator==(const AfterExit&, const AfterExit&) = default;
};
struct AfterEntry {
  StateId state;
  friend bool operator==(const AfterEntry&, const AfterEntry&) = default;
};
// Fires once after_exit has been left, provided before_entry was not entered yet.
struct Window {
  StateId after_exit;
  StateId before_entry;
  friend bool operator==(const Window&, const Window&) = default;
};
}  // namespace when

using TriggerCondition = std::variant<when::AtStart, when::AfterExit, when::AfterEntry, when::Window>;

struct FailureTrigger {
  StateId target;
  TriggerCondition condition;

  friend bool operator==(const FailureTrigger&, const FailureTrigger&) = default;
};

// States referenced by a condition (not the target).
inline std::vector<StateId> referenced_states(const TriggerCondition& c) {
  struct Visitor {
    std::vector<StateId> operator()(const when::AtStart&) const { return {}; }
    std::vector<StateId> operator()(const when::AfterExit& w) const { return {w.state}; }
    std::vector<StateId> operator()(const when::AfterEntry& w) const { return {w.state}; }
    std::vector<StateId> operator()(const when::Window& w) const { return {w.after_exit, w.before_entry}; }
  };
  return std::visit(Visitor{}, c);
}

// Entry and exit ticks of one run. Only the first entry/exit of a state is kept.
class EventLog {
 public:
  void enter(const StateId& s, std::size_t tick) { entries_.try_emplace(s, tick); }
  void exit(const StateId& s, std::size_t tick) { exits_.try_emplace(s, tick); }

  bool entered(const StateId& s) const { return entries_.contains(s); }
  bool exited(const StateId& s) const { return exits_.contains(s); }

  const std::map<StateId, std::size_t>& entries() const noexcept { return entries_; }
  const std::map<StateId, std::size_t>& exits() const noexcept { return exits_; }

 private:
  std::map<StateId, std::size_t> entries_;
  std::map<StateId, std::size_t> exits_;
};

struct TriggerFiring {
  std::set<StateId> newly_failed;
  std::set<std::size_t> fired;  // schedule indices
};

// Called once per tick before planning, with the log up to this tick.
inline TriggerFiring evaluate_triggers(std::span<const FailureTrigger> schedule, const EventLog& log,
                                       const std::set<std::size_t>& already_fired) {
  TriggerFiring out;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (already_fired.contains(i)) continue;
    const auto& t = schedule[i];
    bool fire = std::visit(
        [&](const auto& c) -> bool {
          using C = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<C, when::AtStart>) return true;
          else if constexpr (std::is_same_v<C, when::AfterExit>) return log.exited(c.state);
          else if constexpr (std::is_same_v<C, when::AfterEntry>) return log.entered(c.state);
          else return log.exited(c.after_exit) && !log.entered(c.before_entry);
        },
        t.condition);
    if (fire) {
      out.fired.insert(i);
      out.newly_failed.insert(t.target);
    }
  }
  return out;
}

}  // namespace ptampc
