#pragma once

// Scenario runs: one independent run per controller, then a comparison.

#include "ptampc/controller.hpp"
#include "ptampc/error.hpp"
#include "ptampc/model.hpp"
#include "ptampc/triggers.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ptampc {

struct Scenario {
  std::string name;
  Automaton fixture;
  std::vector<FailureTrigger> schedule;
  Rational beta{1};
  std::vector<ControllerKind> controllers;
};

struct ComparisonReport {
  std::string scenario;
  std::vector<RunResult> runs;
  std::optional<ControllerKind> winner;  // lowest reported V among finished runs
};

inline ValidationReport validate_scenario(const Scenario& s) {
  ValidationReport report;
  if (s.beta < 0) report.push_back({"beta", "beta must be non-negative"});
  if (s.controllers.empty()) report.push_back({"controllers", "at least one controller is required"});
  for (std::size_t i = 0; i < s.schedule.size(); ++i) {
    const auto& t = s.schedule[i];
    const std::string where = "failures[" + std::to_string(i) + "]";
    if (!s.fixture.contains(t.target)) report.push_back({where, "unknown target '" + t.target.value + "'"});
    for (const auto& ref : referenced_states(t.condition)) {
      if (!s.fixture.contains(ref)) report.push_back({where, "unknown reference state '" + ref.value + "'"});
    }
    if (std::holds_alternative<when::AtStart>(t.condition) && t.target == s.fixture.initial()) {
      report.push_back({where, "fails the initial (occupied) state"});
    }
  }
  return report;
}

inline ComparisonReport simulate(const Scenario& scenario) {
  if (auto v = validate(scenario.fixture); !v.empty()) {
    throw PtaError(ErrorKind::InvalidScenario, "fixture invalid: " + v.front().element + ": " + v.front().message);
  }
  if (auto v = validate_scenario(scenario); !v.empty()) {
    throw PtaError(ErrorKind::InvalidScenario, v.front().element + ": " + v.front().message);
  }
  ComparisonReport report;
  report.scenario = scenario.name;
  for (auto kind : scenario.controllers) {
    report.runs.push_back(run(scenario.fixture, Objective(kind, scenario.beta), scenario.schedule));
  }
  for (const auto& r : report.runs) {
    if (r.status != RunStatus::Finished) continue;
    if (!report.winner) {
      report.winner = r.controller;
      continue;
    }
    const auto& best = *std::find_if(report.runs.begin(), report.runs.end(),
                                     [&](const RunResult& x) { return x.controller == *report.winner; });
    if (*r.reported_V < *best.reported_V) report.winner = r.controller;
  }
  return report;
}

}  // namespace ptampc
