#pragma once

// Path enumeration under the desired-order constraint and objective
// minimisation for the three controller flavours.

#include "ptampc/analysis.hpp"
#include "ptampc/error.hpp"
#include "ptampc/model.hpp"
#include "ptampc/rational.hpp"
#include "ptampc/working_layout.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace ptampc {

enum class ControllerKind { Plain, CB, PCM };

constexpr std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Plain: return "plain";
    case ControllerKind::CB: return "cb";
    case ControllerKind::PCM: return "pcm";
  }
  return "?";
}

inline std::optional<ControllerKind> parse_controller(std::string_view text) {
  if (text == "plain") return ControllerKind::Plain;
  if (text == "cb") return ControllerKind::CB;
  if (text == "pcm") return ControllerKind::PCM;
  return std::nullopt;
}

struct Objective {
  ControllerKind kind = ControllerKind::PCM;
  Rational beta{1};

  Objective() = default;
  Objective(ControllerKind k, Rational b) : kind(k), beta(b) {
    if (beta < 0) throw PtaError(ErrorKind::InvalidObjective, "beta must be non-negative");
  }

  // Plain ignores beta.
  Rational effective_beta() const { return kind == ControllerKind::Plain ? Rational(0) : beta; }
};

inline Objective make_objective(ControllerKind kind, double beta) {
  if (!std::isfinite(beta)) throw PtaError(ErrorKind::InvalidObjective, "beta must be finite");
  if (beta < 0) throw PtaError(ErrorKind::InvalidObjective, "beta must be non-negative");
  return Objective(kind, rational_from_double(beta));
}

struct Plan {
  Path path;
  Rational objective_value{0};
  Rational cost_sum{0};
  Rational kappa{1};
  ControllerKind controller = ControllerKind::Plain;

  friend bool operator==(const Plan&, const Plan&) = default;
};

// Desired states all occur, and their first occurrences follow the desired order.
inline bool order_satisfied(const Path& path, const std::vector<StateId>& desired) {
  std::size_t last = 0;
  for (std::size_t k = 0; k < desired.size(); ++k) {
    auto it = std::find(path.begin(), path.end(), desired[k]);
    if (it == path.end()) return false;
    auto pos = static_cast<std::size_t>(it - path.begin());
    if (k > 0 && pos <= last) return false;
    last = pos;
  }
  return true;
}

// State prices plus the price of the cheapest edge joining each consecutive pair.
inline Rational path_cost(const Automaton& a, const Path& path) {
  require_legal_path(a, path);
  Rational sum{0};
  for (std::size_t i = 0; i < path.size(); ++i) {
    sum += a.state(path[i]).cost;
    if (i == 0) continue;
    std::optional<Rational> cheapest;
    for (auto e : a.out_edges(path[i - 1])) {
      const auto& edge = a.edges()[e];
      if (edge.dst == path[i] && (!cheapest || edge.cost < *cheapest)) cheapest = edge.cost;
    }
    sum += *cheapest;
  }
  return sum;
}

inline Rational objective_pcm(const Automaton& a, const LayoutPartition& layout, const Path& path,
                              const Rational& beta) {
  return (Rational(1) + beta * pcm(a, layout, path)) * path_cost(a, path);
}

// Centrality-based baseline: rho = |path| / max(sum of out-degrees, 1).
inline Rational cb_risk(const Automaton& a, const Path& path) {
  require_legal_path(a, path);
  std::int64_t degree_sum = 0;
  for (const auto& s : path) degree_sum += static_cast<std::int64_t>(out_degree(a, s));
  return Rational(static_cast<std::int64_t>(path.size()), std::max<std::int64_t>(degree_sum, 1));
}

inline Rational objective_cb(const Automaton& a, const Path& path, const Rational& beta) {
  return (Rational(1) + beta * cb_risk(a, path)) * path_cost(a, path);
}

inline Plan evaluate_plan(const Automaton& a, const LayoutPartition& layout, const Path& path,
                          const Objective& objective) {
  Plan plan;
  plan.path = path;
  plan.controller = objective.kind;
  plan.cost_sum = path_cost(a, path);
  plan.kappa = pcm(a, layout, path);
  switch (objective.kind) {
    case ControllerKind::Plain:
      plan.objective_value = plan.cost_sum;
      break;
    case ControllerKind::CB:
      plan.objective_value = (Rational(1) + objective.beta * cb_risk(a, path)) * plan.cost_sum;
      break;
    case ControllerKind::PCM:
      plan.objective_value = (Rational(1) + objective.beta * plan.kappa) * plan.cost_sum;
      break;
  }
  return plan;
}

// Simple paths from start over non-failed states and enabled edges that end at
// the last desired state and respect the desired order. max_hops defaults to
// the state count. Result is sorted lexicographically.
inline std::vector<Path> enumerate_paths(const WorkingLayout& layout, const StateId& start,
                                         const std::vector<StateId>& desired,
                                         std::optional<std::size_t> max_hops = std::nullopt) {
  const auto& a = layout.current();
  if (!a.contains(start)) throw PtaError(ErrorKind::UnknownState, "no state '" + start.value + "'");
  for (const auto& d : desired) {
    if (!a.contains(d)) throw PtaError(ErrorKind::UnknownState, "no state '" + d.value + "'");
  }
  std::vector<Path> out;
  if (a.is_failed(start)) return out;
  if (desired.empty()) {
    out.push_back({start});
    return out;
  }
  const std::size_t hops = max_hops.value_or(a.states().size());
  const StateId& goal = desired.back();

  auto desired_rank = [&](const StateId& s) -> std::optional<std::size_t> {
    auto it = std::find(desired.begin(), desired.end(), s);
    if (it == desired.end()) return std::nullopt;
    return static_cast<std::size_t>(it - desired.begin());
  };

  Path path{start};
  std::set<StateId> on_path{start};
  // next desired index still to be met
  std::size_t met = 0;
  if (auto r = desired_rank(start)) {
    if (*r != 0) return out;
    met = 1;
  }

  auto dfs = [&](auto&& self) -> void {
    const auto& cur = path.back();
    if (cur == goal) {
      if (met == desired.size()) out.push_back(path);
      return;
    }
    if (path.size() - 1 >= hops) return;
    for (auto e : a.out_edges(cur)) {
      if (!layout.edge_enabled(e)) continue;
      const auto& next = a.edges()[e].dst;
      if (a.is_failed(next) || on_path.contains(next)) continue;
      auto r = desired_rank(next);
      if (r && *r != met) continue;  // out-of-order first occurrence
      path.push_back(next);
      on_path.insert(next);
      if (r) ++met;
      self(self);
      if (r) --met;
      on_path.erase(next);
      path.pop_back();
    }
  };
  dfs(dfs);

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Minimum objective; ties go to the lower cost, then the lexicographically
// smaller path. nullopt means UNSAT.
inline std::optional<Plan> argmin_plan(const std::vector<Path>& paths, const Objective& objective,
                                       const Automaton& a, const LayoutPartition& layout) {
  std::optional<Plan> best;
  for (const auto& p : paths) {
    auto plan = evaluate_plan(a, layout, p, objective);
    if (!best || std::tie(plan.objective_value, plan.cost_sum, plan.path) <
                     std::tie(best->objective_value, best->cost_sum, best->path)) {
      best = std::move(plan);
    }
  }
  return best;
}

inline std::optional<Plan> argmin_plan(const std::vector<Path>& paths, const Objective& objective,
                                       const WorkingLayout& layout) {
  return argmin_plan(paths, objective, layout.current(), layout.partition());
}

}  // namespace ptampc
