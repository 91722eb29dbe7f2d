#pragma once

// Shared fixtures, generators and independent oracles for the test suites.

#include "ptampc/io.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace ptampc::testing {

inline Path P(std::string_view text) { return parse_path(text); }
inline StateId S(std::string s) { return StateId(std::move(s)); }

inline const Automaton& paintshop() {
  static const Automaton a = io::load_fixture(std::string(PTAMPC_DATA_DIR) + "/paintshop.json");
  return a;
}

inline Scenario bundled_scenario(const std::string& name) {
  return io::load_scenario(std::string(PTAMPC_DATA_DIR) + "/" + name + ".json");
}

inline const Path kLine1 = parse_path("q1,q14,q15,q16,q17,q18,q19,q8");
inline const Path kLine2 = parse_path("q1,q9,q10,q11,q12,q13,q8");
inline const Path kLine3 = parse_path("q1,q2,q3,q4,q5,q6,q7,q8");
inline const Path kRerouteRM = parse_path("q1,q2,q3,q4,q21,q11,q12,q13,q8");
inline const Path kRerouteCB = parse_path("q1,q14,q15,q24,q11,q12,q13,q8");

// ---- synthetic paths ------------------------------------------------------
//
// A main line s0..sL (the analysed path) and a backup line b0..bL that rejoins
// sL. Position i listed in `degrees` gets out-degree d: besides the main-line
// successor it owns d-1 redundant escapes s_i -> r -> b_{i+1}. A branch at the
// terminal sL gets d escapes to bL. Every escape is active.

struct SyntheticPath {
  std::size_t length = 0;                     // edges on the main line
  std::map<std::size_t, std::size_t> degrees;  // position -> out-degree (>= 2)

  std::size_t gamma() const {
    std::size_t g = 0;
    for (auto [_, d] : degrees) g += d;
    return g;
  }
  std::size_t escapes() const {
    std::size_t n = 0;
    for (auto [pos, d] : degrees) n += pos == length ? d : d - 1;
    return n;
  }
};

struct SyntheticInstance {
  Automaton automaton;
  Path path;
};

inline SyntheticInstance build(const SyntheticPath& cfg) {
  std::vector<State> states;
  std::vector<Edge> edges;
  auto s = [](std::size_t i) { return StateId("s" + std::to_string(i)); };
  auto b = [](std::size_t i) { return StateId("b" + std::to_string(i)); };
  for (std::size_t i = 0; i <= cfg.length; ++i) states.push_back({s(i), 1, 1, "", false});
  for (std::size_t i = 0; i <= cfg.length; ++i) states.push_back({b(i), 1, 1, "", false});
  for (std::size_t i = 0; i < cfg.length; ++i) {
    edges.push_back({s(i), s(i + 1), 0, EdgeKind::Original, "", ""});
    edges.push_back({b(i), b(i + 1), 0, EdgeKind::Original, "", ""});
  }
  edges.push_back({b(cfg.length), s(cfg.length), 0, EdgeKind::Original, "", ""});
  for (auto [pos, d] : cfg.degrees) {
    const std::size_t n = pos == cfg.length ? d : d - 1;
    const std::size_t exit = std::min(pos + 1, cfg.length);
    for (std::size_t k = 0; k < n; ++k) {
      StateId r("r" + std::to_string(pos) + "_" + std::to_string(k));
      states.push_back({r, 1, 1, "", false});
      edges.push_back({s(pos), r, 0, EdgeKind::Redundant, "", ""});
      edges.push_back({r, b(exit), 0, EdgeKind::Redundant, "", ""});
    }
  }
  SyntheticInstance inst;
  for (std::size_t i = 0; i <= cfg.length; ++i) inst.path.push_back(s(i));
  inst.automaton = Automaton(std::move(states), std::move(edges), s(0), {s(cfg.length)});
  return inst;
}

inline Rational synthetic_kappa(const SyntheticPath& cfg) {
  auto inst = build(cfg);
  return pcm(inst.automaton, partition(inst.automaton), inst.path);
}

// ---- random automata ------------------------------------------------------

struct RandomCase {
  WorkingLayout layout;
  StateId start;
  std::vector<StateId> desired;
};

// At most 12 states in total; original edges plus a few one- or two-state
// redundant chains, some failed states and a random enabled subset.
inline RandomCase random_case(std::mt19937& rng, bool acyclic = false) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  const std::size_t n_orig = pick(2, 9);
  std::vector<State> states;
  for (std::size_t i = 0; i < n_orig; ++i) {
    states.push_back({StateId("n" + std::to_string(i)), Rational(static_cast<std::int64_t>(pick(1, 5))), 1, "", false});
  }
  std::vector<Edge> edges;
  std::bernoulli_distribution coin(0.35);
  for (std::size_t i = 0; i < n_orig; ++i) {
    for (std::size_t j = 0; j < n_orig; ++j) {
      if (i == j || (acyclic && j < i)) continue;
      if (coin(rng)) {
        edges.push_back({states[i].id, states[j].id, Rational(static_cast<std::int64_t>(pick(0, 2))),
                         EdgeKind::Original, "", ""});
      }
    }
  }
  // A station touched only by redundant edges would count as chain interior.
  for (std::size_t i = 0; i < n_orig; ++i) {
    bool touched = std::any_of(edges.begin(), edges.end(),
                               [&](const Edge& e) { return e.src == states[i].id || e.dst == states[i].id; });
    if (touched) continue;
    if (i == 0) edges.push_back({states[0].id, states[1].id, 0, EdgeKind::Original, "", ""});
    else edges.push_back({states[i - 1].id, states[i].id, 0, EdgeKind::Original, "", ""});
  }
  std::size_t extra = 0;
  while (states.size() < 12 && pick(0, 2) != 0) {
    std::size_t a = pick(0, n_orig - 1), z = pick(0, n_orig - 1);
    if (a == z || (acyclic && z < a)) continue;
    std::size_t len = std::min<std::size_t>(pick(1, 2), 12 - states.size());
    StateId prev = states[a].id;
    for (std::size_t k = 0; k < len; ++k) {
      StateId r("r" + std::to_string(extra++));
      states.push_back({r, Rational(static_cast<std::int64_t>(pick(1, 5))), 1, "", false});
      edges.push_back({prev, r, 0, EdgeKind::Redundant, "", ""});
      prev = r;
    }
    edges.push_back({prev, states[z].id, 0, EdgeKind::Redundant, "", ""});
  }

  const StateId start = states[0].id;
  std::vector<StateId> desired;
  const std::size_t n_desired = pick(1, std::min<std::size_t>(3, n_orig - 1));
  std::vector<std::size_t> pool;
  for (std::size_t i = 1; i < n_orig; ++i) pool.push_back(i);
  std::shuffle(pool.begin(), pool.end(), rng);
  for (std::size_t k = 0; k < n_desired; ++k) desired.push_back(states[pool[k]].id);
  if (acyclic) {
    std::sort(desired.begin(), desired.end(), [](const StateId& x, const StateId& y) {
      return std::stoi(x.value.substr(1)) < std::stoi(y.value.substr(1));
    });
  }

  Automaton total(std::move(states), std::move(edges), start, desired);
  WorkingLayout layout(total);
  std::set<StateId> failed;
  for (std::size_t k = pick(0, 2); k > 0; --k) {
    const auto& cand = total.states()[pick(1, total.states().size() - 1)].id;
    if (std::find(desired.begin(), desired.end(), cand) == desired.end()) failed.insert(cand);
  }
  layout = layout.with_failed(failed);
  std::set<std::size_t> enabled;
  for (std::size_t i = 0; i < layout.partition().k(); ++i) {
    if (coin(rng) || coin(rng)) enabled.insert(i);
  }
  layout = layout.with_enabled(enabled);
  return {layout, start, desired};
}

// ---- oracles ---------------------------------------------------------------

// Order constraint read literally: every ordered pair of desired states has witnesses
// in the path at increasing positions, and every desired state occurs.
inline bool order_oracle(const Path& path, const std::vector<StateId>& desired) {
  for (const auto& d : desired) {
    bool found = false;
    for (const auto& s : path) found = found || s == d;
    if (!found) return false;
  }
  for (std::size_t m = 0; m < desired.size(); ++m) {
    for (std::size_t n = m + 1; n < desired.size(); ++n) {
      bool witnessed = false;
      for (std::size_t k = 0; k < path.size() && !witnessed; ++k) {
        for (std::size_t l = k + 1; l < path.size() && !witnessed; ++l) {
          witnessed = path[k] == desired[m] && path[l] == desired[n];
        }
      }
      if (!witnessed) return false;
    }
  }
  return true;
}

// Every simple path from start grown breadth-first by scanning the raw edge
// list, filtered afterwards. Shares nothing with the DFS in enumerate_paths.
inline std::vector<Path> brute_force_paths(const WorkingLayout& layout, const StateId& start,
                                           const std::vector<StateId>& desired, std::size_t max_hops) {
  const auto& a = layout.current();
  std::vector<Path> all;
  if (a.state(start).failed) return all;
  std::vector<Path> frontier{{start}};
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (const auto& p : frontier) {
      all.push_back(p);
      if (p.size() - 1 >= max_hops) continue;
      for (std::size_t e = 0; e < a.edges().size(); ++e) {
        const auto& edge = a.edges()[e];
        if (edge.src != p.back() || !layout.edge_enabled(e) || a.state(edge.dst).failed) continue;
        if (std::find(p.begin(), p.end(), edge.dst) != p.end()) continue;
        auto q = p;
        q.push_back(edge.dst);
        next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  std::vector<Path> out;
  for (auto& p : all) {
    if (desired.empty() ? p.size() == 1 : (p.back() == desired.back() && order_oracle(p, desired))) {
      out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ptampc::testing
