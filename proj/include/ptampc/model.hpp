#pragma once

// Priced timed automaton model of a manufacturing layout.
//
// Clocks, guards and resets are carried so fixtures round-trip, but they are
// never evaluated: every guard is satisfied and every reset is a no-op.

#include "ptampc/error.hpp"
#include "ptampc/rational.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ptampc {

struct StateId {
  std::string value;

  StateId() = default;
  explicit StateId(std::string v) : value(std::move(v)) {}

  bool empty() const noexcept { return value.empty(); }
  const std::string& str() const noexcept { return value; }

  friend auto operator<=>(const StateId&, const StateId&) = default;
  friend bool operator==(const StateId&, const StateId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const StateId& id) { return os << id.value; }
};

using Path = std::vector<StateId>;

// "q1,q2,q3" -> path. Whitespace around tokens is ignored.
inline Path parse_path(std::string_view text) {
  Path out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) out.emplace_back(std::string(token));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::string join(const Path& path, std::string_view sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += sep;
    out += path[i].value;
  }
  return out;
}

struct State {
  StateId id;
  Rational cost{0};
  Rational risk_factor{0};
  std::string location;
  bool failed = false;

  friend bool operator==(const State&, const State&) = default;
};

enum class EdgeKind { Original, Redundant };

constexpr std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::Original ? "original" : "redundant";
}

struct Edge {
  StateId src;
  StateId dst;
  Rational cost{0};
  EdgeKind kind = EdgeKind::Original;
  std::string guard;  // inert
  std::string reset;  // inert

  friend bool operator==(const Edge&, const Edge&) = default;
};

class Automaton {
 public:
  Automaton() = default;

  Automaton(std::vector<State> states, std::vector<Edge> edges, StateId initial,
            std::vector<StateId> desired_sequence, std::vector<std::string> clocks = {})
      : states_(std::move(states)),
        edges_(std::move(edges)),
        initial_(std::move(initial)),
        desired_(std::move(desired_sequence)),
        clocks_(std::move(clocks)) {
    reindex();
  }

  const std::vector<State>& states() const noexcept { return states_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const StateId& initial() const noexcept { return initial_; }
  const std::vector<StateId>& desired_sequence() const noexcept { return desired_; }
  const std::vector<std::string>& clocks() const noexcept { return clocks_; }

  std::optional<std::size_t> index_of(const StateId& id) const {
    auto it = index_.find(id.value);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const StateId& id) const { return index_.contains(id.value); }

  const State& state(const StateId& id) const {
    auto idx = index_of(id);
    if (!idx) throw PtaError(ErrorKind::UnknownState, "no state '" + id.value + "'");
    return states_[*idx];
  }

  bool is_failed(const StateId& id) const { return state(id).failed; }

  // Indices into edges() of the edges leaving id. Edges whose endpoints are
  // unknown are not indexed.
  std::span<const std::size_t> out_edges(const StateId& id) const {
    auto idx = index_of(id);
    if (!idx) throw PtaError(ErrorKind::UnknownState, "no state '" + id.value + "'");
    return out_[*idx];
  }

  std::span<const std::size_t> in_edges(const StateId& id) const {
    auto idx = index_of(id);
    if (!idx) throw PtaError(ErrorKind::UnknownState, "no state '" + id.value + "'");
    return in_[*idx];
  }

  bool has_edge(const StateId& src, const StateId& dst) const {
    for (auto e : out_edges(src)) {
      if (edges_[e].dst == dst) return true;
    }
    return false;
  }

  // Copy with the given states flagged as failed (existing flags are kept).
  Automaton with_failed(const std::set<StateId>& failed) const {
    Automaton copy = *this;
    for (auto& s : copy.states_) {
      if (failed.contains(s.id)) s.failed = true;
    }
    return copy;
  }

  std::set<StateId> failed_states() const {
    std::set<StateId> out;
    for (const auto& s : states_) {
      if (s.failed) out.insert(s.id);
    }
    return out;
  }

  friend bool operator==(const Automaton& a, const Automaton& b) {
    return std::tie(a.states_, a.edges_, a.initial_, a.desired_, a.clocks_) ==
           std::tie(b.states_, b.edges_, b.initial_, b.desired_, b.clocks_);
  }

 private:
  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < states_.size(); ++i) index_.try_emplace(states_[i].id.value, i);
    out_.assign(states_.size(), {});
    in_.assign(states_.size(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      auto s = index_of(edges_[e].src);
      auto d = index_of(edges_[e].dst);
      if (!s || !d) continue;
      out_[*s].push_back(e);
      in_[*d].push_back(e);
    }
  }

  std::vector<State> states_;
  std::vector<Edge> edges_;
  StateId initial_;
  std::vector<StateId> desired_;
  std::vector<std::string> clocks_;

  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

struct Violation {
  std::string element;  // e.g. "state[3]", "edge q1->q2 (original)", "initial"
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

inline std::string describe(const Edge& e) {
  return "edge " + e.src.value + "->" + e.dst.value + " (" + std::string(to_string(e.kind)) + ")";
}

// Every invariant violation, in a fixed order. Empty means valid.
inline ValidationReport validate(const Automaton& a) {
  ValidationReport report;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < a.states().size(); ++i) {
    const auto& s = a.states()[i];
    const std::string where = "state[" + std::to_string(i) + "]" + (s.id.empty() ? "" : " " + s.id.value);
    if (s.id.empty()) report.push_back({where, "empty state id"});
    else if (!seen.insert(s.id.value).second) report.push_back({where, "duplicate state id"});
    if (s.cost < 0) report.push_back({where, "negative cost"});
    if (s.risk_factor < 0) report.push_back({where, "negative risk factor"});
  }

  std::set<std::tuple<std::string, std::string, EdgeKind>> edge_keys;
  for (const auto& e : a.edges()) {
    const auto where = describe(e);
    if (!a.contains(e.src)) report.push_back({where, "unknown source state"});
    if (!a.contains(e.dst)) report.push_back({where, "unknown destination state"});
    if (e.src == e.dst) report.push_back({where, "self loop"});
    if (e.cost < 0) report.push_back({where, "negative cost"});
    if (!edge_keys.emplace(e.src.value, e.dst.value, e.kind).second) {
      report.push_back({where, "duplicate edge"});
    }
  }

  if (!a.contains(a.initial())) {
    report.push_back({"initial", "initial state '" + a.initial().value + "' is not a state"});
  }
  for (std::size_t i = 0; i < a.desired_sequence().size(); ++i) {
    const auto& d = a.desired_sequence()[i];
    if (!a.contains(d)) {
      report.push_back({"desired_sequence[" + std::to_string(i) + "]", "desired state '" + d.value + "' is not a state"});
    }
  }
  return report;
}

}  // namespace ptampc

template <>
struct std::hash<ptampc::StateId> {
  std::size_t operator()(const ptampc::StateId& id) const noexcept { return std::hash<std::string>{}(id.value); }
};
