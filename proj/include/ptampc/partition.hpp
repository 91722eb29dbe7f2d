#pragma once

// Split of a total layout into the original automaton and the redundant
// (flexible material handling) chains that connect original states.

#include "ptampc/error.hpp"
#include "ptampc/model.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <vector>

namespace ptampc {

struct RedundantPath {
  Path sequence;  // entry, interior..., exit
  StateId entry;
  StateId exit;
  bool enabled = false;

  std::span<const StateId> interior() const {
    if (sequence.size() < 2) return {};
    return std::span<const StateId>(sequence).subspan(1, sequence.size() - 2);
  }

  friend bool operator==(const RedundantPath&, const RedundantPath&) = default;
};

struct LayoutPartition {
  Automaton original;
  std::vector<RedundantPath> redundant_paths;  // sorted by sequence
  // For each edge of the total automaton: the redundant path it belongs to.
  std::vector<std::optional<std::size_t>> edge_owner;

  std::size_t k() const noexcept { return redundant_paths.size(); }

  std::optional<std::size_t> find(const RedundantPath& rp) const {
    for (std::size_t i = 0; i < redundant_paths.size(); ++i) {
      if (redundant_paths[i].sequence == rp.sequence) return i;
    }
    return std::nullopt;
  }
};

namespace detail {

// Interior candidates: states touched only by redundant edges. The initial
// state always belongs to the original layout.
inline std::vector<bool> redundant_interior_mask(const Automaton& total) {
  std::vector<bool> interior(total.states().size(), false);
  for (std::size_t i = 0; i < total.states().size(); ++i) {
    const auto& id = total.states()[i].id;
    if (id == total.initial()) continue;
    auto out = total.out_edges(id);
    auto in = total.in_edges(id);
    if (out.empty() && in.empty()) continue;
    bool only_redundant = true;
    for (auto e : out) only_redundant = only_redundant && total.edges()[e].kind == EdgeKind::Redundant;
    for (auto e : in) only_redundant = only_redundant && total.edges()[e].kind == EdgeKind::Redundant;
    interior[i] = only_redundant;
  }
  return interior;
}

}  // namespace detail

// Requires a valid automaton. Throws MalformedRedundantChain when a redundant
// chain branches, dead-ends, loops, or never returns to an original state.
inline LayoutPartition partition(const Automaton& total) {
  const auto interior = detail::redundant_interior_mask(total);
  auto is_interior = [&](const StateId& id) { return interior[*total.index_of(id)]; };

  LayoutPartition out;
  out.edge_owner.assign(total.edges().size(), std::nullopt);

  std::vector<std::vector<std::size_t>> chain_edges;
  for (std::size_t e = 0; e < total.edges().size(); ++e) {
    const auto& edge = total.edges()[e];
    if (edge.kind != EdgeKind::Redundant || is_interior(edge.src)) continue;

    RedundantPath rp;
    rp.entry = edge.src;
    rp.sequence = {edge.src, edge.dst};
    std::vector<std::size_t> used{e};
    StateId cur = edge.dst;
    while (is_interior(cur)) {
      auto outs = total.out_edges(cur);
      auto ins = total.in_edges(cur);
      if (outs.size() != 1 || ins.size() != 1) {
        throw PtaError(ErrorKind::MalformedRedundantChain,
                       "interior state '" + cur.value + "' must have exactly one predecessor and one successor");
      }
      const auto& next = total.edges()[outs.front()];
      if (std::find(rp.sequence.begin(), rp.sequence.end(), next.dst) != rp.sequence.end()) {
        throw PtaError(ErrorKind::MalformedRedundantChain, "redundant chain through '" + cur.value + "' loops");
      }
      used.push_back(outs.front());
      rp.sequence.push_back(next.dst);
      cur = next.dst;
    }
    rp.exit = cur;
    out.redundant_paths.push_back(std::move(rp));
    chain_edges.push_back(std::move(used));
  }

  std::vector<std::size_t> order(out.redundant_paths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return out.redundant_paths[a].sequence < out.redundant_paths[b].sequence;
  });
  std::vector<RedundantPath> sorted;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    sorted.push_back(out.redundant_paths[order[rank]]);
    for (auto e : chain_edges[order[rank]]) out.edge_owner[e] = rank;
  }
  out.redundant_paths = std::move(sorted);

  for (std::size_t e = 0; e < total.edges().size(); ++e) {
    if (total.edges()[e].kind == EdgeKind::Redundant && !out.edge_owner[e]) {
      throw PtaError(ErrorKind::MalformedRedundantChain,
                     describe(total.edges()[e]) + " is not on a chain starting at an original state");
    }
  }

  std::vector<State> states;
  for (std::size_t i = 0; i < total.states().size(); ++i) {
    if (!interior[i]) states.push_back(total.states()[i]);
  }
  std::vector<Edge> edges;
  for (const auto& e : total.edges()) {
    if (e.kind == EdgeKind::Original) edges.push_back(e);
  }
  out.original = Automaton(std::move(states), std::move(edges), total.initial(), total.desired_sequence(),
                           total.clocks());
  return out;
}

namespace detail {

inline bool traverses(const Path& path, const RedundantPath& rp) {
  auto interior = rp.interior();
  if (!interior.empty()) {
    return std::any_of(interior.begin(), interior.end(), [&](const StateId& s) {
      return std::find(path.begin(), path.end(), s) != path.end();
    });
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i] == rp.entry && path[i + 1] == rp.exit) return true;
  }
  return false;
}

// Non-failed route from `from` to `to` over original edges only.
inline bool original_route_exists(const Automaton& total, const LayoutPartition& layout, const StateId& from,
                                  const StateId& to) {
  const auto& original = layout.original;
  if (!original.contains(from) || !original.contains(to)) return false;
  if (total.is_failed(from) || total.is_failed(to)) return false;
  std::set<StateId> seen{from};
  std::deque<StateId> queue{from};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (cur == to) return true;
    for (auto e : original.out_edges(cur)) {
      const auto& next = original.edges()[e].dst;
      if (total.is_failed(next) || !seen.insert(next).second) continue;
      queue.push_back(next);
    }
  }
  return false;
}

}  // namespace detail

// A redundant path is active when the context up to its entry is a legal
// prefix and the original layout still offers a route from its exit to the
// end of the context. Failure flags are read from `total`.
inline bool is_active_redundant(const Automaton& total, const LayoutPartition& layout, const RedundantPath& rp,
                                const Path& path_context) {
  if (!layout.find(rp)) {
    throw PtaError(ErrorKind::UnknownRedundantPath, "'" + join(rp.sequence) + "' is not in the layout");
  }
  auto at = std::find(path_context.begin(), path_context.end(), rp.entry);
  if (at == path_context.end()) return false;

  for (auto it = path_context.begin(); it != std::next(at); ++it) {
    if (!total.contains(*it) || total.is_failed(*it)) return false;
    if (it != path_context.begin() && !total.has_edge(*std::prev(it), *it)) return false;
  }
  return detail::original_route_exists(total, layout, rp.exit, path_context.back());
}

}  // namespace ptampc
