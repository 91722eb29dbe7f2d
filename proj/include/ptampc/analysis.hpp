#pragma once

// Out-degree centrality, branch states, committed sub-paths and the Path
// Commitment Measure (kappa) of a path.

#include "ptampc/error.hpp"
#include "ptampc/model.hpp"
#include "ptampc/partition.hpp"
#include "ptampc/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

namespace ptampc {

// Stretch of a path between two branch states with at least one committed
// (out-degree 1) state in between. Indices refer to the analysed path.
struct CspSegment {
  std::size_t begin = 0;
  std::size_t end = 0;
  Path states;

  std::size_t length() const noexcept { return end - begin; }  // edges

  friend bool operator==(const CspSegment&, const CspSegment&) = default;
};

struct PathRiskProfile {
  Path path;
  std::size_t length = 0;
  std::set<StateId> branch_states;
  std::size_t gamma_centrality = 0;
  std::vector<CspSegment> csp_list;
  std::size_t csp_count = 0;
  std::size_t csp_total_length = 0;
  Rational kappa{1};
  std::size_t active_redundant_count = 0;
};

// Counted on the total layout, disabled redundant edges included.
inline std::size_t out_degree(const Automaton& a, const StateId& state) {
  return a.out_edges(state).size();
}

inline void require_legal_path(const Automaton& a, const Path& path) {
  if (path.empty()) throw PtaError(ErrorKind::IllegalPath, "empty path");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!a.contains(path[i])) throw PtaError(ErrorKind::IllegalPath, "unknown state '" + path[i].value + "'");
    if (i > 0 && !a.has_edge(path[i - 1], path[i])) {
      throw PtaError(ErrorKind::IllegalPath, "no edge " + path[i - 1].value + "->" + path[i].value);
    }
  }
}

inline std::set<StateId> branch_states(const Automaton& a, const Path& path) {
  require_legal_path(a, path);
  std::set<StateId> out;
  for (const auto& s : path) {
    if (out_degree(a, s) >= 2) out.insert(s);
  }
  return out;
}

inline std::vector<CspSegment> committed_subpaths(const Automaton& a, const Path& path) {
  require_legal_path(a, path);
  std::vector<CspSegment> out;
  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::size_t open = kNone;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto x = out_degree(a, path[i]);
    if (x >= 2) {
      if (open != kNone && i - open >= 2) {
        out.push_back({open, i, Path(path.begin() + static_cast<std::ptrdiff_t>(open),
                                     path.begin() + static_cast<std::ptrdiff_t>(i) + 1)});
      }
      open = i;
    } else if (x != 1) {
      open = kNone;  // a sink inside the path cannot be committed through
    }
  }
  return out;
}

// Redundant paths leaving the path that are active and not themselves used by it.
inline std::size_t active_redundant_count(const Automaton& a, const LayoutPartition& layout, const Path& path) {
  std::size_t n = 0;
  for (const auto& rp : layout.redundant_paths) {
    if (std::find(path.begin(), path.end(), rp.entry) == path.end()) continue;
    if (detail::traverses(path, rp)) continue;
    if (is_active_redundant(a, layout, rp, path)) ++n;
  }
  return n;
}

inline PathRiskProfile risk_profile(const Automaton& a, const LayoutPartition& layout, const Path& path) {
  PathRiskProfile p;
  p.path = path;
  p.branch_states = branch_states(a, path);
  p.length = path.size() - 1;
  for (const auto& s : p.branch_states) p.gamma_centrality += out_degree(a, s);
  p.csp_list = committed_subpaths(a, path);
  p.csp_count = p.csp_list.size();
  for (const auto& seg : p.csp_list) p.csp_total_length += seg.length();
  p.active_redundant_count = active_redundant_count(a, layout, path);

  if (p.active_redundant_count < 2) {
    p.kappa = 1;
  } else if (p.csp_count == 0) {
    p.kappa = 0;
  } else {
    if (p.length == 0) throw PtaError(ErrorKind::ZeroLengthPath, "CSPs on a zero-length path");
    p.kappa = Rational(static_cast<std::int64_t>(p.csp_total_length),
                       static_cast<std::int64_t>(p.csp_count * p.length));
  }
  return p;
}

inline Rational pcm(const Automaton& a, const LayoutPartition& layout, const Path& path) {
  return risk_profile(a, layout, path).kappa;
}

}  // namespace ptampc
