#pragma once

#include "ptampc/error.hpp"
#include "ptampc/model.hpp"
#include "ptampc/partition.hpp"

#include <memory>
#include <set>
#include <utility>

namespace ptampc {

// The layout the controller plans against: the fixture plus sensed failures
// plus the set of redundant chains that have been switched on.
class WorkingLayout {
 public:
  explicit WorkingLayout(Automaton base)
      : shared_(std::make_shared<const Shared>(Shared{base, ::ptampc::partition(base)})), current_(std::move(base)) {}

  const Automaton& base() const noexcept { return shared_->base; }
  // base with every sensed failure flagged.
  const Automaton& current() const noexcept { return current_; }
  const LayoutPartition& partition() const noexcept { return shared_->partition; }

  std::set<StateId> failed_states() const { return current_.failed_states(); }
  const std::set<std::size_t>& enabled_redundant() const noexcept { return enabled_; }

  bool is_failed(const StateId& id) const { return current_.is_failed(id); }
  bool any_failure() const {
    for (const auto& s : current_.states()) {
      if (s.failed) return true;
    }
    return false;
  }

  bool edge_enabled(std::size_t edge_index) const {
    const auto& owner = shared_->partition.edge_owner[edge_index];
    return !owner || enabled_.contains(*owner);
  }

  WorkingLayout with_failed(const std::set<StateId>& failed) const {
    WorkingLayout copy = *this;
    copy.current_ = current_.with_failed(failed);
    return copy;
  }

  WorkingLayout with_enabled(std::set<std::size_t> enabled) const {
    for (auto id : enabled) {
      if (id >= shared_->partition.k()) {
        throw PtaError(ErrorKind::UnknownRedundantPath, "redundant path #" + std::to_string(id));
      }
    }
    WorkingLayout copy = *this;
    copy.enabled_ = std::move(enabled);
    return copy;
  }

  WorkingLayout with_all_enabled() const {
    std::set<std::size_t> all;
    for (std::size_t i = 0; i < shared_->partition.k(); ++i) all.insert(i);
    return with_enabled(std::move(all));
  }

  // Redundant paths with their enabled flags reflecting this layout.
  std::vector<RedundantPath> redundant_paths() const {
    auto out = shared_->partition.redundant_paths;
    for (std::size_t i = 0; i < out.size(); ++i) out[i].enabled = enabled_.contains(i);
    return out;
  }

  friend bool operator==(const WorkingLayout& a, const WorkingLayout& b) {
    return a.current_ == b.current_ && a.enabled_ == b.enabled_;
  }

 private:
  struct Shared {
    Automaton base;
    LayoutPartition partition;
  };

  std::shared_ptr<const Shared> shared_;
  Automaton current_;
  std::set<std::size_t> enabled_;
};

}  // namespace ptampc
