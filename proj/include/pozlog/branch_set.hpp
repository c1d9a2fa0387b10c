#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pozlog/word.hpp"

namespace pozlog {

using State = std::uint32_t;
using Priority = std::uint32_t;

enum class Acceptance {
  Safety,         // accepted iff some run is infinite
  Parity,         // max priority seen infinitely often is even
  ProductParity,  // conjunction of several max-even parity conditions
};

std::string_view to_string(Acceptance acc);

// An omega-regular set of branches over {0,1}, given by an automaton.
//
// Acceptance is stored uniformly as a list of priority maps that must all be
// satisfied: none for Safety, one for Parity, two or more for ProductParity.
class BranchSet {
 public:
  BranchSet() = default;
  BranchSet(std::size_t states, std::vector<State> initial, Acceptance acceptance);

  void add_transition(State from, std::uint8_t bit, State to);
  // Parity: one map. ProductParity: one per coordinate.
  void set_priorities(std::vector<std::vector<Priority>> maps);
  void set_priority(State q, Priority p, std::size_t coordinate = 0);
  void set_initial(std::vector<State> initial);

  std::size_t size() const { return succ_.size(); }
  const std::vector<State>& initial() const { return initial_; }
  const std::vector<State>& successors(State q, std::uint8_t bit) const { return succ_.at(q)[bit]; }
  Acceptance acceptance() const { return acceptance_; }
  std::size_t coordinates() const { return priorities_.size(); }
  const std::vector<std::vector<Priority>>& priority_maps() const { return priorities_; }
  Priority priority(State q, std::size_t coordinate = 0) const { return priorities_.at(coordinate).at(q); }

  // Singleton initial set and at most one successor per bit.
  bool is_deterministic() const;
  // At least one successor per bit everywhere (and an initial state).
  bool is_complete() const;
  // Deterministic, complete and single-parity: complementable by a shift.
  bool is_complementable() const;

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  // Optional per-state tags, e.g. "anchor:node" for extracted automata.
  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);
  std::string label(State q) const;

  // Adds a fresh state and returns it.
  State add_state(std::vector<Priority> priorities = {});

 private:
  std::string name_;
  std::vector<std::array<std::vector<State>, 2>> succ_;
  std::vector<State> initial_;
  Acceptance acceptance_ = Acceptance::Safety;
  std::vector<std::vector<Priority>> priorities_;
  std::vector<std::string> labels_;
};

}  // namespace pozlog
