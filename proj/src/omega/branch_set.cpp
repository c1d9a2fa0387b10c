#include "pozlog/branch_set.hpp"

#include <algorithm>

#include "pozlog/error.hpp"

namespace pozlog {

namespace {
constexpr const char* kOrigin = "omega-lang";
}

std::string_view to_string(Acceptance acc) {
  switch (acc) {
    case Acceptance::Safety:
      return "safety";
    case Acceptance::Parity:
      return "parity";
    case Acceptance::ProductParity:
      return "product-parity";
  }
  return "?";
}

BranchSet::BranchSet(std::size_t states, std::vector<State> initial, Acceptance acceptance)
    : succ_(states), acceptance_(acceptance) {
  if (acceptance_ == Acceptance::Parity) priorities_.assign(1, std::vector<Priority>(states, 0));
  if (acceptance_ == Acceptance::ProductParity) priorities_.assign(2, std::vector<Priority>(states, 0));
  set_initial(std::move(initial));
}

void BranchSet::set_initial(std::vector<State> initial) {
  std::sort(initial.begin(), initial.end());
  initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
  for (State q : initial)
    if (q >= size()) throw Error(kOrigin, "initial state out of range");
  initial_ = std::move(initial);
}

void BranchSet::add_transition(State from, std::uint8_t bit, State to) {
  if (from >= size() || to >= size()) throw Error(kOrigin, "transition state out of range");
  if (bit > 1) throw Error(kOrigin, "transition bit must be 0 or 1");
  auto& v = succ_[from][bit];
  auto it = std::lower_bound(v.begin(), v.end(), to);
  if (it == v.end() || *it != to) v.insert(it, to);
}

void BranchSet::set_priorities(std::vector<std::vector<Priority>> maps) {
  for (const auto& m : maps)
    if (m.size() != size()) throw Error(kOrigin, "priority map size mismatch");
  if (acceptance_ == Acceptance::Safety && !maps.empty()) throw Error(kOrigin, "safety acceptance has no priorities");
  if (acceptance_ == Acceptance::Parity && maps.size() != 1) throw Error(kOrigin, "parity acceptance needs exactly one priority map");
  if (acceptance_ == Acceptance::ProductParity && maps.size() < 2)
    throw Error(kOrigin, "product-parity acceptance needs at least two priority maps");
  priorities_ = std::move(maps);
}

void BranchSet::set_priority(State q, Priority p, std::size_t coordinate) { priorities_.at(coordinate).at(q) = p; }

bool BranchSet::is_deterministic() const {
  if (initial_.size() != 1) return false;
  for (const auto& s : succ_)
    if (s[0].size() > 1 || s[1].size() > 1) return false;
  return true;
}

bool BranchSet::is_complete() const {
  if (initial_.empty()) return false;
  for (const auto& s : succ_)
    if (s[0].empty() || s[1].empty()) return false;
  return true;
}

bool BranchSet::is_complementable() const {
  return acceptance_ == Acceptance::Parity && is_deterministic() && is_complete();
}

void BranchSet::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != size()) throw Error(kOrigin, "label count mismatch");
  labels_ = std::move(labels);
}

std::string BranchSet::label(State q) const {
  if (q < labels_.size()) return labels_[q];
  return "q" + std::to_string(q);
}

State BranchSet::add_state(std::vector<Priority> priorities) {
  if (priorities.size() != priorities_.size()) throw Error(kOrigin, "priority vector size mismatch");
  succ_.emplace_back();
  for (std::size_t i = 0; i < priorities_.size(); ++i) priorities_[i].push_back(priorities[i]);
  if (!labels_.empty()) labels_.push_back("q" + std::to_string(succ_.size() - 1));
  return static_cast<State>(succ_.size() - 1);
}

}  // namespace pozlog
