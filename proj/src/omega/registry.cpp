#include "pozlog/registry.hpp"

#include "pozlog/error.hpp"

namespace pozlog {

namespace {
constexpr const char* kOrigin = "omega-lang";
}

Registry::Registry() {
  sets_.emplace("universal", omega::universal());
  sets_.emplace("empty", omega::empty_set());
}

void Registry::add_set(const std::string& name, BranchSet set) {
  if (families_.count(name)) throw Error(kOrigin, "name '" + name + "' already used by a family");
  std::lock_guard g(*lock_);
  set.set_name(name);
  sets_[name] = std::move(set);
  complements_.erase(name);
}

void Registry::add_family(BranchFamily family) {
  if (sets_.count(family.name)) throw Error(kOrigin, "name '" + family.name + "' already used by a set");
  std::string name = family.name;
  families_[name] = std::move(family);
}

bool Registry::has_set(const std::string& name) const { return sets_.count(name) > 0; }
bool Registry::has_family(const std::string& name) const { return families_.count(name) > 0; }

const BranchSet& Registry::set(const std::string& name) const {
  auto it = sets_.find(name);
  if (it == sets_.end()) throw Error(kOrigin, "unknown branch set '" + name + "'");
  return it->second;
}

const BranchFamily& Registry::family(const std::string& name) const {
  auto it = families_.find(name);
  if (it == families_.end()) throw Error(kOrigin, "unknown branch family '" + name + "'");
  return it->second;
}

const BranchSet& Registry::complement_of(const std::string& name) const {
  const BranchSet& s = set(name);
  std::lock_guard g(*lock_);
  auto it = complements_.find(name);
  if (it == complements_.end()) it = complements_.emplace(name, omega::complement_general(s)).first;
  return it->second;
}

std::vector<std::string> Registry::set_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : sets_) out.push_back(k);
  return out;
}

std::vector<std::string> Registry::family_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : families_) out.push_back(k);
  return out;
}

}  // namespace pozlog
