#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pozlog/automata.hpp"
#include "pozlog/family.hpp"

namespace pozlog {

// Named branch sets and families that QA / Qfam formulas refer to.
// "universal" and "empty" are always present.
class Registry {
 public:
  Registry();

  void add_set(const std::string& name, BranchSet set);
  void add_family(BranchFamily family);

  bool has_set(const std::string& name) const;
  bool has_family(const std::string& name) const;
  const BranchSet& set(const std::string& name) const;
  const BranchFamily& family(const std::string& name) const;
  // Complement of a registered set, computed once.
  const BranchSet& complement_of(const std::string& name) const;

  std::vector<std::string> set_names() const;
  std::vector<std::string> family_names() const;

 private:
  std::map<std::string, BranchSet> sets_;
  std::map<std::string, BranchFamily> families_;
  mutable std::map<std::string, BranchSet> complements_;
  mutable std::shared_ptr<std::mutex> lock_ = std::make_shared<std::mutex>();
};

}  // namespace pozlog
