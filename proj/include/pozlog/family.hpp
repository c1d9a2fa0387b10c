#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pozlog/automata.hpp"

namespace pozlog {

// A strictly increasing finite chain of dense branch sets and their union.
struct BranchFamily {
  std::string name;
  std::vector<BranchSet> chain;
  BranchSet union_set;

  // Members in quantifier order: the chain, then the union.
  std::size_t member_count() const { return chain.size() + 1; }
  const BranchSet& member(std::size_t j) const { return j < chain.size() ? chain[j] : union_set; }
};

struct FamilyCheck {
  std::string kind;  // "density", "strictness", "union"
  std::string where;  // "0", "(0,1)", ...
  bool passed = false;
  std::string detail;  // witness or counterexample when failed
};

struct FamilyReport {
  std::vector<FamilyCheck> checks;
  // Chain members are meant to be countable; not decidable from an automaton.
  std::string countability = "unverified";

  bool passed() const;
  std::vector<std::string> failures() const;
};

FamilyReport validate_family(const BranchFamily& family, std::size_t subset_cap = omega::kDefaultSubsetCap);

// Family files: automaton blocks followed by
//   family <name> members=A0,A1,... union=U
struct FamilyFile {
  std::vector<BranchSet> sets;
  std::vector<BranchFamily> families;
};

FamilyFile parse_family_file(std::string_view text);
std::string print_family(const BranchFamily& family);

}  // namespace pozlog
