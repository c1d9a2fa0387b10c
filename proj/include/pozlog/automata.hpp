#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pozlog/branch_set.hpp"
#include "pozlog/word.hpp"

namespace pozlog::omega {

// Subset-construction cap used when none is given.
inline constexpr std::size_t kDefaultSubsetCap = 4096;

struct Emptiness {
  bool empty = true;
  std::optional<Lasso> witness;  // set when nonempty
};

struct DensityVerdict {
  bool dense = false;
  Word witness;  // NotDense: shortlex-least prefix with no extension in the set
};

struct Inclusion {
  bool holds = true;
  std::optional<Lasso> counterexample;  // in the left set but not the right
};

struct Equivalence {
  bool equivalent = true;
  std::optional<Lasso> counterexample;
  bool counterexample_in_left = false;  // which side contains it
};

// ------------------------------------------------------------ decision procedures

bool membership(const Lasso& eta, const BranchSet& set);
Emptiness is_empty(const BranchSet& set);
DensityVerdict is_dense(const BranchSet& set, std::size_t subset_cap = kDefaultSubsetCap);
Inclusion includes(const BranchSet& sub, const BranchSet& super, std::size_t subset_cap = kDefaultSubsetCap);
Equivalence equivalent(const BranchSet& a, const BranchSet& b, std::size_t subset_cap = kDefaultSubsetCap);

// ------------------------------------------------------------------ constructions

// Requires a deterministic, complete, single-parity automaton.
BranchSet complement(const BranchSet& set);
// Complement of anything this library can complement: deterministic parity
// (completed first), safety sets (determinized first), and disjoint unions of
// such components. Throws PreconditionError otherwise.
BranchSet complement_general(const BranchSet& set, std::size_t subset_cap = kDefaultSubsetCap);
// Subset construction for safety acceptance (also for parity automata whose
// priorities are all even). Result is deterministic, complete, parity.
BranchSet determinize_safety(const BranchSet& set, std::size_t subset_cap = kDefaultSubsetCap);
// Adds a rejecting sink to a deterministic parity/safety automaton.
BranchSet complete(const BranchSet& set);

BranchSet intersect(const BranchSet& a, const BranchSet& b);
BranchSet unite(const BranchSet& a, const BranchSet& b);
// Same automaton started from the states reached after reading sigma.
BranchSet residual(const BranchSet& set, const Word& sigma);
// States from which some branch is accepted.
std::vector<bool> live_states(const BranchSet& set);
// Keeps only states reachable from the initial ones.
BranchSet trim_unreachable(const BranchSet& set);

// ------------------------------------------------------------------ standard sets

BranchSet universal();
BranchSet empty_set();
// All branches extending sigma.
BranchSet starts_with(const Word& sigma);
BranchSet infinitely_many(std::uint8_t bit);
// Exactly one branch.
BranchSet singleton(const Lasso& eta);
// Finitely many branches (disjoint union of singletons).
BranchSet from_lassos(const std::vector<Lasso>& lassos);
// Branches that are eventually w^omega for some w in `patterns`; patterns
// must be primitive and pairwise non-conjugate. Deterministic co-Buchi
// realized as parity.
BranchSet eventually_periodic(const std::vector<Word>& patterns);

// Primitive word test and conjugacy (equal up to rotation).
bool is_primitive(const Word& w);
bool conjugate(const Word& a, const Word& b);

// ------------------------------------------------------------------ text format
//
//   omega <name> states=N init=q0[,q1...] acc=safety|parity|product-parity
//   prio q 3            (parity; product-parity lists one value per coordinate)
//   trans q 0 -> r
//   label q text        (optional)

std::string print_branch_set(const BranchSet& set);
std::vector<BranchSet> parse_branch_sets(std::string_view text);
BranchSet parse_branch_set(std::string_view text);

}  // namespace pozlog::omega
