#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pozlog/evaluator.hpp"
#include "pozlog/family.hpp"
#include "pozlog/formula.hpp"
#include "pozlog/registry.hpp"
#include "pozlog/structure.hpp"

namespace pozlog {

// ------------------------------------------------------------------ models

// Finite tree-like structures representing a chosen set of branches.
struct LassoGadgetSpec {
  std::vector<Lasso> lassos;
  // Each cone sigma represents every branch extending sigma.
  std::vector<Word> cones;
  // One R3 root for all gadgets; otherwise a root per gadget below a common
  // top element.
  bool share_root = true;
};

// A root, then per lasso u(v) a stem spelling u into a cycle spelling v, and
// one anchor per gadget. R2 is the reflexive-transitive closure of the edges,
// the root-to-everything pairs and the node-to-own-anchor pairs; R4 holds
// everywhere.
Structure canonical_model(const LassoGadgetSpec& spec);
// The branches the canonical model is built to represent, as an automaton.
BranchSet gadget_language(const LassoGadgetSpec& spec);
// One element carrying every relation; represents all branches.
Structure full_model();

// ---------------------------------------------------------------- families

// A_j = branches eventually equal to w^omega for some w in patterns[0..j].
// Throws PreconditionError when the chain would collapse or fail validation.
BranchFamily family_gen(std::size_t m, const std::vector<Word>& patterns, const std::string& name = "F");

struct CrossEquivalence {
  std::string left;   // member tag, "U" for the union
  std::string right;
  bool equivalent = false;
};

struct Scenario21 {
  BranchFamily left;   // registered as "F"
  BranchFamily right;  // registered as "G"
  Registry registry;
  Formula phi;         // psi_F & psi_G & Theta_TL
  Structure union_model;
  // Canonical model of the A_0 patterns as single periodic branches; a
  // finite model cannot represent the dense A_0 itself.
  Structure a0_model;
  std::vector<CrossEquivalence> cross;
};

// Left chain: shared+L[0..j] for each j, then shared+L+R; the right chain
// likewise with R. Both end in the same union.
Scenario21 theorem21_scenario(const std::vector<Word>& shared, const std::vector<Word>& left, const std::vector<Word>& right);
// Pairwise equivalence between the members of two families; the last chain
// member is reported as the union "U" when it equals it.
std::vector<CrossEquivalence> cross_equivalences(const BranchFamily& a, const BranchFamily& b);

// --------------------------------------------------------------- submodels

// A list of formulas closed under subformulas.
class Fragment {
 public:
  Fragment() = default;
  // The subformula closure of `formulas`, in first-seen order.
  static Fragment closure(const std::vector<Formula>& formulas);
  // Keeps the list as given; use closed() to check it.
  explicit Fragment(std::vector<Formula> formulas) : formulas_(std::move(formulas)) {}

  const std::vector<Formula>& formulas() const { return formulas_; }
  bool closed() const;

 private:
  std::vector<Formula> formulas_;
};

std::vector<Formula> immediate_subformulas(const Formula& f);

struct PreceqResult {
  bool holds = true;
  std::optional<Formula> formula;
  // Failing tuple, by element name, in the order of the formula's sorted
  // free variables.
  std::vector<std::string> tuple;
};

// Elements of `n` are matched to elements of `m` by name; throws unless n
// is a substructure of m.
void require_substructure(const Structure& n, const Structure& m);
// M |= phi(a) implies N |= phi(a), for every phi in the fragment and a in N.
PreceqResult preceq_minus(const Structure& n, const Structure& m, const Fragment& fragment, const Registry* registry = nullptr);
// N |= phi(a) implies M |= phi(a).
PreceqResult preceq_plus(const Structure& n, const Structure& m, const Fragment& fragment, const Registry* registry = nullptr);

struct LsResult {
  bool found = false;
  std::vector<Element> elements;  // indices into M
  std::optional<Structure> substructure;
  std::size_t subsets_checked = 0;
};

// Smallest function-closed substructure of size <= target_size (nonempty,
// subsets in lexicographic order) with N preceq-minus M over the fragment.
LsResult ls_search(const Structure& m, const Fragment& fragment, std::size_t target_size, const Registry* registry = nullptr);

// ------------------------------------------------------------ ultraproducts

// Ultrafilter on {0..n-1}. Subsets are bitmasks.
class Ultrafilter {
 public:
  static Ultrafilter principal(std::size_t index_size, std::size_t at);
  // Checks the ultrafilter axioms on an explicit family and recovers its
  // generator. On a finite index set every ultrafilter is principal.
  static Ultrafilter from_family(std::size_t index_size, const std::vector<std::uint64_t>& members);

  std::size_t index_size() const { return size_; }
  std::size_t generator() const { return at_; }
  bool contains(std::uint64_t subset) const { return (subset >> at_) & 1u; }

 private:
  Ultrafilter(std::size_t size, std::size_t at) : size_(size), at_(at) {}
  std::size_t size_;
  std::size_t at_;
};

struct UltraSetup {
  std::vector<Structure> factors;
  Ultrafilter filter = Ultrafilter::principal(1, 0);
};

struct Ultraproduct {
  Structure product;
  // Canonical representative (one element per factor) of each class.
  std::vector<std::vector<Element>> representatives;
  // Class -> element of the selected factor; an isomorphism.
  std::vector<Element> iso;
};

// Built from the definition: functions in the product of the factors, equal
// modulo the filter. Caps the product at 2^16 functions.
Ultraproduct ultraproduct(const UltraSetup& setup);

struct LosReport {
  std::size_t formulas = 0;
  std::size_t checks = 0;
  bool exhaustive = true;
  std::size_t sample_cap = 0;  // per formula, when sampling
  bool isomorphic = false;     // ultraproduct vs selected factor
  std::vector<std::string> violations;

  bool passed() const { return isomorphic && violations.empty(); }
};

// For each formula and tuple of product functions f: if the set of indices
// where the factor satisfies phi(f(i)) is in the filter, the ultraproduct
// satisfies phi([f]) (and conversely). Enumerates all tuples up to 512 per
// formula, otherwise samples 64 with the seed.
LosReport los_check(const UltraSetup& setup, const std::vector<Formula>& formulas, std::uint64_t seed,
                    const Registry* registry = nullptr);

}  // namespace pozlog
