#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pozlog/structure.hpp"
#include "pozlog/word.hpp"

namespace pozlog {

// A variable or a function application; constants are 0-ary applications.
struct Term {
  enum class Kind { Variable, Apply };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name) { return Term{Kind::Variable, std::move(name), {}}; }
  static Term apply(std::string fn, std::vector<Term> args = {}) { return Term{Kind::Apply, std::move(fn), std::move(args)}; }

  bool is_variable() const { return kind == Kind::Variable; }
  bool operator==(const Term&) const = default;
};

enum class NodeKind { Atom, NegAtom, Equal, NegEqual, And, Or, Exists, Forall, ExistsRel, QA, QFam, Not };

// Immutable formula tree. Copies share structure.
class Formula {
 public:
  static Formula atom(std::string relation, std::vector<Term> terms);
  static Formula neg_atom(std::string relation, std::vector<Term> terms);
  static Formula equal(Term lhs, Term rhs);
  static Formula neg_equal(Term lhs, Term rhs);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula truth() { return conj({}); }
  static Formula falsity() { return disj({}); }
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);
  static Formula exists_rel(std::string relation, std::size_t arity, Formula body);
  // (Q x0 x1)(psi0, ..., psi4) over a registered set or family.
  static Formula qa(std::string set, std::string x0, std::string x1, std::array<Formula, 5> psi);
  static Formula qfam(std::string family, std::string x0, std::string x1, std::array<Formula, 5> psi);
  static Formula negation(Formula body);

  NodeKind kind() const;
  // Relation name (atoms), relation variable (ExistsRel), set/family name (QA/QFam).
  const std::string& symbol() const;
  const std::vector<Term>& terms() const;
  const std::vector<Formula>& children() const;
  // Exists/Forall: one variable; QA/QFam: x0 and x1.
  const std::vector<std::string>& bound() const;
  std::size_t arity() const;  // ExistsRel only

  bool is_literal() const;
  bool is_quantifier_node() const { return kind() == NodeKind::QA || kind() == NodeKind::QFam; }

  std::set<std::string> free_variables() const;
  // Relation symbols used free (not bound by an enclosing ExistsRel).
  std::set<std::string> free_relations() const;
  // Renames free variables (simultaneously). Throws if a new name would be
  // captured by a binder inside the formula.
  Formula rename_free(const std::vector<std::pair<std::string, std::string>>& renaming) const;

  std::size_t node_count() const;
  std::size_t depth() const;

  bool operator==(const Formula& other) const;
  // Identity of the shared node, for per-node caches.
  const void* id() const { return node_.get(); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Argument bundle of a density quantifier application.
struct QuantifierArgs {
  std::string x0 = "x0";
  std::string x1 = "x1";
  std::array<Formula, 5> psi{Formula::truth(), Formula::truth(), Formula::truth(), Formula::truth(), Formula::truth()};

  static QuantifierArgs of(const Formula& q);
  // psi_i = R_i atoms over (x0, x1), resp. (x0).
  static QuantifierArgs atomic();
};

// ----------------------------------------------------------------- fragments

enum class FragmentTag { FO, Sigma11, Ld, LdMinus, Ld0, Ld1 };

std::string_view to_string(FragmentTag tag);
FragmentTag fragment_from_string(std::string_view text);  // "fo", "sigma11", "ld", "ld-", "ld0", "ld1"

// Smallest tag containing the formula. LdMinus is preferred over Ld0 when
// both apply.
FragmentTag classify_fragment(const Formula& f);
// Whether `inner` is contained in `outer` as a fragment.
bool fragment_contains(FragmentTag outer, FragmentTag inner);
// Whether the formula is well-formed in the given mode.
bool admits(FragmentTag mode, const Formula& f);
bool is_first_order(const Formula& f);

// -------------------------------------------------------------- parse/print

struct ParseOptions {
  const Vocabulary* vocabulary = nullptr;  // arity checks when present
  bool allow_negation = false;             // general `not` (Ld1 mode)
};

Formula parse_formula(std::string_view text, const ParseOptions& options = {});
// A file may hold several top-level formulas; they are read as a conjunction
// list.
std::vector<Formula> parse_formulas(std::string_view text, const ParseOptions& options = {});
std::string print_formula(const Formula& f);
std::string print_term(const Term& t);

// ------------------------------------------------------------------ builders

class Registry;

// R4(x) & exists y0..yn (R3(y0) & R4(y_i) & R_eta(i)(y_i, y_i+1) & R2(y_i, x)).
Formula build_psi_eta(const Word& eta);
// Gamma^{n,k} over free variables y0..yn, x and the k parameters of psi.
Formula build_gamma(std::size_t n, std::size_t k, const QuantifierArgs& psi, const Word& eta);
// Density quantifier applied to the tau_d atoms. With a registry the
// reference must exist.
Formula build_psi_A(const std::string& set, const Registry* registry = nullptr);
Formula build_psi_fam(const std::string& family, const Registry* registry = nullptr);
// The seven-conjunct tree-likeness sentence.
Formula build_theta_tl();

}  // namespace pozlog
