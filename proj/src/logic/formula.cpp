#include "pozlog/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "pozlog/error.hpp"

namespace pozlog {

namespace {
constexpr const char* kOrigin = "logic-core";
}

struct Formula::Node {
  NodeKind kind;
  std::string symbol;
  std::vector<Term> terms;
  std::vector<Formula> children;
  std::vector<std::string> bound;
  std::size_t arity = 0;
};

Formula Formula::atom(std::string relation, std::vector<Term> terms) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::Atom, std::move(relation), std::move(terms), {}, {}, 0}));
}

Formula Formula::neg_atom(std::string relation, std::vector<Term> terms) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::NegAtom, std::move(relation), std::move(terms), {}, {}, 0}));
}

Formula Formula::equal(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::Equal, "=", {std::move(lhs), std::move(rhs)}, {}, {}, 0}));
}

Formula Formula::neg_equal(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::NegEqual, "=", {std::move(lhs), std::move(rhs)}, {}, {}, 0}));
}

Formula Formula::conj(std::vector<Formula> parts) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::And, "", {}, std::move(parts), {}, 0}));
}

Formula Formula::disj(std::vector<Formula> parts) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::Or, "", {}, std::move(parts), {}, 0}));
}

Formula Formula::exists(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::Exists, "", {}, {std::move(body)}, {std::move(var)}, 0}));
}

Formula Formula::forall(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::Forall, "", {}, {std::move(body)}, {std::move(var)}, 0}));
}

Formula Formula::exists_rel(std::string relation, std::size_t arity, Formula body) {
  if (arity == 0) throw Error(kOrigin, "relation variable '" + relation + "' must have arity >= 1");
  return Formula(std::make_shared<const Node>(Node{NodeKind::ExistsRel, std::move(relation), {}, {std::move(body)}, {}, arity}));
}

namespace {

void check_quantifier_args(const std::string& x0, const std::string& x1, const std::array<Formula, 5>& psi) {
  if (x0 == x1) throw Error(kOrigin, "quantifier variables must differ");
  for (std::size_t i : {3, 4})
    if (psi[i].free_variables().count(x1))
      throw Error(kOrigin, "psi" + std::to_string(i) + " may not use the second quantifier variable '" + x1 + "'");
}

}  // namespace

Formula Formula::qa(std::string set, std::string x0, std::string x1, std::array<Formula, 5> psi) {
  check_quantifier_args(x0, x1, psi);
  std::vector<Formula> kids(psi.begin(), psi.end());
  return Formula(std::make_shared<const Node>(Node{NodeKind::QA, std::move(set), {}, std::move(kids), {std::move(x0), std::move(x1)}, 0}));
}

Formula Formula::qfam(std::string family, std::string x0, std::string x1, std::array<Formula, 5> psi) {
  check_quantifier_args(x0, x1, psi);
  std::vector<Formula> kids(psi.begin(), psi.end());
  return Formula(
      std::make_shared<const Node>(Node{NodeKind::QFam, std::move(family), {}, std::move(kids), {std::move(x0), std::move(x1)}, 0}));
}

Formula Formula::negation(Formula body) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::Not, "", {}, {std::move(body)}, {}, 0}));
}

NodeKind Formula::kind() const { return node_->kind; }
const std::string& Formula::symbol() const { return node_->symbol; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const std::vector<Formula>& Formula::children() const { return node_->children; }
const std::vector<std::string>& Formula::bound() const { return node_->bound; }
std::size_t Formula::arity() const { return node_->arity; }

bool Formula::is_literal() const {
  switch (kind()) {
    case NodeKind::Atom:
    case NodeKind::NegAtom:
    case NodeKind::Equal:
    case NodeKind::NegEqual:
      return true;
    default:
      return false;
  }
}

namespace {

void term_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name);
    return;
  }
  for (const Term& a : t.args) term_variables(a, out);
}

}  // namespace

std::set<std::string> Formula::free_variables() const {
  std::set<std::string> out;
  if (is_literal()) {
    for (const Term& t : terms()) term_variables(t, out);
    return out;
  }
  for (const Formula& c : children()) {
    auto sub = c.free_variables();
    out.insert(sub.begin(), sub.end());
  }
  for (const std::string& v : bound()) out.erase(v);
  return out;
}

std::set<std::string> Formula::free_relations() const {
  std::set<std::string> out;
  if (kind() == NodeKind::Atom || kind() == NodeKind::NegAtom) {
    out.insert(symbol());
    return out;
  }
  for (const Formula& c : children()) {
    auto sub = c.free_relations();
    out.insert(sub.begin(), sub.end());
  }
  if (kind() == NodeKind::ExistsRel) out.erase(symbol());
  return out;
}

namespace {

Term rename_term(const Term& t, const std::vector<std::pair<std::string, std::string>>& renaming) {
  if (t.is_variable()) {
    for (const auto& [from, to] : renaming)
      if (t.name == from) return Term::var(to);
    return t;
  }
  Term out = t;
  for (Term& a : out.args) a = rename_term(a, renaming);
  return out;
}

}  // namespace

Formula Formula::rename_free(const std::vector<std::pair<std::string, std::string>>& renaming) const {
  std::vector<std::pair<std::string, std::string>> active;
  auto fv = free_variables();
  for (const auto& p : renaming)
    if (fv.count(p.first)) active.push_back(p);
  if (active.empty()) return *this;

  if (is_literal()) {
    std::vector<Term> ts;
    for (const Term& t : terms()) ts.push_back(rename_term(t, active));
    auto n = std::make_shared<Node>(*node_);
    n->terms = std::move(ts);
    return Formula(std::move(n));
  }
  for (const std::string& b : bound()) {
    for (const auto& p : active)
      if (p.second == b) throw Error(kOrigin, "renaming " + p.first + " -> " + p.second + " would be captured by a binder");
  }
  auto n = std::make_shared<Node>(*node_);
  for (Formula& c : n->children) c = c.rename_free(active);
  return Formula(std::move(n));
}

std::size_t Formula::node_count() const {
  std::size_t n = 1;
  for (const Formula& c : children()) n += c.node_count();
  return n;
}

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const Formula& c : children()) d = std::max(d, c.depth());
  return d + 1;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.kind == b.kind && a.symbol == b.symbol && a.terms == b.terms && a.bound == b.bound && a.arity == b.arity &&
         a.children == b.children;
}

QuantifierArgs QuantifierArgs::of(const Formula& q) {
  if (!q.is_quantifier_node()) throw Error(kOrigin, "not a density quantifier node");
  QuantifierArgs args;
  args.x0 = q.bound()[0];
  args.x1 = q.bound()[1];
  for (std::size_t i = 0; i < 5; ++i) args.psi[i] = q.children()[i];
  return args;
}

QuantifierArgs QuantifierArgs::atomic() {
  QuantifierArgs args;
  auto x0 = Term::var("x0"), x1 = Term::var("x1");
  args.psi = {Formula::atom("R0", {x0, x1}), Formula::atom("R1", {x0, x1}), Formula::atom("R2", {x0, x1}), Formula::atom("R3", {x0}),
              Formula::atom("R4", {x0})};
  return args;
}

// ----------------------------------------------------------------- fragments

std::string_view to_string(FragmentTag tag) {
  switch (tag) {
    case FragmentTag::FO:
      return "fo";
    case FragmentTag::Sigma11:
      return "sigma11";
    case FragmentTag::Ld:
      return "ld";
    case FragmentTag::LdMinus:
      return "ld-";
    case FragmentTag::Ld0:
      return "ld0";
    case FragmentTag::Ld1:
      return "ld1";
  }
  return "?";
}

FragmentTag fragment_from_string(std::string_view text) {
  for (FragmentTag t : {FragmentTag::FO, FragmentTag::Sigma11, FragmentTag::Ld, FragmentTag::LdMinus, FragmentTag::Ld0, FragmentTag::Ld1})
    if (to_string(t) == text) return t;
  throw Error(kOrigin, "unknown mode '" + std::string(text) + "' (expected fo|sigma11|ld|ld-|ld0|ld1)");
}

namespace {

struct Features {
  bool general_not = false;
  bool exists_rel = false;
  bool quantifier = false;
  bool non_fo_quantifier_args = false;
};

void collect(const Formula& f, Features& out) {
  switch (f.kind()) {
    case NodeKind::Not:
      out.general_not = true;
      break;
    case NodeKind::ExistsRel:
      out.exists_rel = true;
      break;
    case NodeKind::QA:
    case NodeKind::QFam:
      out.quantifier = true;
      for (const Formula& c : f.children())
        if (!is_first_order(c)) out.non_fo_quantifier_args = true;
      break;
    default:
      break;
  }
  for (const Formula& c : f.children()) collect(c, out);
}

Features features(const Formula& f) {
  Features out;
  collect(f, out);
  return out;
}

}  // namespace

bool is_first_order(const Formula& f) {
  Features ft = features(f);
  return !ft.general_not && !ft.exists_rel && !ft.quantifier;
}

FragmentTag classify_fragment(const Formula& f) {
  Features ft = features(f);
  if (ft.general_not) return FragmentTag::Ld1;
  if (!ft.quantifier) return ft.exists_rel ? FragmentTag::Sigma11 : FragmentTag::FO;
  if (!ft.non_fo_quantifier_args) return FragmentTag::LdMinus;
  if (!ft.exists_rel) return FragmentTag::Ld0;
  return FragmentTag::Ld;
}

bool fragment_contains(FragmentTag outer, FragmentTag inner) {
  using T = FragmentTag;
  if (outer == inner || outer == T::Ld1) return true;
  switch (outer) {
    case T::FO:
      return false;
    case T::Sigma11:
      return inner == T::FO;
    case T::LdMinus:
      return inner == T::FO || inner == T::Sigma11;
    case T::Ld0:
      return inner == T::FO;
    case T::Ld:
      return inner != T::Ld1;
    default:
      return false;
  }
}

bool admits(FragmentTag mode, const Formula& f) {
  Features ft = features(f);
  switch (mode) {
    case FragmentTag::FO:
      return !ft.general_not && !ft.exists_rel && !ft.quantifier;
    case FragmentTag::Sigma11:
      return !ft.general_not && !ft.quantifier;
    case FragmentTag::Ld:
      return !ft.general_not;
    case FragmentTag::LdMinus:
      return !ft.general_not && !ft.non_fo_quantifier_args;
    case FragmentTag::Ld0:
      return !ft.general_not && !ft.exists_rel;
    case FragmentTag::Ld1:
      return true;
  }
  return false;
}

// ------------------------------------------------------------------- printer

std::string print_term(const Term& t) {
  if (t.is_variable()) return t.name;
  if (t.args.empty()) return t.name;
  std::string s = "(" + t.name;
  for (const Term& a : t.args) s += " " + print_term(a);
  return s + ")";
}

namespace {

void print_into(const Formula& f, std::string& out) {
  auto terms = [&] {
    for (const Term& t : f.terms()) out += " " + print_term(t);
  };
  switch (f.kind()) {
    case NodeKind::Atom:
    case NodeKind::Equal:
      out += "(" + f.symbol();
      terms();
      out += ")";
      return;
    case NodeKind::NegAtom:
    case NodeKind::NegEqual:
      out += "(not-atom " + f.symbol();
      terms();
      out += ")";
      return;
    case NodeKind::And:
    case NodeKind::Or:
      out += f.kind() == NodeKind::And ? "(and" : "(or";
      for (const Formula& c : f.children()) {
        out += " ";
        print_into(c, out);
      }
      out += ")";
      return;
    case NodeKind::Exists:
    case NodeKind::Forall:
      out += f.kind() == NodeKind::Exists ? "(exists " : "(forall ";
      out += f.bound()[0] + " ";
      print_into(f.children()[0], out);
      out += ")";
      return;
    case NodeKind::ExistsRel:
      out += "(exists2 " + f.symbol() + " " + std::to_string(f.arity()) + " ";
      print_into(f.children()[0], out);
      out += ")";
      return;
    case NodeKind::QA:
    case NodeKind::QFam:
      out += f.kind() == NodeKind::QA ? "(QA " : "(Qfam ";
      out += f.symbol() + " (" + f.bound()[0] + " " + f.bound()[1] + ")";
      for (const Formula& c : f.children()) {
        out += " ";
        print_into(c, out);
      }
      out += ")";
      return;
    case NodeKind::Not:
      out += "(not ";
      print_into(f.children()[0], out);
      out += ")";
      return;
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_into(f, out);
  return out;
}

}  // namespace pozlog
