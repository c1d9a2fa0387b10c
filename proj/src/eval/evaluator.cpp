#include "pozlog/evaluator.hpp"

#include <unordered_map>

#include "pozlog/error.hpp"
#include "pozlog/omega_extract.hpp"
#include "pozlog/registry.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "evaluator";

std::string shorten(std::string s, std::size_t limit = 100) {
  if (s.size() > limit) s = s.substr(0, limit - 3) + "...";
  return s;
}

// A run of same-kind first-order quantifiers over a body that is split into
// parts (conjuncts under exists, disjuncts under forall). Each part is
// checked as soon as the variables it mentions are bound.
struct ChainPlan {
  std::vector<std::string> vars;
  std::vector<Formula> parts;
  std::vector<std::size_t> levels;
};

class Engine {
 public:
  Engine(const Structure& m, const Registry* registry, const EvalOptions& options, EvalResult& result, const void* root)
      : m_(m), registry_(registry), options_(options), result_(result), root_(root) {}

  bool run(const Formula& f, const Assignment& asg, TraceNode* tr, std::size_t depth) {
    auto saved_vars = std::move(vars_);
    auto saved_rels = std::move(rels_);
    vars_.assign(asg.vars.begin(), asg.vars.end());
    rels_.assign(asg.relations.begin(), asg.relations.end());
    struct Restore {
      Engine& e;
      decltype(saved_vars)& v;
      decltype(saved_rels)& r;
      ~Restore() {
        e.vars_ = std::move(v);
        e.rels_ = std::move(r);
      }
    } restore{*this, saved_vars, saved_rels};
    return eval(f, tr, depth);
  }

  bool qa_core(const std::string& set, const QuantifierArgs& args, const Assignment& params, TraceNode* tr, std::size_t depth,
               bool record);
  bool qfam_core(const std::string& name, const QuantifierArgs& args, const Assignment& params, TraceNode* tr,
                 std::size_t depth, bool record);

 private:
  bool eval(const Formula& f, TraceNode* tr, std::size_t depth);
  bool chain(const Formula& f, TraceNode* tr, std::size_t depth);
  bool exists_rel(const Formula& f, TraceNode* tr, std::size_t depth);

  bool search_exists(const ChainPlan& p, std::size_t i, std::size_t depth, std::vector<Element>& chosen);
  bool search_forall(const ChainPlan& p, std::size_t i, std::size_t depth, std::vector<Element>& chosen);

  const ChainPlan& plan(const Formula& f);
  Element term(const Term& t) const;
  bool atom(const Formula& f) const;
  std::string literal_label(const Formula& f) const;
  Assignment snapshot() const;
  Structure project(const QuantifierArgs& args, const Assignment& params, std::size_t depth);
  const Registry& registry() const {
    if (!registry_) throw Error(kOrigin, "density quantifiers need a registry of branch sets");
    return *registry_;
  }

  const Structure& m_;
  const Registry* registry_;
  const EvalOptions& options_;
  EvalResult& result_;
  const void* root_;
  std::vector<std::pair<std::string, Element>> vars_;
  std::vector<std::pair<std::string, Relation>> rels_;
  std::size_t candidates_ = 0;
  std::unordered_map<const void*, ChainPlan> plans_;
};

Element Engine::term(const Term& t) const {
  if (t.is_variable()) {
    for (auto it = vars_.rbegin(); it != vars_.rend(); ++it)
      if (it->first == t.name) return it->second;
    throw Error(kOrigin, "unbound variable '" + t.name + "'");
  }
  std::vector<Element> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(term(a));
  return m_.apply(t.name, args);
}

bool Engine::atom(const Formula& f) const {
  Tuple tuple;
  tuple.reserve(f.terms().size());
  for (const Term& t : f.terms()) tuple.push_back(term(t));
  for (auto it = rels_.rbegin(); it != rels_.rend(); ++it)
    if (it->first == f.symbol()) {
      if (it->second.arity() != tuple.size()) throw Error(kOrigin, "arity mismatch for relation variable '" + f.symbol() + "'");
      return it->second.contains(tuple);
    }
  const Relation* r = m_.find_relation(f.symbol());
  if (!r) throw Error(kOrigin, "unknown relation '" + f.symbol() + "'");
  if (r->arity() != tuple.size()) throw Error(kOrigin, "arity mismatch for relation '" + f.symbol() + "'");
  return r->contains(tuple);
}

std::string Engine::literal_label(const Formula& f) const {
  std::string s = f.kind() == NodeKind::NegAtom || f.kind() == NodeKind::NegEqual ? "not " : "";
  s += f.symbol() + "(";
  for (std::size_t i = 0; i < f.terms().size(); ++i) s += (i ? "," : "") + m_.name_of(term(f.terms()[i]));
  return s + ")";
}

Assignment Engine::snapshot() const {
  Assignment a;
  for (const auto& [k, v] : vars_) a.vars[k] = v;
  for (const auto& [k, v] : rels_) a.relations.insert_or_assign(k, v);
  return a;
}

const ChainPlan& Engine::plan(const Formula& f) {
  auto it = plans_.find(f.id());
  if (it != plans_.end()) return it->second;
  ChainPlan p;
  const NodeKind kind = f.kind();
  Formula g = f;
  while (g.kind() == kind) {
    p.vars.push_back(g.bound()[0]);
    g = g.children()[0];
  }
  const NodeKind join = kind == NodeKind::Exists ? NodeKind::And : NodeKind::Or;
  if (g.kind() == join)
    p.parts = g.children();
  else
    p.parts = {g};
  for (const Formula& part : p.parts) {
    auto fv = part.free_variables();
    std::size_t level = 0;
    for (std::size_t i = 0; i < p.vars.size(); ++i)
      if (fv.count(p.vars[i])) level = i + 1;
    p.levels.push_back(level);
  }
  return plans_.emplace(f.id(), std::move(p)).first->second;
}

bool Engine::search_exists(const ChainPlan& p, std::size_t i, std::size_t depth, std::vector<Element>& chosen) {
  if (i == p.vars.size()) return true;
  for (Element e = 0; e < m_.size(); ++e) {
    vars_.emplace_back(p.vars[i], e);
    bool ok = true;
    for (std::size_t j = 0; j < p.parts.size() && ok; ++j)
      if (p.levels[j] == i + 1) ok = eval(p.parts[j], nullptr, depth + 1);
    ok = ok && search_exists(p, i + 1, depth, chosen);
    vars_.pop_back();
    if (ok) {
      chosen[i] = e;
      return true;
    }
  }
  return false;
}

bool Engine::search_forall(const ChainPlan& p, std::size_t i, std::size_t depth, std::vector<Element>& chosen) {
  if (i == p.vars.size()) return false;
  for (Element e = 0; e < m_.size(); ++e) {
    vars_.emplace_back(p.vars[i], e);
    bool sat = false;
    for (std::size_t j = 0; j < p.parts.size() && !sat; ++j)
      if (p.levels[j] == i + 1) sat = eval(p.parts[j], nullptr, depth + 1);
    bool ok = sat || search_forall(p, i + 1, depth, chosen);
    vars_.pop_back();
    if (!ok) {
      chosen[i] = e;
      return false;
    }
  }
  return true;
}

bool Engine::chain(const Formula& f, TraceNode* tr, std::size_t depth) {
  const ChainPlan& p = plan(f);
  const bool existential = f.kind() == NodeKind::Exists;
  std::vector<Element> chosen(p.vars.size(), 0);
  bool value;
  bool decided_early = false;
  // Parts that mention none of the chain variables.
  for (std::size_t j = 0; j < p.parts.size(); ++j) {
    if (p.levels[j] != 0) continue;
    bool v = eval(p.parts[j], nullptr, depth + 1);
    if (v != existential) {
      decided_early = true;
      break;
    }
  }
  if (decided_early)
    value = !existential;
  else
    value = existential ? search_exists(p, 0, depth, chosen) : search_forall(p, 0, depth, chosen);

  if (tr) {
    std::string vars;
    for (const auto& v : p.vars) vars += " " + v;
    tr->value = value;
    tr->label = (existential ? "exists" : "forall") + vars;
    // A witness (exists true) or counterexample (forall false) is shown with
    // its parts; other outcomes are summarized.
    if (!decided_early && value == existential) {
      std::string binding;
      for (std::size_t i = 0; i < p.vars.size(); ++i) {
        binding += (i ? ", " : "") + p.vars[i] + "=" + m_.name_of(chosen[i]);
        vars_.emplace_back(p.vars[i], chosen[i]);
      }
      tr->label += existential ? ": witness " + binding : ": fails at " + binding;
      for (const Formula& part : p.parts) {
        TraceNode child;
        eval(part, &child, depth + 1);
        tr->children.push_back(std::move(child));
      }
      vars_.resize(vars_.size() - p.vars.size());
    } else if (decided_early) {
      tr->label += ": decided by a part without these variables";
    } else {
      tr->label += existential ? ": no witness" : ": holds for all";
    }
  }
  return value;
}

bool Engine::exists_rel(const Formula& f, TraceNode* tr, std::size_t depth) {
  const std::size_t k = f.arity();
  const std::size_t n = m_.size();
  Relation blank(k, n);
  const std::size_t table = blank.table_size();
  const std::size_t slot = rels_.size();
  rels_.emplace_back(f.symbol(), blank);
  const Formula& body = f.children()[0];
  std::optional<std::vector<std::size_t>> found;
  std::size_t tried = 0;
  // Tuple sets by increasing size, lexicographic within a size.
  for (std::size_t c = 0; c <= table && !found; ++c) {
    std::vector<std::size_t> comb(c);
    for (std::size_t i = 0; i < c; ++i) comb[i] = i;
    while (true) {
      if (++candidates_ > options_.budget.max_relation_candidates)
        throw BudgetExceeded(kOrigin, "second-order search exceeded " + std::to_string(options_.budget.max_relation_candidates) +
                                          " candidate relations");
      ++tried;
      Relation& r = rels_[slot].second;
      for (std::size_t idx : comb) r.set_bit(idx, true);
      bool ok = eval(body, nullptr, depth + 1);
      if (ok) {
        found = comb;
        break;
      }
      for (std::size_t idx : comb) rels_[slot].second.set_bit(idx, false);
      std::size_t i = c;
      while (i > 0 && comb[i - 1] == table - c + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < c; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  if (found) {
    auto& list = result_.relation_witnesses[f.symbol()];
    list = rels_[slot].second.tuples();
  }
  if (tr) {
    tr->value = found.has_value();
    tr->label = "exists2 " + f.symbol() + "/" + std::to_string(k);
    if (found) {
      std::string tuples;
      for (const Tuple& t : rels_[slot].second.tuples()) {
        tuples += tuples.empty() ? "(" : " (";
        for (std::size_t i = 0; i < t.size(); ++i) tuples += (i ? " " : "") + m_.name_of(t[i]);
        tuples += ")";
      }
      tr->label += ": " + f.symbol() + " = {" + tuples + "}";
      TraceNode child;
      eval(body, &child, depth + 1);
      tr->children.push_back(std::move(child));
    } else {
      tr->label += ": no relation among " + std::to_string(tried) + " candidates";
    }
  }
  rels_.pop_back();
  return found.has_value();
}

bool Engine::eval(const Formula& f, TraceNode* tr, std::size_t depth) {
  if (depth > options_.budget.max_depth)
    throw BudgetExceeded(kOrigin, "evaluation depth exceeded " + std::to_string(options_.budget.max_depth));
  ++result_.nodes_visited;
  ++result_.kind_visits[static_cast<std::size_t>(f.kind())];
  switch (f.kind()) {
    case NodeKind::Atom:
    case NodeKind::NegAtom:
    case NodeKind::Equal:
    case NodeKind::NegEqual: {
      bool v;
      if (f.kind() == NodeKind::Atom || f.kind() == NodeKind::NegAtom) {
        v = atom(f);
      } else {
        v = term(f.terms()[0]) == term(f.terms()[1]);
      }
      if (f.kind() == NodeKind::NegAtom || f.kind() == NodeKind::NegEqual) v = !v;
      if (tr) {
        tr->value = v;
        tr->label = literal_label(f);
      }
      return v;
    }
    case NodeKind::And:
    case NodeKind::Or: {
      const bool is_and = f.kind() == NodeKind::And;
      if (!tr) {
        for (const Formula& c : f.children())
          if (eval(c, nullptr, depth + 1) != is_and) return !is_and;
        return is_and;
      }
      // Traced: every child is evaluated so all failing conjuncts (resp. the
      // first true disjunct) can be named.
      bool v = is_and;
      std::vector<TraceNode> all;
      for (const Formula& c : f.children()) {
        TraceNode child;
        bool cv = eval(c, &child, depth + 1);
        if (!is_and && cv) {
          v = true;
          tr->children = {std::move(child)};
          break;
        }
        if (is_and && !cv) v = false;
        all.push_back(std::move(child));
      }
      if (is_and && !v) {
        for (auto& c : all)
          if (!c.value) tr->children.push_back(std::move(c));
      } else if (is_and || !v) {
        tr->children = std::move(all);
      }
      tr->value = v;
      tr->label = f.children().empty() ? (is_and ? "true" : "false") : shorten(print_formula(f));
      return v;
    }
    case NodeKind::Exists:
    case NodeKind::Forall:
      return chain(f, tr, depth);
    case NodeKind::ExistsRel:
      return exists_rel(f, tr, depth);
    case NodeKind::QA:
      return qa_core(f.symbol(), QuantifierArgs::of(f), snapshot(), tr, depth, f.id() == root_);
    case NodeKind::QFam:
      return qfam_core(f.symbol(), QuantifierArgs::of(f), snapshot(), tr, depth, f.id() == root_);
    case NodeKind::Not: {
      TraceNode child;
      bool v = !eval(f.children()[0], tr ? &child : nullptr, depth + 1);
      if (tr) {
        tr->value = v;
        tr->label = "not";
        tr->children.push_back(std::move(child));
      }
      return v;
    }
  }
  throw Error(kOrigin, "unknown formula node");
}

Structure Engine::project(const QuantifierArgs& args, const Assignment& params, std::size_t depth) {
  return project_structure(m_, args, params, [&](const Formula& g, const Assignment& a) { return run(g, a, nullptr, depth + 1); });
}

bool Engine::qa_core(const std::string& set, const QuantifierArgs& args, const Assignment& params, TraceNode* tr,
                     std::size_t depth, bool record) {
  const BranchSet& outside = registry().complement_of(set);
  Structure projected = project(args, params, depth);
  BranchSet omega = omega_of(projected);
  BranchSet diff = omega::intersect(omega, outside);
  auto verdict = omega::is_dense(diff, options_.budget.max_subset_states);

  std::vector<DensityWitness> witnesses;
  if (verdict.dense && (tr || (record && options_.witnesses))) {
    auto anchors = omega_per_anchor(projected);
    for (const Word& sigma : words_up_to(3)) {
      auto rest = omega::is_empty(omega::residual(diff, sigma));
      if (rest.empty) throw Error(kOrigin, "internal: dense set has an empty residual");
      Word prefix = sigma;
      prefix.insert(prefix.end(), rest.witness->prefix.begin(), rest.witness->prefix.end());
      Lasso eta = Lasso(prefix, rest.witness->period).canonical();
      if (!eta.extends(sigma) || !omega::membership(eta, diff))
        throw Error(kOrigin, "internal: density witness failed re-verification");
      std::string anchor;
      for (const auto& [a, automaton] : anchors)
        if (omega::membership(eta, omega::intersect(automaton, outside))) {
          anchor = m_.name_of(a);
          break;
        }
      if (anchor.empty()) throw Error(kOrigin, "internal: density witness has no anchor");
      witnesses.push_back({sigma, eta, anchor});
    }
  }
  if (record) {
    if (!verdict.dense) result_.not_dense_witness = verdict.witness;
    result_.density_witnesses = witnesses;
  }
  if (tr) {
    tr->value = verdict.dense;
    tr->label = "QA " + set + ": represented branches outside " + set +
                (verdict.dense ? " are dense" : " are not dense, no extension of sigma=" + word_label(verdict.witness));
    for (const auto& w : witnesses)
      tr->children.push_back({"sigma=" + word_label(w.sigma) + ": eta=" + to_string(w.eta) + " at " + w.anchor, true, {}});
  }
  return verdict.dense;
}

bool Engine::qfam_core(const std::string& name, const QuantifierArgs& args, const Assignment& params, TraceNode* tr,
                       std::size_t depth, bool record) {
  const BranchFamily& fam = registry().family(name);
  Structure projected = project(args, params, depth);
  auto failures = theta_tl_failures(projected);
  if (!failures.empty()) {
    if (tr) {
      std::string list;
      for (std::size_t i : failures) list += (list.empty() ? "" : ", ") + std::to_string(i + 1);
      tr->value = false;
      tr->label = "Qfam " + name + ": projected structure violates Theta_TL (conjunct " + list + ")";
    }
    return false;
  }
  const std::size_t cap = options_.budget.max_subset_states;
  BranchSet omega = omega_of(projected);
  BranchSet meet = omega::intersect(omega, fam.union_set);
  std::optional<std::size_t> matched;
  std::vector<TraceNode> notes;
  for (std::size_t j = fam.member_count(); j-- > 0;) {
    const BranchSet& member = fam.member(j);
    std::string tag = "member " + std::to_string(j) + (j == fam.chain.size() ? " (union)" : "");
    auto a = omega::includes(meet, member, cap);
    if (!a.holds) {
      notes.push_back({tag + ": " + to_string(*a.counterexample) + " is represented and in the union but not in the member", false, {}});
      continue;
    }
    auto b = omega::includes(member, omega, cap);
    if (!b.holds) {
      notes.push_back({tag + ": " + to_string(*b.counterexample) + " is in the member but not represented", false, {}});
      continue;
    }
    auto c = omega::includes(member, fam.union_set, cap);
    if (!c.holds) {
      notes.push_back({tag + ": " + to_string(*c.counterexample) + " is in the member but not in the union", false, {}});
      continue;
    }
    notes.push_back({tag + ": matches", true, {}});
    matched = j;
    break;
  }
  if (record) result_.matched_member = matched;
  if (tr) {
    tr->value = matched.has_value();
    tr->label = "Qfam " + name + ": represented branches within the union " +
                (matched ? "equal member " + std::to_string(*matched) : "match no member");
    tr->children = std::move(notes);
  }
  return matched.has_value();
}

void render(const TraceNode& node, std::size_t indent, std::string& out) {
  out += std::string(indent * 2, ' ') + (node.value ? "T " : "F ") + node.label + "\n";
  for (const auto& c : node.children) render(c, indent + 1, out);
}

void check_assignment(const Structure& m, const Formula& f, const Assignment& asg) {
  for (const auto& [v, e] : asg.vars)
    if (e >= m.size()) throw Error(kOrigin, "variable '" + v + "' is assigned an element outside the domain");
  for (const auto& v : f.free_variables())
    if (!asg.vars.count(v)) throw Error(kOrigin, "free variable '" + v + "' has no value");
}

}  // namespace

std::string render_trace(const TraceNode& node) {
  std::string out;
  render(node, 0, out);
  return out;
}

EvalResult evaluate(const Structure& m, const Formula& f, const Assignment& asg, const EvalOptions& options,
                    const Registry* registry) {
  if (!admits(options.mode, f))
    throw ModeViolation(kOrigin, "formula in fragment " + std::string(to_string(classify_fragment(f))) + " is not admitted in mode " +
                                     std::string(to_string(options.mode)));
  check_assignment(m, f, asg);
  EvalResult result;
  Engine engine(m, registry, options, result, f.id());
  TraceNode root;
  result.truth = engine.run(f, asg, options.trace ? &root : nullptr, 0);
  if (options.trace) result.trace = std::move(root);
  return result;
}

bool holds(const Structure& m, const Formula& f, const Assignment& asg, const Registry* registry) {
  return evaluate(m, f, asg, EvalOptions{}, registry).truth;
}

EvalResult eval_QA(const Structure& m, const Registry& registry, const std::string& set, const QuantifierArgs& args,
                   const Assignment& params, const EvalOptions& options) {
  EvalResult result;
  Engine engine(m, &registry, options, result, nullptr);
  TraceNode root;
  result.truth = engine.qa_core(set, args, params, options.trace ? &root : nullptr, 0, true);
  if (options.trace) result.trace = std::move(root);
  return result;
}

EvalResult eval_Qfam(const Structure& m, const Registry& registry, const std::string& family, const QuantifierArgs& args,
                     const Assignment& params, const EvalOptions& options) {
  EvalResult result;
  Engine engine(m, &registry, options, result, nullptr);
  TraceNode root;
  result.truth = engine.qfam_core(family, args, params, options.trace ? &root : nullptr, 0, true);
  if (options.trace) result.trace = std::move(root);
  return result;
}

std::vector<std::size_t> theta_tl_failures(const Structure& m) {
  if (!m.vocabulary().contains_tau_d()) throw Error(kOrigin, "Theta_TL needs the vocabulary R0/2 R1/2 R2/2 R3/1 R4/1");
  static const Formula theta = build_theta_tl();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < theta.children().size(); ++i)
    if (!holds(m, theta.children()[i])) out.push_back(i);
  return out;
}

bool check_theta_tl(const Structure& m) { return theta_tl_failures(m).empty(); }

}  // namespace pozlog
