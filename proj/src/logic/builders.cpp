#include <algorithm>

#include "pozlog/error.hpp"
#include "pozlog/formula.hpp"
#include "pozlog/registry.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "logic-core";

Term v(const std::string& name) { return Term::var(name); }
std::string y(std::size_t i) { return "y" + std::to_string(i); }

// Rebinds a quantifier argument formula to new variables for x0 (and x1).
Formula instantiate(const QuantifierArgs& args, std::size_t which, const std::string& first, const std::string& second) {
  std::vector<std::pair<std::string, std::string>> renaming{{args.x0, first}};
  if (which < 3) renaming.emplace_back(args.x1, second);
  return args.psi[which].rename_free(renaming);
}

}  // namespace

Formula build_psi_eta(const Word& eta) {
  const std::size_t n = eta.size();
  std::vector<Formula> inner;
  inner.push_back(Formula::atom("R3", {v(y(0))}));
  for (std::size_t i = 0; i <= n; ++i) inner.push_back(Formula::atom("R4", {v(y(i))}));
  for (std::size_t i = 0; i < n; ++i) inner.push_back(Formula::atom(eta[i] ? "R1" : "R0", {v(y(i)), v(y(i + 1))}));
  for (std::size_t i = 0; i <= n; ++i) inner.push_back(Formula::atom("R2", {v(y(i)), v("x")}));
  Formula body = Formula::conj(std::move(inner));
  for (std::size_t i = n + 1; i-- > 0;) body = Formula::exists(y(i), std::move(body));
  return Formula::conj({Formula::atom("R4", {v("x")}), std::move(body)});
}

Formula build_gamma(std::size_t n, std::size_t k, const QuantifierArgs& psi, const Word& eta) {
  if (eta.size() != n) throw Error(kOrigin, "build_gamma: word length " + std::to_string(eta.size()) + " != n = " + std::to_string(n));
  std::set<std::string> params;
  for (std::size_t i = 0; i < 5; ++i) {
    auto fv = psi.psi[i].free_variables();
    if (i >= 3 && fv.count(psi.x1)) throw Error(kOrigin, "build_gamma: psi" + std::to_string(i) + " must not use " + psi.x1);
    fv.erase(psi.x0);
    fv.erase(psi.x1);
    params.insert(fv.begin(), fv.end());
  }
  if (params.size() != k)
    throw Error(kOrigin, "build_gamma: expected " + std::to_string(k) + " parameters, found " + std::to_string(params.size()));
  for (std::size_t i = 0; i <= n; ++i)
    if (params.count(y(i))) throw Error(kOrigin, "build_gamma: parameter name clashes with chain variable " + y(i));
  if (params.count("x")) throw Error(kOrigin, "build_gamma: parameter name clashes with chain variable x");

  std::vector<Formula> parts;
  for (std::size_t i = 0; i <= n; ++i) parts.push_back(instantiate(psi, 4, y(i), ""));
  parts.push_back(instantiate(psi, 4, "x", ""));
  parts.push_back(instantiate(psi, 3, y(0), ""));
  for (std::size_t i = 0; i < n; ++i) parts.push_back(instantiate(psi, eta[i], y(i), y(i + 1)));
  for (std::size_t i = 0; i <= n; ++i) parts.push_back(instantiate(psi, 2, y(i), "x"));
  return Formula::conj(std::move(parts));
}

Formula build_psi_A(const std::string& set, const Registry* registry) {
  if (registry && !registry->has_set(set)) throw Error(kOrigin, "unknown branch set '" + set + "'");
  QuantifierArgs a = QuantifierArgs::atomic();
  return Formula::qa(set, a.x0, a.x1, a.psi);
}

Formula build_psi_fam(const std::string& family, const Registry* registry) {
  if (registry && !registry->has_family(family)) throw Error(kOrigin, "unknown branch family '" + family + "'");
  QuantifierArgs a = QuantifierArgs::atomic();
  return Formula::qfam(family, a.x0, a.x1, a.psi);
}

Formula build_theta_tl() {
  auto R = [](const char* r, std::vector<std::string> args) {
    std::vector<Term> ts;
    for (auto& a : args) ts.push_back(v(a));
    return Formula::atom(r, std::move(ts));
  };
  auto nR = [](const char* r, std::vector<std::string> args) {
    std::vector<Term> ts;
    for (auto& a : args) ts.push_back(v(a));
    return Formula::neg_atom(r, std::move(ts));
  };
  using F = Formula;
  std::vector<Formula> conjuncts;
  // A root below every R4 element.
  conjuncts.push_back(F::exists("x", F::conj({R("R3", {"x"}), F::forall("y", F::disj({nR("R4", {"y"}), R("R2", {"x", "y"})}))})));
  // R0 and R1 are contained in R2.
  conjuncts.push_back(F::forall("x", F::forall("y", F::disj({nR("R0", {"x", "y"}), R("R2", {"x", "y"})}))));
  conjuncts.push_back(F::forall("x", F::forall("y", F::disj({nR("R1", {"x", "y"}), R("R2", {"x", "y"})}))));
  // R2 lives on R4.
  conjuncts.push_back(F::forall("x", F::forall("y", F::disj({nR("R2", {"x", "y"}), F::conj({R("R4", {"x"}), R("R4", {"y"})})}))));
  // Reflexive on R4.
  conjuncts.push_back(F::forall("x", F::disj({nR("R4", {"x"}), R("R2", {"x", "x"})})));
  // Transitive.
  conjuncts.push_back(F::forall(
      "x", F::forall("y", F::forall("z", F::disj({nR("R2", {"x", "y"}), nR("R2", {"y", "z"}), R("R2", {"x", "z"})})))));
  // Predecessors of a point are comparable.
  conjuncts.push_back(F::forall(
      "x", F::forall("y", F::forall("z", F::disj({nR("R2", {"y", "x"}), nR("R2", {"z", "x"}), R("R2", {"y", "z"}), R("R2", {"z", "y"})})))));
  return F::conj(std::move(conjuncts));
}

}  // namespace pozlog
