#include <doctest.h>

#include <algorithm>

#include "corpus.hpp"
#include "pozlog/automata.hpp"
#include "pozlog/error.hpp"
#include "pozlog/evaluator.hpp"
#include "pozlog/model_lab.hpp"
#include "pozlog/omega_extract.hpp"

using namespace pozlog;
using namespace pozlog::omega;

namespace {

Lasso L(const char* s) { return parse_lasso(s); }

Formula P(const char* text) { return parse_formula(text); }

// Undirected: both edge directions.
Structure cycle_graph(std::size_t n) {
  std::string text = "vocab E/2\ndomain";
  for (std::size_t i = 0; i < n; ++i) text += " v" + std::to_string(i);
  text += "\nrel E";
  for (std::size_t i = 0; i < n; ++i) {
    const std::string a = "v" + std::to_string(i), b = "v" + std::to_string((i + 1) % n);
    text += " (" + a + " " + b + ") (" + b + " " + a + ")";
  }
  return parse_structure(text + "\n");
}

Structure random_unary_fun(testing::Rng& rng, std::size_t n) {
  std::string text = "vocab E/2 P/1 fun:f/1\ndomain";
  for (std::size_t i = 0; i < n; ++i) text += " e" + std::to_string(i);
  text += "\nrel E";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng() % 3 == 0) text += " (e" + std::to_string(i) + " e" + std::to_string(j) + ")";
  text += "\nrel P";
  for (std::size_t i = 0; i < n; ++i)
    if (rng() % 2) text += " (e" + std::to_string(i) + ")";
  // f maps into {e0, e1, e2}, so that set is closed.
  text += "\nfun f";
  for (std::size_t i = 0; i < n; ++i) text += " (e" + std::to_string(i) + " -> e" + std::to_string(rng() % 3) + ")";
  return parse_structure(text + "\n");
}

// Both sides evaluated directly for every formula and tuple over N.
bool brute_preceq_minus(const Structure& n, const Structure& m, const Fragment& frag) {
  for (const Formula& f : frag.formulas()) {
    auto fv = f.free_variables();
    std::vector<std::string> vars(fv.begin(), fv.end());
    std::vector<Element> idx(vars.size(), 0);
    while (true) {
      Assignment an, am;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        an.vars[vars[i]] = idx[i];
        am.vars[vars[i]] = *m.element(n.name_of(idx[i]));
      }
      if (holds(m, f, am) && !holds(n, f, an)) return false;
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == n.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("canonical model examples") {
  Structure one = canonical_model({{L("(0)")}, {}, true});
  CHECK(equivalent(omega_of(one), singleton(L("(0)"))).equivalent);
  CHECK(check_theta_tl(one));

  Structure none = canonical_model({});
  CHECK(is_empty(omega_of(none)).empty);

  LassoGadgetSpec two{{L("0(1)"), L("1(0)")}, {}, true};
  Structure m = canonical_model(two);
  CHECK(equivalent(omega_of(m), from_lassos(two.lassos)).equivalent);
  CHECK(equivalent(omega_of(m), gadget_language(two)).equivalent);
  CHECK(check_theta_tl(m));

  two.share_root = false;
  Structure sep = canonical_model(two);
  CHECK(equivalent(omega_of(sep), from_lassos(two.lassos)).equivalent);
  CHECK(check_theta_tl(sep));

  LassoGadgetSpec cone{{}, {{1}}, true};
  CHECK(equivalent(omega_of(canonical_model(cone)), starts_with({1})).equivalent);
  LassoGadgetSpec root_cone{{L("(0)")}, {{}}, true};
  Structure rc = canonical_model(root_cone);
  CHECK(equivalent(omega_of(rc), universal()).equivalent);
  CHECK(check_theta_tl(rc));
}

TEST_CASE("random canonical models: Omega, Theta_TL and uniqueness") {
  testing::Rng rng(51);
  for (int i = 0; i < 40; ++i) {
    LassoGadgetSpec spec;
    const std::size_t k = 1 + rng() % 3;
    for (std::size_t j = 0; j < k; ++j) spec.lassos.push_back(testing::random_lasso(rng, 3, 3));
    spec.share_root = i % 2 == 0;
    Structure m = canonical_model(spec);
    CHECK(equivalent(omega_of(m), from_lassos(spec.lassos)).equivalent);
    CHECK(check_theta_tl(m));
    for (const auto& [a, s] : omega_per_anchor(m)) {
      if (is_empty(s).empty) continue;
      // At most one branch per anchor: equal to the singleton of its witness.
      Lasso w = *is_empty(s).witness;
      CHECK(equivalent(s, singleton(w)).equivalent);
    }
  }
}

TEST_CASE("full model breaks uniqueness") {
  Structure f = full_model();
  CHECK(f.size() == 1);
  CHECK(check_theta_tl(f));
  BranchSet s = omega_at(f, 0);
  CHECK(equivalent(s, universal()).equivalent);
  CHECK(membership(L("(0)"), s));
  CHECK(membership(L("(1)"), s));
}

TEST_CASE("family_gen") {
  BranchFamily f = family_gen(2, {{0}, {1}});
  REQUIRE(f.chain.size() == 2);
  CHECK(is_dense(f.chain[0]).dense);
  CHECK(membership(L("(1)"), f.chain[1]));
  CHECK(!membership(L("(1)"), f.chain[0]));
  CHECK(validate_family(f).passed());
  CHECK_THROWS(family_gen(2, {{0}, {0}}));
  CHECK_THROWS(family_gen(2, {{0}, {0, 0}}));
  CHECK_THROWS(family_gen(1, {{0}}));

  testing::Rng rng(52);
  const std::vector<Word> pool = {{0}, {1}, {0, 1}, {0, 0, 1}, {0, 1, 1}};
  for (int i = 0; i < 10; ++i) {
    std::vector<Word> pats = pool;
    std::shuffle(pats.begin(), pats.end(), rng);
    pats.resize(2 + rng() % 3);
    CHECK(validate_family(family_gen(pats.size(), pats)).passed());
  }
}

TEST_CASE("two-family scenario") {
  Scenario21 sc = theorem21_scenario({{0}}, {{1}, {0, 0, 1}}, {{0, 1}, {0, 1, 1}});
  std::size_t equal = 0;
  for (const auto& c : sc.cross)
    if (c.equivalent) {
      ++equal;
      CHECK(c.left == "U");
      CHECK(c.right == "U");
    }
  CHECK(equal == 1);
  CHECK(holds(sc.union_model, sc.phi, {}, &sc.registry));
  EvalOptions opt;
  opt.trace = true;
  EvalResult r = evaluate(sc.a0_model, sc.phi, {}, opt, &sc.registry);
  CHECK(!r.truth);
  CHECK(render_trace(*r.trace).find("Qfam G") != std::string::npos);
  CHECK_THROWS(theorem21_scenario({{0}}, {{1}}, {{1}}));
}

TEST_CASE("preceq examples") {
  Structure m = parse_structure("vocab P/1\ndomain a b\nrel P (b)\n");
  Structure n = m.induced(std::array<Element, 1>{0});
  Fragment frag = Fragment::closure({P("(exists x (P x))")});
  CHECK(frag.closed());
  auto r = preceq_minus(n, m, frag);
  CHECK(!r.holds);
  REQUIRE(r.formula);
  CHECK(print_formula(*r.formula) == "(exists x (P x))");
  CHECK(r.tuple.empty());
  CHECK(preceq_plus(n, m, frag).holds);
  CHECK(preceq_minus(m, m, frag).holds);

  Structure other = parse_structure("vocab P/1\ndomain a c\nrel P (c)\n");
  CHECK_THROWS(preceq_minus(other, m, frag));
  CHECK(!Fragment({P("(exists x (P x))")}).closed());
}

TEST_CASE("preceq matches double evaluation") {
  testing::Rng rng(53);
  const std::vector<Formula> base = {P("(E x y)"), P("(P x)"), P("(exists y (E x y))"), P("(exists x (exists y (E x y)))"),
                                     P("(exists y (and (E x y) (P y)))"), P("(exists x (P x))"), P("(forall y (E x y))")};
  Fragment frag = Fragment::closure(base);
  for (int i = 0; i < 30; ++i) {
    Structure m = random_unary_fun(rng, 6);
    Structure n = m.induced(std::array<Element, 3>{0, 1, 2});
    CHECK(preceq_minus(n, m, frag).holds == brute_preceq_minus(n, m, frag));
  }
}

TEST_CASE("ls_search examples") {
  Structure c = cycle_graph(5);
  auto empty = ls_search(c, Fragment{}, 2);
  CHECK(empty.found);
  CHECK(empty.elements.size() == 1);

  Fragment edge = Fragment::closure({P("(exists x (exists y (E x y)))")});
  auto r = ls_search(c, edge, 2);
  REQUIRE(r.found);
  REQUIRE(r.substructure);
  CHECK(preceq_minus(*r.substructure, c, edge).holds);
  CHECK(r.elements == std::vector<Element>{0, 1});

  Structure three = parse_structure("vocab E/2\ndomain a b c\nrel E\n");
  Fragment distinct = Fragment::closure({P("(exists x (exists y (exists z (and (not (= x y)) (not (= y z)) (not (= x z))))))")});
  auto nf = ls_search(three, distinct, 2);
  CHECK(!nf.found);
  CHECK(nf.subsets_checked == 6);
}

TEST_CASE("ls_search results re-verify and respect functions") {
  testing::Rng rng(54);
  const std::vector<Formula> base = {P("(exists y (E x y))"), P("(exists x (P x))"), P("(exists x (exists y (and (E x y) (P y))))")};
  Fragment frag = Fragment::closure(base);
  for (int i = 0; i < 15; ++i) {
    Structure m = random_unary_fun(rng, 6);
    auto r = ls_search(m, frag, 3);
    if (r.found) {
      REQUIRE(r.substructure);
      CHECK(r.elements.size() <= 3);
      CHECK(m.closed_under_functions(r.elements));
      CHECK(brute_preceq_minus(*r.substructure, m, frag));
    } else {
      // Exhaustion: the closed set {e0,e1,e2} must fail too.
      Structure n = m.induced(std::array<Element, 3>{0, 1, 2});
      CHECK(!brute_preceq_minus(n, m, frag));
    }
  }
}

TEST_CASE("ultrafilters and ultraproducts") {
  Ultrafilter u = Ultrafilter::principal(3, 1);
  CHECK(u.contains(0b010));
  CHECK(u.contains(0b111));
  CHECK(!u.contains(0b101));
  CHECK(Ultrafilter::from_family(3, {0b010, 0b011, 0b110, 0b111}).generator() == 1);
  CHECK_THROWS(Ultrafilter::from_family(3, {0b011, 0b111}));
  CHECK_THROWS(Ultrafilter::principal(3, 3));

  testing::Rng rng(55);
  UltraSetup setup;
  for (int i = 0; i < 3; ++i) setup.factors.push_back(testing::random_tau_d(rng, 2, 0.5));
  setup.filter = Ultrafilter::principal(3, 1);
  Ultraproduct up = ultraproduct(setup);
  CHECK(up.product.size() == setup.factors[1].size());
  CHECK(is_isomorphism(up.product, setup.factors[1], up.iso));

  UltraSetup single{{setup.factors[0]}, Ultrafilter::principal(1, 0)};
  Ultraproduct id = ultraproduct(single);
  CHECK(is_isomorphism(id.product, setup.factors[0], id.iso));

  UltraSetup mixed{{setup.factors[0], cycle_graph(2)}, Ultrafilter::principal(2, 0)};
  CHECK_THROWS(ultraproduct(mixed));
}

TEST_CASE("los_check on first-order and QA formulas") {
  testing::Rng rng(56);
  Registry reg;
  UltraSetup setup;
  setup.factors = {testing::random_tau_d(rng, 2, 0.5), canonical_model({{L("0(1)")}, {}, true}), testing::random_tau_d(rng, 2, 0.5)};
  setup.filter = Ultrafilter::principal(3, 1);
  std::vector<Formula> fs = {P("(R3 x)"), P("(exists y (R2 x y))"), P("(forall x (R4 x))"), build_psi_A("empty")};
  LosReport rep = los_check(setup, fs, 7, &reg);
  CHECK(rep.formulas == fs.size());
  CHECK(rep.isomorphic);
  CHECK(rep.violations.empty());
  CHECK(rep.passed());
  CHECK(rep.checks > 0);
}
