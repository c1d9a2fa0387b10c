#include <doctest.h>

#include "corpus.hpp"
#include "pozlog/automata.hpp"
#include "pozlog/error.hpp"
#include "pozlog/evaluator.hpp"
#include "pozlog/model_lab.hpp"
#include "pozlog/omega_extract.hpp"

using namespace pozlog;
using namespace pozlog::omega;

namespace {

bool u(const Structure& m, const char* r, Element a) { return m.holds(r, std::array<Element, 1>{a}); }
bool b(const Structure& m, const char* r, Element x, Element y) { return m.holds(r, std::array<Element, 2>{x, y}); }

// Chain search straight on the relations: the set of possible last chain
// elements after each letter.
bool represented(const Structure& m, Element a, const Word& w) {
  if (!u(m, "R4", a)) return false;
  auto node = [&](Element y) { return u(m, "R4", y) && b(m, "R2", y, a); };
  std::vector<bool> cur(m.size());
  for (Element y = 0; y < m.size(); ++y) cur[y] = node(y) && u(m, "R3", y);
  for (std::uint8_t bit : w) {
    std::vector<bool> next(m.size(), false);
    const char* r = bit ? "R1" : "R0";
    for (Element y = 0; y < m.size(); ++y)
      if (cur[y])
        for (Element z = 0; z < m.size(); ++z)
          if (node(z) && b(m, r, y, z)) next[z] = true;
    cur = std::move(next);
  }
  for (bool c : cur)
    if (c) return true;
  return false;
}

Lasso flip(const Lasso& l) {
  Word p = l.prefix, q = l.period;
  for (auto& x : p) x ^= 1;
  for (auto& x : q) x ^= 1;
  return {p, q};
}

Lasso L(const char* s) { return parse_lasso(s); }

}  // namespace

TEST_CASE("repr graph and omega on a canonical model") {
  Structure m = canonical_model({{L("0(1)")}, {}, true});
  std::size_t valid = 0;
  for (Element a = 0; a < m.size(); ++a) {
    ReprGraph g = repr_graph(m, a);
    if (!g.anchor_valid) continue;
    ++valid;
    for (Element n : g.nodes) CHECK(b(m, "R2", n, a));
  }
  CHECK(valid > 0);
  BranchSet om = omega_of(m);
  CHECK(membership(L("0(1)"), om));
  CHECK(!membership(L("(0)"), om));
  CHECK(!membership(L("1(1)"), om));
  for (const auto& [a, s] : omega_per_anchor(m))
    for (State q = 0; q < s.size(); ++q) CHECK(s.label(q).rfind(m.name_of(a) + ":", 0) == 0);
  CHECK(equivalent(omega_of(full_model()), universal()).equivalent);
  CHECK_THROWS(repr_graph(m, static_cast<Element>(m.size())));
}

TEST_CASE("anchor without R4 represents nothing") {
  Structure m = parse_structure(
      "vocab R0/2 R1/2 R2/2 R3/1 R4/1\ndomain a\nrel R0 (a a)\nrel R1 (a a)\nrel R2 (a a)\nrel R3 (a)\n");
  CHECK(is_empty(omega_at(m, 0)).empty);
  CHECK(!psi_eta_holds(m, 0, {}));
}

TEST_CASE("psi_eta, the chain search and the automaton agree") {
  testing::Rng rng(31);
  const auto words = words_up_to(5);
  for (int i = 0; i < 60; ++i) {
    Structure m = testing::random_tau_d(rng, 1 + i % 6, 0.45);
    for (Element a = 0; a < m.size(); ++a) {
      BranchSet s = omega_at(m, a);
      for (const Word& w : words) {
        const bool chain = represented(m, a, w);
        CHECK(psi_eta_holds(m, a, w) == chain);
        CHECK(testing::oracle_prefix_run(s, w) == (chain && !s.initial().empty()));
      }
    }
  }
}

TEST_CASE("lasso membership is the limit of prefix representation") {
  testing::Rng rng(32);
  for (int i = 0; i < 80; ++i) {
    Structure m = testing::random_tau_d(rng, 1 + i % 4, 0.55);
    for (Element a = 0; a < m.size(); ++a) {
      BranchSet s = omega_at(m, a);
      for (int j = 0; j < 8; ++j) {
        Lasso eta = testing::random_lasso(rng, 3, 3);
        // Reachable chain ends repeat within 2^|M| periods.
        const std::size_t bound = eta.prefix.size() + eta.period.size() * ((std::size_t{1} << m.size()) + 1);
        bool all = true;
        for (std::size_t n = 0; n <= bound && all; ++n) all = represented(m, a, eta.take(n));
        CHECK(membership(eta, s) == all);
      }
    }
  }
}

TEST_CASE("omega is invariant under isomorphism") {
  testing::Rng rng(33);
  for (int i = 0; i < 40; ++i) {
    Structure m = testing::random_tau_d(rng, 2 + i % 4, 0.4);
    auto perm = testing::random_permutation(rng, m.size());
    Structure p = m.permuted(perm);
    for (Element a = 0; a < m.size(); ++a) CHECK(equivalent(omega_at(m, a), omega_at(p, perm[a])).equivalent);
    CHECK(equivalent(omega_of(m), omega_of(p)).equivalent);
  }
}

TEST_CASE("adding tuples only grows omega") {
  testing::Rng rng(34);
  const char* names[] = {"R0", "R1", "R2", "R3", "R4"};
  for (int i = 0; i < 60; ++i) {
    Structure m = testing::random_tau_d(rng, 2 + i % 3, 0.35);
    Structure bigger = m;
    const char* r = names[rng() % 5];
    Tuple t;
    const std::size_t arity = r[1] <= '2' ? 2 : 1;
    for (std::size_t k = 0; k < arity; ++k) t.push_back(static_cast<Element>(rng() % m.size()));
    bigger.add_tuple(r, t);
    for (Element a = 0; a < m.size(); ++a) CHECK(includes(omega_at(m, a), omega_at(bigger, a)).holds);
  }
}

TEST_CASE("omega of the union is the union of the anchors") {
  testing::Rng rng(35);
  for (int i = 0; i < 30; ++i) {
    Structure m = testing::random_tau_d(rng, 1 + i % 4, 0.5);
    BranchSet all = omega_of(m);
    for (int j = 0; j < 10; ++j) {
      Lasso eta = testing::random_lasso(rng, 3, 3);
      bool some = false;
      for (Element a = 0; a < m.size(); ++a) some = some || membership(eta, omega_at(m, a));
      CHECK(membership(eta, all) == some);
    }
  }
}

TEST_CASE("project_structure") {
  Structure m = canonical_model({{L("0(1)"), L("(10)")}, {}, true});
  auto eval = [&](const Formula& f, const Assignment& a) { return holds(m, f, a); };

  Structure same = project_structure(m, QuantifierArgs::atomic(), {}, eval);
  CHECK(same == m);

  QuantifierArgs swapped = QuantifierArgs::atomic();
  std::swap(swapped.psi[0], swapped.psi[1]);
  Structure flipped = project_structure(m, swapped, {}, eval);
  BranchSet orig = omega_of(m), proj = omega_of(flipped);
  for (const char* s : {"0(1)", "(10)", "1(0)", "(01)", "(0)", "(1)", "00(1)"})
    CHECK(membership(L(s), orig) == membership(flip(L(s)), proj));

  // Everything anchored, every node initial: all branches.
  QuantifierArgs wide = QuantifierArgs::atomic();
  wide.psi[0] = wide.psi[1] = wide.psi[2] = wide.psi[3] = wide.psi[4] = Formula::truth();
  CHECK(equivalent(omega_of(project_structure(m, wide, {}, eval)), universal()).equivalent);
}
