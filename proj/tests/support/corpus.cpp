#include "corpus.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>

namespace pozlog::testing {

namespace {

const char* const kBinary[] = {"R0", "R1", "R2"};
const char* const kUnary[] = {"R3", "R4"};

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

}  // namespace

Structure random_tau_d(Rng& rng, std::size_t n, double p) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  Structure m(Vocabulary::tau_d(), names);
  for (const char* r : kBinary)
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        if (coin(rng, p)) m.add_tuple(r, {a, b});
  for (const char* r : kUnary)
    for (Element a = 0; a < n; ++a)
      if (coin(rng, p)) m.add_tuple(r, {a});
  return m;
}

std::string iso_key(const Structure& m) {
  const std::size_t n = m.size();
  std::vector<Element> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    // perm[new] = old
    std::string key = std::to_string(n) + ":";
    for (const char* r : kBinary)
      for (Element a = 0; a < n; ++a)
        for (Element b = 0; b < n; ++b) {
          const std::array<Element, 2> t{perm[a], perm[b]};
          key += m.holds(r, t) ? '1' : '0';
        }
    for (const char* r : kUnary)
      for (Element a = 0; a < n; ++a) key += m.holds(r, std::array<Element, 1>{perm[a]}) ? '1' : '0';
    if (best.empty() || key < best) best = key;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<Structure> iso_distinct_corpus(Rng& rng, std::size_t max_n, std::size_t count) {
  std::vector<Structure> out;
  std::set<std::string> seen;
  for (unsigned bits = 0; bits < 32; ++bits) {
    Structure m(Vocabulary::tau_d(), {"e0"});
    for (unsigned r = 0; r < 3; ++r)
      if (bits >> r & 1) m.add_tuple(kBinary[r], {0, 0});
    for (unsigned r = 0; r < 2; ++r)
      if (bits >> (3 + r) & 1) m.add_tuple(kUnary[r], {0});
    seen.insert(iso_key(m));
    out.push_back(std::move(m));
  }
  const double densities[] = {0.2, 0.35, 0.5, 0.7};
  std::size_t attempts = 0;
  while (out.size() < count && attempts < count * 100) {
    ++attempts;
    const std::size_t n = 2 + pick(rng, max_n - 1);
    Structure m = random_tau_d(rng, n, densities[pick(rng, 4)]);
    if (seen.insert(iso_key(m)).second) out.push_back(std::move(m));
  }
  return out;
}

std::vector<Element> random_permutation(Rng& rng, std::size_t n) {
  std::vector<Element> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

BranchSet random_automaton(Rng& rng, std::size_t max_states) {
  const std::size_t n = 1 + pick(rng, max_states);
  std::vector<State> init{static_cast<State>(pick(rng, n))};
  if (n > 1 && coin(rng, 0.25)) {
    State q = static_cast<State>(pick(rng, n));
    if (q != init[0]) init.push_back(q);
  }
  const bool parity = coin(rng, 0.6);
  BranchSet s(n, init, parity ? Acceptance::Parity : Acceptance::Safety);
  std::discrete_distribution<int> fanout({0.15, 0.65, 0.2});
  for (State q = 0; q < n; ++q)
    for (std::uint8_t b : {0, 1}) {
      int k = fanout(rng);
      std::set<State> targets;
      for (int i = 0; i < k; ++i) targets.insert(static_cast<State>(pick(rng, n)));
      for (State r : targets) s.add_transition(q, b, r);
    }
  if (parity) {
    std::vector<Priority> prio(n);
    for (auto& p : prio) p = static_cast<Priority>(pick(rng, 4));
    s.set_priorities({prio});
  }
  return s;
}

Lasso random_lasso(Rng& rng, std::size_t max_prefix, std::size_t max_period) {
  Word u(pick(rng, max_prefix + 1)), v(1 + pick(rng, max_period));
  for (auto& b : u) b = static_cast<std::uint8_t>(pick(rng, 2));
  for (auto& b : v) b = static_cast<std::uint8_t>(pick(rng, 2));
  return Lasso(u, v);
}

bool oracle_membership(const Lasso& eta, const BranchSet& set) {
  const std::size_t len = eta.prefix.size() + eta.period.size();
  const std::size_t total = set.size() * len;
  auto next_pos = [&](std::size_t i) { return i + 1 < len ? i + 1 : eta.prefix.size(); };
  std::vector<std::vector<std::size_t>> succ(total);
  for (std::size_t v = 0; v < total; ++v) {
    const State q = static_cast<State>(v / len);
    const std::size_t i = v % len;
    for (State r : set.successors(q, eta.at(i))) succ[v].push_back(r * len + next_pos(i));
  }
  // Nodes reachable from `from` by at least one edge inside `allowed`.
  auto reach = [&](std::size_t from, const std::vector<bool>& allowed) {
    std::vector<bool> seen(total, false);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : succ[v])
        if (allowed[w] && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    return seen;
  };

  std::vector<bool> live(total, false);
  {
    std::vector<bool> all(total, true);
    for (State q : set.initial()) {
      live[q * len] = true;
      auto r = reach(q * len, all);
      for (std::size_t v = 0; v < total; ++v) live[v] = live[v] || r[v];
    }
  }
  // Cycles inside `allowed`: split into components by mutual reachability;
  // accept a component whose max priority is even in every coordinate,
  // otherwise drop the states carrying an odd max and look again.
  std::function<bool(std::vector<bool>)> search = [&](std::vector<bool> allowed) {
    std::vector<std::vector<bool>> from(total);
    for (std::size_t v = 0; v < total; ++v)
      if (allowed[v]) from[v] = reach(v, allowed);
    std::vector<bool> done(total, false);
    for (std::size_t v = 0; v < total; ++v) {
      if (!allowed[v] || done[v] || !from[v][v]) continue;
      std::vector<bool> comp(total, false);
      for (std::size_t w = 0; w < total; ++w)
        if (allowed[w] && from[v][w] && from[w][v]) comp[w] = done[w] = true;
      bool good = true;
      std::vector<bool> next = comp;
      for (std::size_t c = 0; c < set.coordinates(); ++c) {
        Priority mx = 0;
        for (std::size_t w = 0; w < total; ++w)
          if (comp[w]) mx = std::max(mx, set.priority(static_cast<State>(w / len), c));
        if (mx % 2 == 1) {
          good = false;
          for (std::size_t w = 0; w < total; ++w)
            if (comp[w] && set.priority(static_cast<State>(w / len), c) == mx) next[w] = false;
        }
      }
      if (good || search(next)) return true;
    }
    return false;
  };
  return search(live);
}

bool oracle_extendable(const BranchSet& set, const Word& sigma, std::size_t bound) {
  for (std::size_t total = 1; total <= bound; ++total)
    for (std::size_t lv = 1; lv <= total; ++lv) {
      const std::size_t lw = total - lv;
      for (std::uint32_t wv = 0; wv < (1u << lw); ++wv)
        for (std::uint32_t vv = 0; vv < (1u << lv); ++vv) {
          Word u = sigma, v(lv);
          for (std::size_t i = 0; i < lw; ++i) u.push_back(static_cast<std::uint8_t>(wv >> i & 1));
          for (std::size_t i = 0; i < lv; ++i) v[i] = static_cast<std::uint8_t>(vv >> i & 1);
          if (oracle_membership(Lasso(u, v), set)) return true;
        }
    }
  return false;
}

bool oracle_prefix_run(const BranchSet& set, const Word& w) {
  std::set<State> cur(set.initial().begin(), set.initial().end());
  for (std::uint8_t b : w) {
    std::set<State> next;
    for (State q : cur)
      for (State r : set.successors(q, b)) next.insert(r);
    cur = std::move(next);
  }
  return !cur.empty();
}

namespace {

struct Gen {
  Rng& rng;
  const FormulaGen& g;
  std::vector<std::pair<std::string, std::size_t>> rel_vars;
  // Variables bound by enclosing binders; the parser rejects shadowing.
  std::vector<std::string> binders;
  std::size_t fresh = 0;

  bool bound(const std::string& v) const { return std::find(binders.begin(), binders.end(), v) != binders.end(); }

  Term term() {
    std::vector<std::string> scope = g.vars;
    for (const auto& b : binders)
      if (std::find(scope.begin(), scope.end(), b) == scope.end()) scope.push_back(b);
    return Term::var(scope[pick(rng, scope.size())]);
  }

  Formula literal() {
    const std::size_t k = pick(rng, rel_vars.empty() ? 6 : 8);
    if (k < 3) {
      std::string r = kBinary[k];
      return coin(rng, 0.7) ? Formula::atom(r, {term(), term()}) : Formula::neg_atom(r, {term(), term()});
    }
    if (k < 5) {
      std::string r = kUnary[k - 3];
      return coin(rng, 0.7) ? Formula::atom(r, {term()}) : Formula::neg_atom(r, {term()});
    }
    if (k == 5) return coin(rng, 0.5) ? Formula::equal(term(), term()) : Formula::neg_equal(term(), term());
    const auto& [name, arity] = rel_vars[pick(rng, rel_vars.size())];
    std::vector<Term> ts;
    for (std::size_t i = 0; i < arity; ++i) ts.push_back(term());
    return coin(rng, 0.7) ? Formula::atom(name, ts) : Formula::neg_atom(name, ts);
  }

  Formula density(std::size_t depth, bool family) {
    const std::string x0 = "u" + std::to_string(fresh), x1 = "v" + std::to_string(fresh);
    ++fresh;
    std::array<Formula, 5> psi{Formula::truth(), Formula::truth(), Formula::truth(), Formula::truth(), Formula::truth()};
    for (std::size_t i = 0; i < 5; ++i) {
      binders.push_back(x0);
      if (i < 3) binders.push_back(x1);
      psi[i] = coin(rng, 0.6) ? atomic_psi(i, x0, x1) : gen(depth - 1);
      binders.resize(binders.size() - (i < 3 ? 2 : 1));
    }
    if (family) return Formula::qfam(g.families[pick(rng, g.families.size())], x0, x1, psi);
    return Formula::qa(g.sets[pick(rng, g.sets.size())], x0, x1, psi);
  }

  Formula atomic_psi(std::size_t i, const std::string& x0, const std::string& x1) {
    if (i < 3) return Formula::atom(kBinary[i], {Term::var(x0), Term::var(x1)});
    return Formula::atom(kUnary[i - 3], {Term::var(x0)});
  }

  Formula quantified(bool exists, std::size_t depth) {
    std::vector<std::string> free;
    for (const auto& v : g.vars)
      if (!bound(v)) free.push_back(v);
    if (free.empty()) return literal();
    const std::string v = free[pick(rng, free.size())];
    binders.push_back(v);
    Formula body = gen(depth - 1);
    binders.pop_back();
    return exists ? Formula::exists(v, body) : Formula::forall(v, body);
  }

  Formula gen(std::size_t depth) {
    if (depth == 0 || coin(rng, 0.2)) return literal();
    std::vector<int> kinds = {0, 1, 2, 3};
    if (g.negation) kinds.push_back(4);
    if (g.second_order) kinds.push_back(5);
    if (g.density) kinds.push_back(6);
    if (g.density && !g.families.empty()) kinds.push_back(7);
    const int kind = kinds[pick(rng, kinds.size())];
    switch (kind) {
      case 0:
      case 1: {
        std::vector<Formula> parts;
        const std::size_t k = pick(rng, 4);
        for (std::size_t i = 0; i < k; ++i) parts.push_back(gen(depth - 1));
        return kind == 0 ? Formula::conj(parts) : Formula::disj(parts);
      }
      case 2:
        return quantified(true, depth);
      case 3:
        return quantified(false, depth);
      case 4: {
        Formula body = gen(depth - 1);
        // (not <literal>) reads back as a negated literal.
        if (body.is_literal()) body = Formula::conj({body});
        return Formula::negation(body);
      }
      case 5: {
        std::string name = "S" + std::to_string(fresh++);
        std::size_t arity = 1 + pick(rng, 2);
        rel_vars.emplace_back(name, arity);
        Formula body = gen(depth - 1);
        rel_vars.pop_back();
        return Formula::exists_rel(name, arity, body);
      }
      case 6:
        return density(depth, false);
      default:
        return density(depth, true);
    }
  }
};

}  // namespace

Formula random_formula(Rng& rng, const FormulaGen& gen, std::size_t depth) {
  Gen g{rng, gen, {}, {}, 0};
  return g.gen(depth);
}

Formula close_formula(Rng& rng, const Formula& f) {
  Formula out = f;
  for (const auto& v : f.free_variables()) out = coin(rng, 0.5) ? Formula::exists(v, out) : Formula::forall(v, out);
  return out;
}

}  // namespace pozlog::testing
