#include <algorithm>

#include "pozlog/error.hpp"
#include "pozlog/model_lab.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "model-lab";

bool contains(const std::vector<Formula>& list, const Formula& f) {
  return std::find(list.begin(), list.end(), f) != list.end();
}

// Element of m carrying the same name, for each element of n.
std::vector<Element> embedding(const Structure& n, const Structure& m) {
  std::vector<Element> map;
  for (Element e = 0; e < n.size(); ++e) {
    auto target = m.element(n.name_of(e));
    if (!target) throw PreconditionError(kOrigin, "element '" + n.name_of(e) + "' of the substructure is missing from the structure");
    map.push_back(*target);
  }
  return map;
}

PreceqResult check(const Structure& n, const Structure& m, const Fragment& fragment, const Registry* registry, bool minus) {
  require_substructure(n, m);
  const auto map = embedding(n, m);
  for (const Formula& f : fragment.formulas()) {
    const auto fv = f.free_variables();
    const std::vector<std::string> vars(fv.begin(), fv.end());
    std::vector<Element> tuple(vars.size(), 0);
    if (!vars.empty() && n.size() == 0) continue;
    while (true) {
      Assignment in_n, in_m;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        in_n.vars[vars[i]] = tuple[i];
        in_m.vars[vars[i]] = map[tuple[i]];
      }
      const bool big = holds(m, f, in_m, registry);
      const bool small = holds(n, f, in_n, registry);
      if (minus ? (big && !small) : (small && !big)) {
        PreceqResult r;
        r.holds = false;
        r.formula = f;
        for (Element e : tuple) r.tuple.push_back(n.name_of(e));
        return r;
      }
      std::size_t i = vars.size();
      while (i > 0 && tuple[i - 1] + 1 == n.size()) tuple[--i] = 0;
      if (i == 0) break;
      ++tuple[i - 1];
    }
  }
  return {};
}

}  // namespace

std::vector<Formula> immediate_subformulas(const Formula& f) { return f.children(); }

Fragment Fragment::closure(const std::vector<Formula>& formulas) {
  std::vector<Formula> out;
  std::vector<Formula> todo(formulas.rbegin(), formulas.rend());
  while (!todo.empty()) {
    Formula f = todo.back();
    todo.pop_back();
    if (contains(out, f)) continue;
    out.push_back(f);
    auto kids = immediate_subformulas(f);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) todo.push_back(*it);
  }
  return Fragment(std::move(out));
}

bool Fragment::closed() const {
  for (const Formula& f : formulas_)
    for (const Formula& g : immediate_subformulas(f))
      if (!contains(formulas_, g)) return false;
  return true;
}

void require_substructure(const Structure& n, const Structure& m) {
  if (!(n.vocabulary() == m.vocabulary())) throw PreconditionError(kOrigin, "substructure has a different vocabulary");
  const auto map = embedding(n, m);
  std::vector<Element> sorted = map;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw PreconditionError(kOrigin, "duplicate element names");
  for (const Symbol& r : n.vocabulary().relations()) {
    const Relation& rn = n.relation(r.name);
    const Relation& rm = m.relation(r.name);
    for (std::size_t idx = 0; idx < rn.table_size(); ++idx) {
      Tuple t = rn.tuple_at(idx);
      Tuple image;
      for (Element e : t) image.push_back(map[e]);
      if (rn.bit(idx) != rm.contains(image))
        throw PreconditionError(kOrigin, "relation " + r.name + " is not the restriction of the larger structure");
    }
  }
  for (const Symbol& fn : n.vocabulary().functions()) {
    Tuple args(fn.arity, 0);
    if (n.size() == 0 && fn.arity > 0) continue;
    while (true) {
      Tuple image;
      for (Element e : args) image.push_back(map[e]);
      if (map[n.apply(fn.name, args)] != m.apply(fn.name, image))
        throw PreconditionError(kOrigin, "function " + fn.name + " is not the restriction of the larger structure");
      std::size_t i = fn.arity;
      while (i > 0 && args[i - 1] + 1 == n.size()) args[--i] = 0;
      if (i == 0) break;
      ++args[i - 1];
    }
  }
}

PreceqResult preceq_minus(const Structure& n, const Structure& m, const Fragment& fragment, const Registry* registry) {
  return check(n, m, fragment, registry, true);
}

PreceqResult preceq_plus(const Structure& n, const Structure& m, const Fragment& fragment, const Registry* registry) {
  return check(n, m, fragment, registry, false);
}

LsResult ls_search(const Structure& m, const Fragment& fragment, std::size_t target_size, const Registry* registry) {
  if (target_size >= m.size()) throw PreconditionError(kOrigin, "target size must be smaller than the structure");
  LsResult result;
  for (std::size_t size = 1; size <= target_size; ++size) {
    std::vector<Element> comb(size);
    for (std::size_t i = 0; i < size; ++i) comb[i] = static_cast<Element>(i);
    while (true) {
      if (m.closed_under_functions(comb)) {
        ++result.subsets_checked;
        Structure n = m.induced(comb);
        if (preceq_minus(n, m, fragment, registry).holds) {
          result.found = true;
          result.elements = comb;
          result.substructure = std::move(n);
          return result;
        }
      }
      std::size_t i = size;
      while (i > 0 && comb[i - 1] == m.size() - size + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < size; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return result;
}

}  // namespace pozlog
