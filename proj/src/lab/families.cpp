#include <algorithm>

#include "pozlog/automata.hpp"
#include "pozlog/error.hpp"
#include "pozlog/model_lab.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "model-lab";

Word primitive_root(const Word& w) {
  for (std::size_t p = 1; p <= w.size(); ++p) {
    if (w.size() % p) continue;
    if (std::equal(w.begin() + static_cast<std::ptrdiff_t>(p), w.end(), w.begin())) return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
  }
  return w;
}

// Patterns reduced to primitive roots; two patterns with the same periodic
// tail would make consecutive members equal.
std::vector<Word> normalize(const std::vector<Word>& patterns) {
  std::vector<Word> out;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (patterns[i].empty()) throw PreconditionError(kOrigin, "patterns must be nonempty");
    Word root = primitive_root(patterns[i]);
    for (std::size_t j = 0; j < out.size(); ++j)
      if (omega::conjugate(out[j], root))
        throw PreconditionError(kOrigin, "patterns " + to_string(patterns[j]) + " and " + to_string(patterns[i]) +
                                             " have the same periodic tail; the chain would collapse");
    out.push_back(std::move(root));
  }
  return out;
}

BranchSet named(BranchSet s, std::string name) {
  s.set_name(std::move(name));
  return s;
}

BranchFamily chain_family(const std::string& name, const std::vector<std::vector<Word>>& members, const std::vector<Word>& all) {
  BranchFamily f;
  f.name = name;
  for (std::size_t j = 0; j < members.size(); ++j)
    f.chain.push_back(named(omega::eventually_periodic(members[j]), name + "_A" + std::to_string(j)));
  f.union_set = named(omega::eventually_periodic(all), name + "_U");
  FamilyReport report = validate_family(f);
  if (!report.passed()) {
    std::string msg = "family " + name + " failed validation:";
    for (const auto& s : report.failures()) msg += " " + s + ";";
    throw PreconditionError(kOrigin, msg);
  }
  return f;
}

}  // namespace

BranchFamily family_gen(std::size_t m, const std::vector<Word>& patterns, const std::string& name) {
  if (m < 2) throw PreconditionError(kOrigin, "family chains need at least two members");
  if (patterns.size() != m) throw PreconditionError(kOrigin, "expected " + std::to_string(m) + " patterns, got " + std::to_string(patterns.size()));
  auto ps = normalize(patterns);
  std::vector<std::vector<Word>> members;
  for (std::size_t j = 0; j < m; ++j) members.emplace_back(ps.begin(), ps.begin() + static_cast<std::ptrdiff_t>(j + 1));
  return chain_family(name, members, ps);
}

std::vector<CrossEquivalence> cross_equivalences(const BranchFamily& a, const BranchFamily& b) {
  auto tagged = [](const BranchFamily& f) {
    std::vector<std::pair<std::string, const BranchSet*>> out;
    for (std::size_t j = 0; j < f.chain.size(); ++j) {
      bool is_union = j + 1 == f.chain.size() && omega::equivalent(f.chain[j], f.union_set).equivalent;
      if (!is_union) out.emplace_back("A" + std::to_string(j), &f.chain[j]);
    }
    out.emplace_back("U", &f.union_set);
    return out;
  };
  std::vector<CrossEquivalence> out;
  for (const auto& [ta, sa] : tagged(a))
    for (const auto& [tb, sb] : tagged(b)) out.push_back({ta, tb, omega::equivalent(*sa, *sb).equivalent});
  return out;
}

Scenario21 theorem21_scenario(const std::vector<Word>& shared, const std::vector<Word>& left, const std::vector<Word>& right) {
  if (left.empty() || right.empty()) throw PreconditionError(kOrigin, "both sides need at least one pattern");
  std::vector<Word> all = shared;
  all.insert(all.end(), left.begin(), left.end());
  all.insert(all.end(), right.begin(), right.end());
  all = normalize(all);
  const std::vector<Word> s(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(shared.size()));
  const std::vector<Word> l(all.begin() + static_cast<std::ptrdiff_t>(shared.size()),
                            all.begin() + static_cast<std::ptrdiff_t>(shared.size() + left.size()));
  const std::vector<Word> r(all.begin() + static_cast<std::ptrdiff_t>(shared.size() + left.size()), all.end());

  auto side = [&](const std::string& name, const std::vector<Word>& own) {
    std::vector<std::vector<Word>> members;
    std::vector<Word> acc = s;
    for (const Word& w : own) {
      acc.push_back(w);
      members.push_back(acc);
    }
    members.push_back(all);
    return chain_family(name, members, all);
  };

  BranchFamily f = side("F", l);
  BranchFamily g = side("G", r);
  Registry registry;
  registry.add_family(f);
  registry.add_family(g);
  Formula phi = Formula::conj({build_psi_fam("F", &registry), build_psi_fam("G", &registry), build_theta_tl()});

  LassoGadgetSpec a0;
  std::vector<Word> a0_patterns = s;
  a0_patterns.push_back(l.front());
  for (const Word& w : a0_patterns) a0.lassos.push_back(Lasso({}, w));

  auto cross = cross_equivalences(f, g);
  return Scenario21{std::move(f), std::move(g), std::move(registry), std::move(phi), full_model(), canonical_model(a0), std::move(cross)};
}

}  // namespace pozlog
