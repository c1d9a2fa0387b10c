#include <random>

#include "pozlog/error.hpp"
#include "pozlog/model_lab.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "model-lab";
constexpr std::size_t kMaxFunctions = std::size_t{1} << 16;
constexpr std::size_t kExhaustiveLimit = 512;
constexpr std::size_t kSamples = 64;

using Choice = std::vector<Element>;  // one element per factor

class Product {
 public:
  explicit Product(const UltraSetup& setup) : setup_(setup) {
    const auto& fs = setup.factors;
    if (fs.empty()) throw PreconditionError(kOrigin, "ultraproduct needs at least one factor");
    if (setup.filter.index_size() != fs.size())
      throw PreconditionError(kOrigin, "ultrafilter index set does not match the number of factors");
    for (const auto& f : fs) {
      if (!(f.vocabulary() == fs[0].vocabulary())) throw PreconditionError(kOrigin, "factors use different vocabularies");
      if (f.size() == 0) throw PreconditionError(kOrigin, "factors must be nonempty");
    }
    total_ = 1;
    for (const auto& f : fs) {
      total_ *= f.size();
      if (total_ > kMaxFunctions) throw PreconditionError(kOrigin, "product of the factors is too large");
    }
  }

  std::size_t total() const { return total_; }

  // The id-th function in lexicographic order (factor 0 most significant).
  Choice function(std::size_t id) const {
    const auto& fs = setup_.factors;
    Choice c(fs.size());
    for (std::size_t i = fs.size(); i-- > 0;) {
      c[i] = static_cast<Element>(id % fs[i].size());
      id /= fs[i].size();
    }
    return c;
  }

  std::uint64_t agree(const Choice& a, const Choice& b) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] == b[i]) s |= std::uint64_t{1} << i;
    return s;
  }

  // Class of f among the known representatives.
  std::optional<Element> class_of(const Choice& f, const std::vector<Choice>& reps) const {
    for (std::size_t c = 0; c < reps.size(); ++c)
      if (setup_.filter.contains(agree(f, reps[c]))) return static_cast<Element>(c);
    return std::nullopt;
  }

 private:
  const UltraSetup& setup_;
  std::size_t total_ = 1;
};

}  // namespace

Ultrafilter Ultrafilter::principal(std::size_t index_size, std::size_t at) {
  if (index_size == 0 || index_size > 63) throw PreconditionError(kOrigin, "index set size must be between 1 and 63");
  if (at >= index_size) throw PreconditionError(kOrigin, "principal index outside the index set");
  return Ultrafilter(index_size, at);
}

Ultrafilter Ultrafilter::from_family(std::size_t index_size, const std::vector<std::uint64_t>& members) {
  if (index_size == 0 || index_size > 16) throw PreconditionError(kOrigin, "explicit ultrafilters need 1 to 16 indices");
  const std::uint64_t full = (std::uint64_t{1} << index_size) - 1;
  std::vector<bool> in(full + 1, false);
  for (std::uint64_t s : members) {
    if (s > full) throw PreconditionError(kOrigin, "subset outside the index set");
    in[s] = true;
  }
  if (in[0]) throw PreconditionError(kOrigin, "an ultrafilter does not contain the empty set");
  for (std::uint64_t s = 0; s <= full; ++s) {
    if (in[s] == in[full ^ s]) throw PreconditionError(kOrigin, "exactly one of a set and its complement must belong");
    if (!in[s]) continue;
    for (std::uint64_t t = 0; t <= full; ++t) {
      if (in[t] && !in[s & t]) throw PreconditionError(kOrigin, "family is not closed under intersection");
      if ((s & t) == s && !in[t]) throw PreconditionError(kOrigin, "family is not closed upward");
    }
  }
  for (std::size_t i = 0; i < index_size; ++i)
    if (in[std::uint64_t{1} << i]) return Ultrafilter(index_size, i);
  throw PreconditionError(kOrigin, "no generating singleton");
}

Ultraproduct ultraproduct(const UltraSetup& setup) {
  Product p(setup);
  const auto& fs = setup.factors;
  std::vector<Choice> reps;
  for (std::size_t id = 0; id < p.total(); ++id) {
    Choice f = p.function(id);
    if (!p.class_of(f, reps)) reps.push_back(std::move(f));
  }
  std::vector<std::string> names;
  for (const Choice& r : reps) {
    std::string n = "[";
    for (std::size_t i = 0; i < r.size(); ++i) n += (i ? "," : "") + fs[i].name_of(r[i]);
    names.push_back(n + "]");
  }
  const Vocabulary& vocab = fs[0].vocabulary();
  Structure out(vocab, names);
  const std::size_t classes = reps.size();
  auto for_tuples = [&](std::size_t k, auto&& body) {
    Tuple t(k, 0);
    while (true) {
      body(t);
      std::size_t i = k;
      while (i > 0 && t[i - 1] + 1 == classes) t[--i] = 0;
      if (i == 0) break;
      ++t[i - 1];
    }
  };
  for (const Symbol& r : vocab.relations())
    for_tuples(r.arity, [&](const Tuple& t) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Tuple local;
        for (Element c : t) local.push_back(reps[c][i]);
        if (fs[i].holds(r.name, local)) s |= std::uint64_t{1} << i;
      }
      if (setup.filter.contains(s)) out.add_tuple(r.name, t);
    });
  for (const Symbol& fn : vocab.functions())
    for_tuples(fn.arity, [&](const Tuple& t) {
      Choice g(fs.size());
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Tuple local;
        for (Element c : t) local.push_back(reps[c][i]);
        g[i] = fs[i].apply(fn.name, local);
      }
      out.set_function(fn.name, t, *p.class_of(g, reps));
    });
  Ultraproduct result{std::move(out), reps, {}};
  for (const Choice& r : reps) result.iso.push_back(r[setup.filter.generator()]);
  return result;
}

LosReport los_check(const UltraSetup& setup, const std::vector<Formula>& formulas, std::uint64_t seed, const Registry* registry) {
  Product p(setup);
  Ultraproduct up = ultraproduct(setup);
  const auto& fs = setup.factors;
  LosReport report;
  report.formulas = formulas.size();
  report.isomorphic = is_isomorphism(up.product, fs[setup.filter.generator()], up.iso);
  std::mt19937_64 rng(seed);

  for (std::size_t fi = 0; fi < formulas.size(); ++fi) {
    const Formula& f = formulas[fi];
    const auto fv = f.free_variables();
    const std::vector<std::string> vars(fv.begin(), fv.end());
    std::size_t combos = 1;
    bool small = true;
    for (std::size_t i = 0; i < vars.size() && small; ++i) {
      combos *= p.total();
      small = combos <= kExhaustiveLimit;
    }
    std::vector<std::vector<std::size_t>> tuples;
    if (small) {
      std::vector<std::size_t> t(vars.size(), 0);
      while (true) {
        tuples.push_back(t);
        std::size_t i = vars.size();
        while (i > 0 && t[i - 1] + 1 == p.total()) t[--i] = 0;
        if (i == 0) break;
        ++t[i - 1];
      }
    } else {
      report.exhaustive = false;
      report.sample_cap = kSamples;
      std::uniform_int_distribution<std::size_t> pick(0, p.total() - 1);
      for (std::size_t s = 0; s < kSamples; ++s) {
        std::vector<std::size_t> t(vars.size());
        for (auto& x : t) x = pick(rng);
        tuples.push_back(std::move(t));
      }
    }
    for (const auto& t : tuples) {
      ++report.checks;
      std::uint64_t where = 0;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Assignment asg;
        for (std::size_t v = 0; v < vars.size(); ++v) asg.vars[vars[v]] = p.function(t[v])[i];
        if (holds(fs[i], f, asg, registry)) where |= std::uint64_t{1} << i;
      }
      Assignment in_product;
      for (std::size_t v = 0; v < vars.size(); ++v) in_product.vars[vars[v]] = *p.class_of(p.function(t[v]), up.representatives);
      const bool left = setup.filter.contains(where);
      const bool right = holds(up.product, f, in_product, registry);
      if (left != right) {
        std::string args;
        for (std::size_t v = 0; v < vars.size(); ++v) args += (v ? " " : "") + vars[v] + "=" + up.product.name_of(in_product.vars[vars[v]]);
        report.violations.push_back("formula " + std::to_string(fi) + " at " + (args.empty() ? "()" : args) +
                                    (left ? ": true on a filter set of factors but false in the ultraproduct"
                                          : ": true in the ultraproduct but not on a filter set of factors"));
      }
    }
  }
  return report;
}

}  // namespace pozlog
