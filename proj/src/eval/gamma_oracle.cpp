#include <bit>
#include <set>

#include "pozlog/error.hpp"
#include "pozlog/evaluator.hpp"
#include "pozlog/registry.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "evaluator";

using Mask = std::uint64_t;

// Chains for one anchor: S_0 = nodes satisfying psi3, S_{i+1} = nodes reached
// from S_i by psi_{eta(i)}. Every prefix has a Gamma chain iff no S_n is empty.
struct AnchorChains {
  Element anchor = 0;
  Mask nodes = 0;
  Mask start = 0;
  std::array<std::vector<Mask>, 2> succ;

  Mask step(Mask s, std::uint8_t bit) const {
    Mask out = 0;
    for (; s; s &= s - 1) out |= succ[bit][static_cast<std::size_t>(std::countr_zero(s))];
    return out;
  }

  Mask after(const Word& w) const {
    Mask s = start;
    for (std::size_t i = 0; i < w.size() && s; ++i) s = step(s, w[i]);
    return s;
  }

  std::size_t pumping_bound(const Lasso& eta) const {
    const std::size_t k = static_cast<std::size_t>(std::popcount(nodes));
    const std::size_t cycle = k >= 40 ? std::size_t{1} << 40 : std::size_t{1} << k;
    return eta.prefix.size() + eta.period.size() * cycle;
  }

  // S_n nonempty for every n up to the pumping bound. Stops early once the
  // (period phase, S) pair repeats, which already decides all larger n.
  bool survives(const Lasso& eta) const {
    const std::size_t bound = pumping_bound(eta);
    const std::size_t u = eta.prefix.size(), v = eta.period.size();
    std::set<std::pair<std::size_t, Mask>> seen;
    Mask s = start;
    if (!s) return false;
    for (std::size_t i = 0; i < bound; ++i) {
      if (i >= u && !seen.emplace((i - u) % v, s).second) return true;
      s = step(s, eta.at(i));
      if (!s) return false;
    }
    return true;
  }
};

Word word_of(std::uint32_t value, std::size_t len) {
  Word w(len);
  for (std::size_t i = 0; i < len; ++i) w[i] = static_cast<std::uint8_t>((value >> (len - 1 - i)) & 1u);
  return w;
}

std::string chain_var(std::size_t i) { return "y" + std::to_string(i); }

}  // namespace

GammaOracle::GammaOracle(const Registry& registry, std::string set, std::size_t depth, std::size_t witness_bound)
    : registry_(registry), set_(std::move(set)), depth_(depth), witness_bound_(witness_bound) {
  registry_.set(set_);
  if (witness_bound_ == 0 || witness_bound_ > 12) throw Error(kOrigin, "witness bound must be between 1 and 12");
}

bool GammaOracle::in_set(const Lasso& eta) {
  auto it = membership_.find(eta);
  if (it != membership_.end()) return it->second;
  bool v = omega::membership(eta, registry_.set(set_));
  membership_.emplace(eta, v);
  return v;
}

GammaOracleResult GammaOracle::run(const Structure& m, const QuantifierArgs& args, const Assignment& params) {
  const std::size_t n = m.size();
  if (n > 64) throw Error(kOrigin, "gamma oracle supports at most 64 elements");

  // Truth tables of psi0..psi4.
  std::array<std::vector<Mask>, 3> binary;
  for (auto& t : binary) t.assign(n, 0);
  Mask psi3 = 0, psi4 = 0;
  for (Element a = 0; a < n; ++a) {
    Assignment asg = params.with(args.x0, a);
    if (holds(m, args.psi[3], asg, &registry_)) psi3 |= Mask{1} << a;
    if (holds(m, args.psi[4], asg, &registry_)) psi4 |= Mask{1} << a;
    for (Element b = 0; b < n; ++b) {
      Assignment asg2 = asg.with(args.x1, b);
      for (std::size_t i = 0; i < 3; ++i)
        if (holds(m, args.psi[i], asg2, &registry_)) binary[i][a] |= Mask{1} << b;
    }
  }

  std::vector<AnchorChains> anchors;
  for (Element a = 0; a < n; ++a) {
    if (!(psi4 >> a & 1)) continue;
    AnchorChains c;
    c.anchor = a;
    for (Element b = 0; b < n; ++b)
      if ((psi4 >> b & 1) && (binary[2][b] >> a & 1)) c.nodes |= Mask{1} << b;
    c.start = c.nodes & psi3;
    for (std::uint8_t bit : {0, 1}) {
      c.succ[bit].assign(n, 0);
      for (Element b = 0; b < n; ++b) c.succ[bit][b] = binary[bit][b] & c.nodes;
    }
    anchors.push_back(std::move(c));
  }

  std::size_t k = 0;
  {
    std::set<std::string> fv;
    for (const auto& p : args.psi) {
      auto s = p.free_variables();
      fv.insert(s.begin(), s.end());
    }
    fv.erase(args.x0);
    fv.erase(args.x1);
    k = fv.size();
  }

  GammaOracleResult result;
  const std::size_t bound = witness_bound_;
  for (const Word& sigma : words_up_to(depth_)) {
    std::optional<std::pair<Lasso, const AnchorChains*>> found;
    std::set<Lasso> tried;
    for (std::size_t total = 1; total <= 2 * bound && !found; ++total) {
      for (std::size_t lw = 0; lw <= bound && !found; ++lw) {
        if (total <= lw || total - lw > bound) continue;
        const std::size_t lv = total - lw;
        for (std::uint32_t wv = 0; wv < (1u << lw) && !found; ++wv) {
          Word prefix = sigma;
          Word w = word_of(wv, lw);
          prefix.insert(prefix.end(), w.begin(), w.end());
          std::vector<const AnchorChains*> alive;
          for (const auto& c : anchors)
            if (c.after(prefix)) alive.push_back(&c);
          if (alive.empty()) continue;
          for (std::uint32_t vv = 0; vv < (1u << lv) && !found; ++vv) {
            Lasso eta = Lasso(prefix, word_of(vv, lv)).canonical();
            if (!tried.insert(eta).second || in_set(eta)) continue;
            for (const AnchorChains* c : alive)
              if (c->survives(eta)) {
                found = std::make_pair(eta, c);
                break;
              }
          }
        }
      }
    }
    if (!found) {
      result.truth = false;
      result.failed_sigma = sigma;
      return result;
    }
    const auto& [eta, chains] = *found;
    // Re-check short prefixes by evaluating Gamma itself.
    const std::size_t upto = std::min(chains->pumping_bound(eta), verify_up_to);
    for (std::size_t len = 0; len <= upto; ++len) {
      Formula f = build_gamma(len, k, args, eta.take(len));
      for (std::size_t i = len + 1; i-- > 0;) f = Formula::exists(chain_var(i), f);
      if (!holds(m, f, params.with("x", chains->anchor), &registry_))
        throw Error(kOrigin, "internal: Gamma chain for " + to_string(eta) + " failed re-verification at n=" + std::to_string(len));
    }
    result.witnesses.push_back({sigma, eta, m.name_of(chains->anchor)});
  }
  result.truth = true;
  return result;
}

GammaOracleResult eval_gamma_oracle(const Structure& m, const Registry& registry, const std::string& set,
                                    const QuantifierArgs& args, const Assignment& params, std::size_t depth,
                                    std::size_t witness_bound) {
  GammaOracle oracle(registry, set, depth, witness_bound);
  return oracle.run(m, args, params);
}

}  // namespace pozlog
