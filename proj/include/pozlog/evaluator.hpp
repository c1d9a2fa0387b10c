#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pozlog/automata.hpp"
#include "pozlog/formula.hpp"
#include "pozlog/structure.hpp"

namespace pozlog {

class Registry;

// Values of free variables and of relation variables bound by enclosing
// second-order quantifiers.
struct Assignment {
  std::map<std::string, Element> vars;
  std::map<std::string, Relation> relations;

  Assignment with(const std::string& var, Element e) const {
    Assignment a = *this;
    a.vars[var] = e;
    return a;
  }
};

struct Budget {
  std::size_t max_relation_candidates = std::size_t{1} << 20;
  std::size_t max_subset_states = omega::kDefaultSubsetCap;
  std::size_t max_depth = 256;
};

struct TraceNode {
  std::string label;
  bool value = false;
  std::vector<TraceNode> children;
};

// Indented text rendering, one node per line.
std::string render_trace(const TraceNode& node);

// A branch outside A extending sigma, represented at `anchor`.
struct DensityWitness {
  Word sigma;
  Lasso eta;
  std::string anchor;
};

struct EvalResult {
  bool truth = false;
  std::optional<TraceNode> trace;
  // Density quantifiers at the top of the evaluation.
  std::optional<Word> not_dense_witness;
  std::vector<DensityWitness> density_witnesses;
  // Qfam: index of the matching member (chain size = the union member).
  std::optional<std::size_t> matched_member;
  // Second-order quantifiers: the relation that made the body true.
  std::map<std::string, std::vector<Tuple>> relation_witnesses;
  std::size_t nodes_visited = 0;
  // Visits per NodeKind, indexed by its integer value.
  std::array<std::size_t, 12> kind_visits{};
};

struct EvalOptions {
  FragmentTag mode = FragmentTag::Ld1;
  Budget budget;
  bool trace = false;
  // Collect density witnesses for every sigma of length <= 3.
  bool witnesses = false;
};

// Truth of `f` in `m` under `asg`. Throws ModeViolation when `f` is outside
// options.mode, BudgetExceeded when a budget runs out. `registry` resolves QA
// and Qfam references and may be null for formulas without them.
EvalResult evaluate(const Structure& m, const Formula& f, const Assignment& asg, const EvalOptions& options,
                    const Registry* registry = nullptr);
bool holds(const Structure& m, const Formula& f, const Assignment& asg = {}, const Registry* registry = nullptr);

// Q_A x0 x1 (psi) with parameters taken from `params`.
EvalResult eval_QA(const Structure& m, const Registry& registry, const std::string& set, const QuantifierArgs& args,
                   const Assignment& params, const EvalOptions& options = {});
EvalResult eval_Qfam(const Structure& m, const Registry& registry, const std::string& family, const QuantifierArgs& args,
                     const Assignment& params, const EvalOptions& options = {});

struct GammaOracleResult {
  bool truth = false;
  // First sigma with no witness (when false).
  std::optional<Word> failed_sigma;
  std::vector<DensityWitness> witnesses;
};

// Bounded form of the Gamma-unfolding semantics: every sigma with
// |sigma| <= depth must have a lasso sigma.w.v^omega outside A (|w|, |v| <=
// witness_bound) and an anchor carrying Gamma chains for all prefixes up to
// the pumping bound. Does not touch the extracted automata.
GammaOracleResult eval_gamma_oracle(const Structure& m, const Registry& registry, const std::string& set,
                                    const QuantifierArgs& args, const Assignment& params, std::size_t depth,
                                    std::size_t witness_bound = 4);

// The same oracle bound to one set, caching membership of candidate lassos
// in A across structures.
class GammaOracle {
 public:
  GammaOracle(const Registry& registry, std::string set, std::size_t depth, std::size_t witness_bound = 4);
  GammaOracleResult run(const Structure& m, const QuantifierArgs& args, const Assignment& params);

  // Prefix lengths n re-checked by evaluating Gamma as a formula.
  std::size_t verify_up_to = 3;

 private:
  bool in_set(const Lasso& eta);

  const Registry& registry_;
  std::string set_;
  std::size_t depth_;
  std::size_t witness_bound_;
  std::map<Lasso, bool> membership_;
};

bool check_theta_tl(const Structure& m);
// Indices (0-based) of the Theta_TL conjuncts that fail.
std::vector<std::size_t> theta_tl_failures(const Structure& m);

}  // namespace pozlog
