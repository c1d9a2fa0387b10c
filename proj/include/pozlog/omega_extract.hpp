#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "pozlog/branch_set.hpp"
#include "pozlog/evaluator.hpp"
#include "pozlog/formula.hpp"
#include "pozlog/structure.hpp"

namespace pozlog {

// Chains representing finite words at one anchor.
struct ReprGraph {
  Element anchor = 0;
  bool anchor_valid = false;             // R4(anchor)
  std::vector<Element> nodes;            // R4(b) and R2(b, anchor)
  std::vector<Element> initial;          // nodes with R3
  std::array<std::vector<std::pair<Element, Element>>, 2> edges;  // R0 / R1 between nodes
};

ReprGraph repr_graph(const Structure& m, Element anchor);

// Safety automaton of the words represented at one anchor; empty when the
// anchor fails R4. States are labelled "anchor:node".
BranchSet omega_at(const Structure& m, Element anchor);
// Disjoint union over all anchors.
BranchSet omega_of(const Structure& m);
// One automaton per valid anchor.
std::vector<std::pair<Element, BranchSet>> omega_per_anchor(const Structure& m);

// Evaluates psi_eta at the anchor with the formula evaluator.
bool psi_eta_holds(const Structure& m, Element anchor, const Word& eta);

using FormulaCallback = std::function<bool(const Formula&, const Assignment&)>;

// The tau_d structure on m's domain with R_i = tuples satisfying psi_i.
Structure project_structure(const Structure& m, const QuantifierArgs& args, const Assignment& params,
                            const FormulaCallback& evaluate);

}  // namespace pozlog
