#include "pozlog/omega_extract.hpp"

#include "pozlog/automata.hpp"
#include "pozlog/error.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "omega-extract";

void require_tau_d(const Structure& m) {
  if (!m.vocabulary().contains_tau_d()) throw Error(kOrigin, "structure does not interpret the vocabulary R0/2 R1/2 R2/2 R3/1 R4/1");
}

bool unary(const Structure& m, const char* r, Element a) {
  Element t[1] = {a};
  return m.holds(r, t);
}

bool binary(const Structure& m, const char* r, Element a, Element b) {
  Element t[2] = {a, b};
  return m.holds(r, t);
}

}  // namespace

ReprGraph repr_graph(const Structure& m, Element anchor) {
  require_tau_d(m);
  if (anchor >= m.size()) throw Error(kOrigin, "anchor outside the domain");
  ReprGraph g;
  g.anchor = anchor;
  g.anchor_valid = unary(m, "R4", anchor);
  for (Element b = 0; b < m.size(); ++b)
    if (unary(m, "R4", b) && binary(m, "R2", b, anchor)) g.nodes.push_back(b);
  for (Element b : g.nodes)
    if (unary(m, "R3", b)) g.initial.push_back(b);
  for (Element b : g.nodes)
    for (Element c : g.nodes) {
      if (binary(m, "R0", b, c)) g.edges[0].emplace_back(b, c);
      if (binary(m, "R1", b, c)) g.edges[1].emplace_back(b, c);
    }
  return g;
}

BranchSet omega_at(const Structure& m, Element anchor) {
  ReprGraph g = repr_graph(m, anchor);
  if (!g.anchor_valid) {
    BranchSet none(0, {}, Acceptance::Safety);
    none.set_name("omega_" + m.name_of(anchor));
    return none;
  }
  std::vector<State> index(m.size(), 0);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i]] = static_cast<State>(i);
  std::vector<State> init;
  for (Element b : g.initial) init.push_back(index[b]);
  BranchSet s(g.nodes.size(), init, Acceptance::Safety);
  for (std::uint8_t bit : {0, 1})
    for (auto [b, c] : g.edges[bit]) s.add_transition(index[b], bit, index[c]);
  std::vector<std::string> labels;
  for (Element b : g.nodes) labels.push_back(m.name_of(anchor) + ":" + m.name_of(b));
  s.set_labels(std::move(labels));
  s.set_name("omega_" + m.name_of(anchor));
  return s;
}

std::vector<std::pair<Element, BranchSet>> omega_per_anchor(const Structure& m) {
  require_tau_d(m);
  std::vector<std::pair<Element, BranchSet>> out;
  for (Element a = 0; a < m.size(); ++a)
    if (unary(m, "R4", a)) out.emplace_back(a, omega_at(m, a));
  return out;
}

BranchSet omega_of(const Structure& m) {
  BranchSet acc(0, {}, Acceptance::Safety);
  for (auto& [a, s] : omega_per_anchor(m)) acc = omega::unite(acc, s);
  acc.set_name("omega");
  return acc;
}

bool psi_eta_holds(const Structure& m, Element anchor, const Word& eta) {
  require_tau_d(m);
  Assignment asg;
  asg.vars["x"] = anchor;
  return holds(m, build_psi_eta(eta), asg);
}

Structure project_structure(const Structure& m, const QuantifierArgs& args, const Assignment& params,
                            const FormulaCallback& evaluate) {
  Structure out(Vocabulary::tau_d(), m.element_names());
  const char* names[5] = {"R0", "R1", "R2", "R3", "R4"};
  for (Element a = 0; a < m.size(); ++a) {
    Assignment asg = params.with(args.x0, a);
    for (std::size_t i = 3; i < 5; ++i)
      if (evaluate(args.psi[i], asg)) out.add_tuple(names[i], {a});
    for (Element b = 0; b < m.size(); ++b) {
      Assignment asg2 = asg.with(args.x1, b);
      for (std::size_t i = 0; i < 3; ++i)
        if (evaluate(args.psi[i], asg2)) out.add_tuple(names[i], {a, b});
    }
  }
  return out;
}

}  // namespace pozlog
