#include <algorithm>

#include "pozlog/automata.hpp"
#include "pozlog/error.hpp"
#include "pozlog/model_lab.hpp"

namespace pozlog {

namespace {

struct Builder {
  std::vector<std::string> names;
  std::vector<std::array<std::vector<Element>, 2>> out;  // labelled edges
  std::vector<std::vector<Element>> extra;               // R2 pairs beyond the edges
  std::vector<bool> r3;

  Element add(std::string name, bool start = false) {
    names.push_back(std::move(name));
    out.emplace_back();
    extra.emplace_back();
    r3.push_back(start);
    return static_cast<Element>(names.size() - 1);
  }
  void edge(Element a, std::uint8_t bit, Element b) { out[a][bit].push_back(b); }

  Structure build() const {
    const std::size_t n = names.size();
    Structure s(Vocabulary::tau_d(), names);
    std::vector<std::vector<Element>> adj(n);
    for (Element a = 0; a < n; ++a) {
      for (std::uint8_t bit : {0, 1})
        for (Element b : out[a][bit]) {
          s.add_tuple(bit ? "R1" : "R0", {a, b});
          adj[a].push_back(b);
        }
      for (Element b : extra[a]) adj[a].push_back(b);
      s.add_tuple("R4", {a});
      if (r3[a]) s.add_tuple("R3", {a});
    }
    for (Element a = 0; a < n; ++a) {
      std::vector<bool> seen(n, false);
      std::vector<Element> todo{a};
      seen[a] = true;
      while (!todo.empty()) {
        Element x = todo.back();
        todo.pop_back();
        s.add_tuple("R2", {a, x});
        for (Element y : adj[x])
          if (!seen[y]) {
            seen[y] = true;
            todo.push_back(y);
          }
      }
    }
    return s;
  }
};

}  // namespace

Structure canonical_model(const LassoGadgetSpec& spec) {
  Builder b;
  std::optional<Element> top;
  if (spec.share_root)
    top = b.add("r", true);
  else
    top = b.add("top", true);
  std::vector<Lasso> lassos;
  for (const Lasso& l : spec.lassos) {
    Lasso c = l.canonical();
    if (std::find(lassos.begin(), lassos.end(), c) == lassos.end()) lassos.push_back(c);
  }

  auto gadget_root = [&](const std::string& tag) {
    if (spec.share_root) return *top;
    Element r = b.add(tag + "r", true);
    return r;
  };

  for (std::size_t i = 0; i < lassos.size(); ++i) {
    const Lasso& l = lassos[i];
    const std::string tag = "l" + std::to_string(i);
    Element root = gadget_root(tag);
    std::vector<Element> gadget;
    if (root != *top) gadget.push_back(root);
    Element cur = root;
    for (std::size_t j = 0; j < l.prefix.size(); ++j) {
      Element next = b.add(tag + "s" + std::to_string(j + 1));
      b.edge(cur, l.prefix[j], next);
      gadget.push_back(next);
      cur = next;
    }
    std::vector<Element> cycle;
    for (std::size_t j = 0; j < l.period.size(); ++j) {
      cycle.push_back(b.add(tag + "c" + std::to_string(j)));
      gadget.push_back(cycle.back());
    }
    b.edge(cur, l.period[0], cycle[0]);
    for (std::size_t j = 0; j + 1 < cycle.size(); ++j) b.edge(cycle[j], l.period[j + 1], cycle[j + 1]);
    b.edge(cycle.back(), l.period[0], cycle[0]);
    Element anchor = b.add(tag + "a");
    for (Element g : gadget) b.extra[g].push_back(anchor);
  }

  for (std::size_t i = 0; i < spec.cones.size(); ++i) {
    const Word& sigma = spec.cones[i];
    const std::string tag = "k" + std::to_string(i);
    std::vector<Element> gadget;
    Element t;
    if (sigma.empty()) {
      // The root must stay off cycles, so the empty cone gets its own start.
      t = b.add(tag + "t", true);
    } else {
      Element cur = gadget_root(tag);
      if (cur != *top) gadget.push_back(cur);
      for (std::size_t j = 0; j + 1 < sigma.size(); ++j) {
        Element next = b.add(tag + "s" + std::to_string(j + 1));
        b.edge(cur, sigma[j], next);
        gadget.push_back(next);
        cur = next;
      }
      t = b.add(tag + "t");
      b.edge(cur, sigma.back(), t);
    }
    b.edge(t, 0, t);
    b.edge(t, 1, t);
    gadget.push_back(t);
    Element anchor = b.add(tag + "a");
    for (Element g : gadget) b.extra[g].push_back(anchor);
  }

  for (Element e = 0; e < b.names.size(); ++e)
    if (e != *top) b.extra[*top].push_back(e);
  return b.build();
}

BranchSet gadget_language(const LassoGadgetSpec& spec) {
  BranchSet acc = omega::from_lassos(spec.lassos);
  for (const Word& sigma : spec.cones) acc = omega::unite(acc, omega::starts_with(sigma));
  acc.set_name("gadgets");
  return acc;
}

Structure full_model() {
  Structure s(Vocabulary::tau_d(), {"r"});
  for (const char* r : {"R0", "R1", "R2"}) s.add_tuple(r, {0, 0});
  s.add_tuple("R3", {0});
  s.add_tuple("R4", {0});
  return s;
}

}  // namespace pozlog
