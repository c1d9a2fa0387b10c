#include "pozlog/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "pozlog/error.hpp"

namespace pozlog::omega {

namespace {

constexpr const char* kOrigin = "omega-lang";

Acceptance acceptance_for(std::size_t coordinates) {
  if (coordinates == 0) return Acceptance::Safety;
  if (coordinates == 1) return Acceptance::Parity;
  return Acceptance::ProductParity;
}

bool has_self_loop(const BranchSet& a, State q) {
  for (std::uint8_t b : {0, 1}) {
    const auto& s = a.successors(q, b);
    if (std::binary_search(s.begin(), s.end(), q)) return true;
  }
  return false;
}

// Tarjan's algorithm restricted to `allowed`, iterative.
std::vector<std::vector<State>> sccs(const BranchSet& a, const std::vector<char>& allowed) {
  const std::size_t n = a.size();
  std::vector<std::int64_t> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<State> stack;
  std::vector<std::vector<State>> out;
  std::int64_t counter = 0;

  struct Frame {
    State q;
    std::uint8_t bit;
    std::size_t pos;
  };

  for (State root = 0; root < n; ++root) {
    if (!allowed[root] || index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      bool pushed = false;
      while (f.bit < 2) {
        const auto& succ = a.successors(f.q, f.bit);
        if (f.pos >= succ.size()) {
          ++f.bit;
          f.pos = 0;
          continue;
        }
        State r = succ[f.pos++];
        if (!allowed[r]) continue;
        if (index[r] < 0) {
          index[r] = low[r] = counter++;
          stack.push_back(r);
          on_stack[r] = 1;
          call.push_back({r, 0, 0});
          pushed = true;
          break;
        }
        if (on_stack[r]) low[f.q] = std::min(low[f.q], index[r]);
      }
      if (pushed) continue;
      State q = f.q;
      if (low[q] == index[q]) {
        std::vector<State> comp;
        State r;
        do {
          r = stack.back();
          stack.pop_back();
          on_stack[r] = 0;
          comp.push_back(r);
        } while (r != q);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) low[call.back().q] = std::min(low[call.back().q], low[q]);
    }
  }
  return out;
}

// Strongly connected sets inside `allowed` that carry a cycle whose maximal
// priority is even in every coordinate. Components with an odd maximum in some
// coordinate lose the states carrying that maximum and are split again.
void good_components(const BranchSet& a, const std::vector<char>& allowed, std::vector<std::vector<State>>& out) {
  for (auto& comp : sccs(a, allowed)) {
    if (comp.size() == 1 && !has_self_loop(a, comp[0])) continue;
    std::optional<std::pair<std::size_t, Priority>> odd;
    for (std::size_t k = 0; k < a.coordinates() && !odd; ++k) {
      Priority m = 0;
      for (State q : comp) m = std::max(m, a.priority(q, k));
      if (m % 2 == 1) odd = std::make_pair(k, m);
    }
    if (!odd) {
      out.push_back(std::move(comp));
      continue;
    }
    std::vector<char> sub(a.size(), 0);
    for (State q : comp)
      if (a.priority(q, odd->first) != odd->second) sub[q] = 1;
    good_components(a, sub, out);
  }
}

std::vector<char> reachable_mask(const BranchSet& a) {
  std::vector<char> seen(a.size(), 0);
  std::vector<State> todo(a.initial().begin(), a.initial().end());
  for (State q : todo) seen[q] = 1;
  while (!todo.empty()) {
    State q = todo.back();
    todo.pop_back();
    for (std::uint8_t b : {0, 1})
      for (State r : a.successors(q, b))
        if (!seen[r]) {
          seen[r] = 1;
          todo.push_back(r);
        }
  }
  return seen;
}

// Shortest word leading from `sources` to a state satisfying `target`, moving
// only through `allowed`. Returns the word and the reached state.
template <class Pred>
std::optional<std::pair<Word, State>> bfs_path(const BranchSet& a, const std::vector<State>& sources, const std::vector<char>& allowed,
                                               Pred target) {
  const std::size_t n = a.size();
  std::vector<std::int64_t> parent(n, -2);
  std::vector<std::uint8_t> via(n, 0);
  std::deque<State> queue;
  for (State s : sources) {
    if (!allowed[s] || parent[s] != -2) continue;
    parent[s] = -1;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    if (target(q)) {
      Word w;
      for (State c = q; parent[c] >= 0; c = static_cast<State>(parent[c])) w.push_back(via[c]);
      std::reverse(w.begin(), w.end());
      return std::make_pair(w, q);
    }
    for (std::uint8_t b : {0, 1})
      for (State r : a.successors(q, b))
        if (allowed[r] && parent[r] == -2) {
          parent[r] = q;
          via[r] = b;
          queue.push_back(r);
        }
  }
  return std::nullopt;
}

// One-step path variant: at least one transition (for cycles back to start).
std::optional<Word> path_nonempty(const BranchSet& a, State from, State to, const std::vector<char>& allowed) {
  std::optional<Word> best;
  for (std::uint8_t b : {0, 1}) {
    for (State r : a.successors(from, b)) {
      if (!allowed[r]) continue;
      auto rest = bfs_path(a, {r}, allowed, [&](State q) { return q == to; });
      if (!rest) continue;
      Word w{b};
      w.insert(w.end(), rest->first.begin(), rest->first.end());
      if (!best || w.size() < best->size()) best = w;
    }
  }
  return best;
}

std::vector<State> post(const BranchSet& a, const std::vector<State>& from, std::uint8_t bit) {
  std::vector<State> out;
  for (State q : from) {
    const auto& s = a.successors(q, bit);
    out.insert(out.end(), s.begin(), s.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool all_priorities_even(const BranchSet& a) {
  for (const auto& m : a.priority_maps())
    for (Priority p : m)
      if (p % 2 == 1) return false;
  return true;
}

}  // namespace

// ------------------------------------------------------------------ emptiness

Emptiness is_empty(const BranchSet& set) {
  std::vector<std::vector<State>> good;
  good_components(set, reachable_mask(set), good);
  if (good.empty()) return {};

  std::vector<std::int64_t> comp_of(set.size(), -1);
  for (std::size_t i = 0; i < good.size(); ++i)
    for (State q : good[i]) comp_of[q] = static_cast<std::int64_t>(i);

  std::vector<char> all(set.size(), 1);
  auto stem = bfs_path(set, set.initial(), all, [&](State q) { return comp_of[q] >= 0; });
  if (!stem) throw Error(kOrigin, "internal: good component unreachable");
  const State entry = stem->second;
  const auto& comp = good[static_cast<std::size_t>(comp_of[entry])];

  std::vector<char> inside(set.size(), 0);
  for (State q : comp) inside[q] = 1;

  // A closed walk from `entry` through every state of the component.
  Word cycle;
  State cur = entry;
  for (State target : comp) {
    if (target == cur) continue;
    auto p = bfs_path(set, {cur}, inside, [&](State q) { return q == target; });
    cycle.insert(cycle.end(), p->first.begin(), p->first.end());
    cur = target;
  }
  if (cur != entry || cycle.empty()) {
    auto back = cur == entry ? path_nonempty(set, cur, entry, inside)
                             : std::optional<Word>(bfs_path(set, {cur}, inside, [&](State q) { return q == entry; })->first);
    cycle.insert(cycle.end(), back->begin(), back->end());
  }
  Emptiness e;
  e.empty = false;
  e.witness = Lasso(stem->first, cycle).canonical();
  return e;
}

bool membership(const Lasso& eta, const BranchSet& set) { return !is_empty(intersect(singleton(eta), set)).empty; }

std::vector<bool> live_states(const BranchSet& set) {
  std::vector<std::vector<State>> good;
  good_components(set, std::vector<char>(set.size(), 1), good);
  std::vector<std::vector<State>> pred(set.size());
  for (State q = 0; q < set.size(); ++q)
    for (std::uint8_t b : {0, 1})
      for (State r : set.successors(q, b)) pred[r].push_back(q);
  std::vector<bool> live(set.size(), false);
  std::vector<State> todo;
  for (const auto& c : good)
    for (State q : c)
      if (!live[q]) {
        live[q] = true;
        todo.push_back(q);
      }
  while (!todo.empty()) {
    State q = todo.back();
    todo.pop_back();
    for (State p : pred[q])
      if (!live[p]) {
        live[p] = true;
        todo.push_back(p);
      }
  }
  return live;
}

// -------------------------------------------------------------------- density

DensityVerdict is_dense(const BranchSet& set, std::size_t subset_cap) {
  const auto live = live_states(set);
  auto restrict_live = [&](std::vector<State> s) {
    s.erase(std::remove_if(s.begin(), s.end(), [&](State q) { return !live[q]; }), s.end());
    return s;
  };
  std::vector<State> start = restrict_live(set.initial());
  if (start.empty()) return {false, {}};

  std::map<std::vector<State>, std::size_t> seen;
  std::vector<std::vector<State>> subsets{start};
  std::vector<std::pair<std::int64_t, std::uint8_t>> parent{{-1, 0}};
  seen.emplace(start, 0);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (std::uint8_t b : {0, 1}) {
      std::vector<State> next = restrict_live(post(set, subsets[i], b));
      if (next.empty()) {
        Word w{b};
        for (std::int64_t c = static_cast<std::int64_t>(i); parent[static_cast<std::size_t>(c)].first >= 0;
             c = parent[static_cast<std::size_t>(c)].first)
          w.push_back(parent[static_cast<std::size_t>(c)].second);
        std::reverse(w.begin(), w.end());
        return {false, w};
      }
      if (seen.count(next)) continue;
      if (subsets.size() >= subset_cap)
        throw BudgetExceeded(kOrigin, "density check exceeded the subset cap of " + std::to_string(subset_cap));
      seen.emplace(next, subsets.size());
      subsets.push_back(std::move(next));
      parent.emplace_back(static_cast<std::int64_t>(i), b);
    }
  }
  return {true, {}};
}

// ----------------------------------------------------------------- inclusion

Inclusion includes(const BranchSet& sub, const BranchSet& super, std::size_t subset_cap) {
  Emptiness e = is_empty(intersect(sub, complement_general(super, subset_cap)));
  return {e.empty, e.witness};
}

Equivalence equivalent(const BranchSet& a, const BranchSet& b, std::size_t subset_cap) {
  Inclusion ab = includes(a, b, subset_cap);
  if (!ab.holds) return {false, ab.counterexample, true};
  Inclusion ba = includes(b, a, subset_cap);
  if (!ba.holds) return {false, ba.counterexample, false};
  return {};
}

// ------------------------------------------------------------- constructions

BranchSet complement(const BranchSet& set) {
  if (!set.is_complementable())
    throw PreconditionError(kOrigin, "complement needs a deterministic, complete, single-parity automaton");
  BranchSet out = set;
  auto maps = set.priority_maps();
  for (auto& p : maps[0]) ++p;
  out.set_priorities(std::move(maps));
  out.set_name(set.name().empty() ? "" : "not_" + set.name());
  return out;
}

BranchSet complete(const BranchSet& set) {
  const std::size_t k = set.coordinates();
  const Acceptance acc = k == 0 ? Acceptance::Parity : set.acceptance();
  BranchSet out(set.size(), set.initial(), acc);
  if (k == 0) {
    out.set_priorities({std::vector<Priority>(set.size(), 0)});
  } else {
    out.set_priorities(set.priority_maps());
  }
  out.set_labels(set.labels());
  out.set_name(set.name());
  std::vector<Priority> sink_prio(std::max<std::size_t>(k, 1), 0);
  sink_prio[0] = 1;
  std::optional<State> sink;
  auto get_sink = [&] {
    if (!sink) {
      sink = out.add_state(sink_prio);
      out.add_transition(*sink, 0, *sink);
      out.add_transition(*sink, 1, *sink);
    }
    return *sink;
  };
  for (State q = 0; q < set.size(); ++q)
    for (std::uint8_t b : {0, 1}) {
      if (set.successors(q, b).empty()) out.add_transition(q, b, get_sink());
      for (State r : set.successors(q, b)) out.add_transition(q, b, r);
    }
  if (set.initial().empty()) out.set_initial({get_sink()});
  return out;
}

BranchSet determinize_safety(const BranchSet& set, std::size_t subset_cap) {
  if (set.acceptance() != Acceptance::Safety && !all_priorities_even(set))
    throw PreconditionError(kOrigin, "subset construction applies to safety acceptance only");
  std::map<std::vector<State>, State> index;
  std::vector<std::vector<State>> subsets{set.initial()};
  index.emplace(set.initial(), 0);
  std::vector<std::array<State, 2>> delta;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::array<State, 2> row{};
    for (std::uint8_t b : {0, 1}) {
      auto next = post(set, subsets[i], b);
      auto it = index.find(next);
      if (it == index.end()) {
        if (subsets.size() >= subset_cap)
          throw BudgetExceeded(kOrigin, "subset construction exceeded the cap of " + std::to_string(subset_cap) + " states");
        it = index.emplace(next, static_cast<State>(subsets.size())).first;
        subsets.push_back(std::move(next));
      }
      row[b] = it->second;
    }
    delta.push_back(row);
  }
  BranchSet out(subsets.size(), {0}, Acceptance::Parity);
  std::vector<Priority> prio(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    prio[i] = subsets[i].empty() ? 1 : 0;
    for (std::uint8_t b : {0, 1}) out.add_transition(static_cast<State>(i), b, delta[i][b]);
  }
  out.set_priorities({prio});
  out.set_name(set.name());
  return out;
}

BranchSet trim_unreachable(const BranchSet& set) {
  auto seen = reachable_mask(set);
  std::vector<State> renum(set.size(), 0);
  std::size_t n = 0;
  for (State q = 0; q < set.size(); ++q)
    if (seen[q]) renum[q] = static_cast<State>(n++);
  std::vector<State> init;
  for (State q : set.initial()) init.push_back(renum[q]);
  BranchSet out(n, init, set.acceptance());
  std::vector<std::vector<Priority>> maps(set.coordinates(), std::vector<Priority>(n, 0));
  std::vector<std::string> labels;
  for (State q = 0; q < set.size(); ++q) {
    if (!seen[q]) continue;
    for (std::size_t k = 0; k < set.coordinates(); ++k) maps[k][renum[q]] = set.priority(q, k);
    if (!set.labels().empty()) labels.push_back(set.labels()[q]);
    for (std::uint8_t b : {0, 1})
      for (State r : set.successors(q, b)) out.add_transition(renum[q], b, renum[r]);
  }
  out.set_priorities(std::move(maps));
  out.set_labels(std::move(labels));
  out.set_name(set.name());
  return out;
}

BranchSet complement_general(const BranchSet& set, std::size_t subset_cap) {
  if (set.initial().empty()) return universal();
  if (set.is_complementable()) return complement(set);
  if (set.acceptance() == Acceptance::Parity && set.is_deterministic()) return complement(complete(set));
  if (set.acceptance() == Acceptance::Safety || all_priorities_even(set)) return complement(determinize_safety(set, subset_cap));
  if (set.acceptance() == Acceptance::ProductParity && set.is_deterministic()) {
    // Not (c_1 and ... and c_k) is the union of the single-map complements.
    BranchSet full = complete(set);
    std::optional<BranchSet> acc;
    for (const auto& m : full.priority_maps()) {
      BranchSet one(full.size(), full.initial(), Acceptance::Parity);
      for (State q = 0; q < full.size(); ++q)
        for (std::uint8_t b : {0, 1})
          for (State r : full.successors(q, b)) one.add_transition(q, b, r);
      one.set_priorities({m});
      one.set_labels(full.labels());
      BranchSet c = complement(one);
      acc = acc ? unite(*acc, c) : c;
    }
    acc->set_name(set.name().empty() ? "" : "not_" + set.name());
    return *acc;
  }
  if (set.initial().size() > 1) {
    std::optional<BranchSet> acc;
    for (State q : set.initial()) {
      BranchSet part = set;
      part.set_initial({q});
      BranchSet c = complement_general(trim_unreachable(part), subset_cap);
      acc = acc ? intersect(*acc, c) : c;
    }
    return *acc;
  }
  throw PreconditionError(kOrigin, "cannot complement '" + set.name() +
                                       "': nondeterministic automaton with odd priorities (only deterministic parity, safety, and "
                                       "unions of those are supported)");
}

BranchSet intersect(const BranchSet& a, const BranchSet& b) {
  std::unordered_map<std::uint64_t, State> index;
  std::vector<std::pair<State, State>> pairs;
  auto key = [](State p, State q) { return (static_cast<std::uint64_t>(p) << 32) | q; };
  auto get = [&](State p, State q) {
    auto [it, fresh] = index.emplace(key(p, q), static_cast<State>(pairs.size()));
    if (fresh) pairs.emplace_back(p, q);
    return it->second;
  };
  std::vector<State> init;
  for (State p : a.initial())
    for (State q : b.initial()) init.push_back(get(p, q));
  std::vector<std::array<std::vector<State>, 2>> delta;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    std::array<std::vector<State>, 2> row;
    for (std::uint8_t bit : {0, 1})
      for (State p2 : a.successors(p, bit))
        for (State q2 : b.successors(q, bit)) row[bit].push_back(get(p2, q2));
    delta.push_back(std::move(row));
  }
  std::vector<std::vector<Priority>> maps;
  auto lift = [&](const BranchSet& side, bool left) {
    for (std::size_t c = 0; c < side.coordinates(); ++c) {
      std::vector<Priority> m(pairs.size());
      bool odd = false;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        m[i] = side.priority(left ? pairs[i].first : pairs[i].second, c);
        odd = odd || m[i] % 2 == 1;
      }
      // A map with only even values accepts every run.
      if (odd) maps.push_back(std::move(m));
    }
  };
  lift(a, true);
  lift(b, false);
  BranchSet out(pairs.size(), init, acceptance_for(maps.size()));
  std::vector<std::string> labels;
  const bool labelled = !a.labels().empty() || !b.labels().empty();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    for (std::uint8_t bit : {0, 1})
      for (State r : delta[i][bit]) out.add_transition(static_cast<State>(i), bit, r);
    if (labelled) labels.push_back(a.label(p) + "|" + b.label(q));
  }
  out.set_priorities(std::move(maps));
  out.set_labels(std::move(labels));
  return out;
}

BranchSet unite(const BranchSet& a, const BranchSet& b) {
  const std::size_t k = std::max(a.coordinates(), b.coordinates());
  const std::size_t n = a.size() + b.size();
  std::vector<State> init(a.initial().begin(), a.initial().end());
  for (State q : b.initial()) init.push_back(static_cast<State>(a.size() + q));
  BranchSet out(n, init, acceptance_for(k));
  std::vector<std::vector<Priority>> maps(k, std::vector<Priority>(n, 0));
  for (std::size_t c = 0; c < a.coordinates(); ++c)
    for (State q = 0; q < a.size(); ++q) maps[c][q] = a.priority(q, c);
  for (std::size_t c = 0; c < b.coordinates(); ++c)
    for (State q = 0; q < b.size(); ++q) maps[c][a.size() + q] = b.priority(q, c);
  for (State q = 0; q < a.size(); ++q)
    for (std::uint8_t bit : {0, 1})
      for (State r : a.successors(q, bit)) out.add_transition(q, bit, r);
  for (State q = 0; q < b.size(); ++q)
    for (std::uint8_t bit : {0, 1})
      for (State r : b.successors(q, bit)) out.add_transition(static_cast<State>(a.size() + q), bit, static_cast<State>(a.size() + r));
  out.set_priorities(std::move(maps));
  if (!a.labels().empty() || !b.labels().empty()) {
    std::vector<std::string> labels;
    for (State q = 0; q < a.size(); ++q) labels.push_back(a.label(q));
    for (State q = 0; q < b.size(); ++q) labels.push_back(b.label(q));
    out.set_labels(std::move(labels));
  }
  return out;
}

BranchSet residual(const BranchSet& set, const Word& sigma) {
  std::vector<State> cur = set.initial();
  for (auto bit : sigma) cur = post(set, cur, bit);
  BranchSet out = set;
  out.set_initial(std::move(cur));
  return out;
}

// ------------------------------------------------------------- standard sets

BranchSet universal() {
  BranchSet s(1, {0}, Acceptance::Parity);
  s.add_transition(0, 0, 0);
  s.add_transition(0, 1, 0);
  s.set_name("universal");
  return s;
}

BranchSet empty_set() {
  BranchSet s(1, {0}, Acceptance::Parity);
  s.add_transition(0, 0, 0);
  s.add_transition(0, 1, 0);
  s.set_priority(0, 1);
  s.set_name("empty");
  return s;
}

BranchSet starts_with(const Word& sigma) {
  const std::size_t n = sigma.size();
  // States 0..n along sigma (n = accepting sink), n+1 = rejecting sink.
  BranchSet s(n + 2, {0}, Acceptance::Parity);
  const State accept = static_cast<State>(n), reject = static_cast<State>(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    s.add_transition(static_cast<State>(i), sigma[i], static_cast<State>(i + 1));
    s.add_transition(static_cast<State>(i), static_cast<std::uint8_t>(1 - sigma[i]), reject);
  }
  for (std::uint8_t b : {0, 1}) {
    s.add_transition(accept, b, accept);
    s.add_transition(reject, b, reject);
  }
  s.set_priority(reject, 1);
  s.set_name("starts" + to_string(sigma));
  return s;
}

BranchSet infinitely_many(std::uint8_t bit) {
  // State 1 is entered on `bit` (priority 2), state 0 otherwise (priority 1).
  BranchSet s(2, {0}, Acceptance::Parity);
  for (State q : {0u, 1u}) {
    s.add_transition(q, bit, 1);
    s.add_transition(q, static_cast<std::uint8_t>(1 - bit), 0);
  }
  s.set_priorities({{1, 2}});
  s.set_name(bit ? "inf1" : "inf0");
  return s;
}

BranchSet singleton(const Lasso& eta) {
  const Lasso l = eta.canonical();
  const std::size_t u = l.prefix.size(), v = l.period.size();
  BranchSet s(u + v, {0}, Acceptance::Safety);
  for (std::size_t i = 0; i + 1 < u + v; ++i) s.add_transition(static_cast<State>(i), l.at(i), static_cast<State>(i + 1));
  s.add_transition(static_cast<State>(u + v - 1), l.at(u + v - 1), static_cast<State>(u));
  s.set_name(to_string(l));
  return s;
}

BranchSet from_lassos(const std::vector<Lasso>& lassos) {
  std::vector<Lasso> uniq;
  for (const Lasso& l : lassos)
    if (std::find(uniq.begin(), uniq.end(), l) == uniq.end()) uniq.push_back(l);
  BranchSet acc(0, {}, Acceptance::Safety);
  for (const Lasso& l : uniq) acc = unite(acc, singleton(l));
  return acc;
}

bool is_primitive(const Word& w) {
  if (w.empty()) return false;
  for (std::size_t p = 1; p < w.size(); ++p) {
    if (w.size() % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < w.size() && periodic; ++i) periodic = w[i] == w[i - p];
    if (periodic) return false;
  }
  return true;
}

bool conjugate(const Word& a, const Word& b) {
  if (a.size() != b.size()) return false;
  Word r = b;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (r == a) return true;
    std::rotate(r.begin(), r.begin() + 1, r.end());
  }
  return a.empty();
}

BranchSet eventually_periodic(const std::vector<Word>& patterns) {
  if (patterns.empty()) throw PreconditionError(kOrigin, "eventually_periodic needs at least one pattern");
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (!is_primitive(patterns[i])) throw PreconditionError(kOrigin, "pattern '" + to_string(patterns[i]) + "' is not primitive");
    for (std::size_t j = 0; j < i; ++j)
      if (conjugate(patterns[i], patterns[j]))
        throw PreconditionError(kOrigin,
                                "patterns '" + to_string(patterns[j]) + "' and '" + to_string(patterns[i]) + "' are conjugate");
  }
  std::vector<std::size_t> lens;
  for (const Word& w : patterns) lens.push_back(w.size());
  std::sort(lens.rbegin(), lens.rend());
  // Windows this long cannot be periodic for two different patterns.
  const std::size_t width = lens.size() == 1 ? lens[0] : lens[0] + lens[1];
  if (width > 14) throw PreconditionError(kOrigin, "patterns too long for the window construction");

  // State for a word of length l < width: (1 << l) - 1 + value; windows of
  // full width come last.
  auto state_of = [](std::size_t len, std::uint32_t value) { return static_cast<State>((std::uint32_t{1} << len) - 1 + value); };
  const std::size_t total = (std::size_t{1} << (width + 1)) - 1;
  BranchSet s(total, {0}, Acceptance::Parity);
  std::vector<Priority> prio(total, 0);

  auto good_window = [&](std::uint32_t value) {
    for (const Word& w : patterns) {
      for (std::size_t phase = 0; phase < w.size(); ++phase) {
        bool ok = true;
        for (std::size_t i = 0; i < width && ok; ++i) {
          std::uint8_t bit = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1u);
          ok = bit == w[(phase + i) % w.size()];
        }
        if (ok) return true;
      }
    }
    return false;
  };

  const std::uint32_t mask = (std::uint32_t{1} << width) - 1;
  for (std::size_t len = 0; len <= width; ++len) {
    for (std::uint32_t value = 0; value < (std::uint32_t{1} << len); ++value) {
      State q = state_of(len, value);
      for (std::uint8_t b : {0, 1}) {
        if (len < width)
          s.add_transition(q, b, state_of(len + 1, (value << 1) | b));
        else
          s.add_transition(q, b, state_of(width, ((value << 1) | b) & mask));
      }
      if (len == width && !good_window(value)) prio[q] = 1;
    }
  }
  s.set_priorities({prio});
  std::string name = "ev";
  for (const Word& w : patterns) name += "_" + to_string(w);
  s.set_name(name);
  return s;
}

}  // namespace pozlog::omega
