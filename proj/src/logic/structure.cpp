#include "pozlog/structure.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "pozlog/error.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "logic-core";
constexpr std::size_t kMaxTable = std::size_t{1} << 24;

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kMaxTable / base) {
      throw Error(kOrigin, "interpretation table too large: " + std::to_string(base) + "^" + std::to_string(exp));
    }
    r *= base;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Vocabulary

Vocabulary Vocabulary::tau_d() {
  Vocabulary v;
  v.add_relation("R0", 2);
  v.add_relation("R1", 2);
  v.add_relation("R2", 2);
  v.add_relation("R3", 1);
  v.add_relation("R4", 1);
  return v;
}

void Vocabulary::add_relation(std::string name, std::size_t arity) {
  if (arity == 0) throw Error(kOrigin, "relation '" + name + "' must have arity >= 1");
  if (has_symbol(name)) throw Error(kOrigin, "duplicate symbol '" + name + "'");
  relations_.push_back({std::move(name), arity});
}

void Vocabulary::add_function(std::string name, std::size_t arity) {
  if (has_symbol(name)) throw Error(kOrigin, "duplicate symbol '" + name + "'");
  functions_.push_back({std::move(name), arity});
}

std::optional<std::size_t> Vocabulary::relation_arity(std::string_view name) const {
  for (const auto& s : relations_)
    if (s.name == name) return s.arity;
  return std::nullopt;
}

std::optional<std::size_t> Vocabulary::function_arity(std::string_view name) const {
  for (const auto& s : functions_)
    if (s.name == name) return s.arity;
  return std::nullopt;
}

bool Vocabulary::has_symbol(std::string_view name) const {
  return relation_arity(name).has_value() || function_arity(name).has_value();
}

bool Vocabulary::contains_tau_d() const {
  const Vocabulary tau = tau_d();
  for (const auto& s : tau.relations())
    if (relation_arity(s.name) != s.arity) return false;
  return true;
}

// ------------------------------------------------------------------ Relation

Relation::Relation(std::size_t arity, std::size_t domain_size)
    : arity_(arity), domain_size_(domain_size), bits_(checked_power(domain_size, arity), false) {}

std::size_t Relation::index(std::span<const Element> tuple) const {
  if (tuple.size() != arity_) throw Error(kOrigin, "tuple arity mismatch");
  std::size_t idx = 0;
  for (Element e : tuple) {
    if (e >= domain_size_) throw Error(kOrigin, "tuple element outside the domain");
    idx = idx * domain_size_ + e;
  }
  return idx;
}

Tuple Relation::tuple_at(std::size_t index) const {
  Tuple t(arity_);
  for (std::size_t i = arity_; i-- > 0;) {
    t[i] = static_cast<Element>(index % domain_size_);
    index /= domain_size_;
  }
  return t;
}

std::size_t Relation::count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

std::vector<Tuple> Relation::tuples() const {
  std::vector<Tuple> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(tuple_at(i));
  return out;
}

// ----------------------------------------------------------------- Structure

Structure::Structure(Vocabulary vocab, std::vector<std::string> domain)
    : vocab_(std::move(vocab)), names_(std::move(domain)) {
  std::vector<std::string> sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(kOrigin, "duplicate element name in domain");
  for (const auto& s : vocab_.relations()) relations_.emplace(s.name, Relation(s.arity, names_.size()));
  for (const auto& s : vocab_.functions())
    functions_.emplace(s.name, FunctionTable{s.arity, std::vector<std::int64_t>(checked_power(names_.size(), s.arity), -1)});
}

std::optional<Element> Structure::element(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Element>(i);
  return std::nullopt;
}

const Relation* Structure::find_relation(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

const Relation& Structure::relation(std::string_view name) const {
  if (const Relation* r = find_relation(name)) return *r;
  throw Error(kOrigin, "unknown relation '" + std::string(name) + "'");
}

Relation& Structure::relation(std::string_view name) {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw Error(kOrigin, "unknown relation '" + std::string(name) + "'");
  return it->second;
}

void Structure::add_tuple(std::string_view rel, std::span<const Element> tuple) { relation(rel).insert(tuple); }

std::size_t Structure::function_index(const FunctionTable& table, std::span<const Element> args) const {
  if (args.size() != table.arity) throw Error(kOrigin, "function arity mismatch");
  std::size_t idx = 0;
  for (Element e : args) {
    if (e >= names_.size()) throw Error(kOrigin, "function argument outside the domain");
    idx = idx * names_.size() + e;
  }
  return idx;
}

void Structure::set_function(std::string_view fn, std::span<const Element> args, Element value) {
  auto it = functions_.find(fn);
  if (it == functions_.end()) throw Error(kOrigin, "unknown function '" + std::string(fn) + "'");
  if (value >= names_.size()) throw Error(kOrigin, "function value outside the domain");
  it->second.values[function_index(it->second, args)] = value;
}

Element Structure::apply(std::string_view fn, std::span<const Element> args) const {
  auto it = functions_.find(fn);
  if (it == functions_.end()) throw Error(kOrigin, "unknown function '" + std::string(fn) + "'");
  std::int64_t v = it->second.values[function_index(it->second, args)];
  if (v < 0) throw Error(kOrigin, "function '" + std::string(fn) + "' undefined at the given arguments");
  return static_cast<Element>(v);
}

bool Structure::function_defined(std::string_view fn, std::span<const Element> args) const {
  auto it = functions_.find(fn);
  if (it == functions_.end()) return false;
  return it->second.values[function_index(it->second, args)] >= 0;
}

void Structure::validate() const {
  for (const auto& [name, table] : functions_) {
    if (std::find(table.values.begin(), table.values.end(), -1) != table.values.end())
      throw Error(kOrigin, "function '" + name + "' is not total on the domain");
  }
}

bool Structure::closed_under_functions(std::span<const Element> elements) const {
  if (elements.empty()) return functions_.empty();
  std::vector<bool> in(names_.size(), false);
  for (Element e : elements) in.at(e) = true;
  for (const auto& [name, table] : functions_) {
    std::size_t k = table.arity;
    std::vector<std::size_t> digits(k, 0);
    // Enumerate elements^k.
    while (true) {
      Tuple args(k);
      for (std::size_t i = 0; i < k; ++i) args[i] = elements[digits[i]];
      std::int64_t v = table.values[function_index(table, args)];
      if (v < 0 || !in[static_cast<std::size_t>(v)]) return false;
      std::size_t pos = k;
      while (pos > 0 && ++digits[pos - 1] == elements.size()) digits[--pos] = 0;
      if (pos == 0) break;
    }
  }
  return true;
}

Structure Structure::induced(std::span<const Element> elements) const {
  if (!closed_under_functions(elements)) throw Error(kOrigin, "subset is not closed under the functions");
  std::vector<std::string> names;
  std::vector<std::int64_t> position(names_.size(), -1);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    names.push_back(names_.at(elements[i]));
    position[elements[i]] = static_cast<std::int64_t>(i);
  }
  Structure sub(vocab_, names);
  for (const auto& [name, rel] : relations_) {
    Relation& target = sub.relation(name);
    for (std::size_t i = 0; i < target.table_size(); ++i) {
      Tuple local = target.tuple_at(i);
      Tuple global(local.size());
      for (std::size_t j = 0; j < local.size(); ++j) global[j] = elements[local[j]];
      if (rel.contains(global)) target.set_bit(i, true);
    }
  }
  for (const auto& [name, table] : functions_) {
    auto& target = sub.functions_.at(name);
    for (std::size_t i = 0; i < target.values.size(); ++i) {
      std::size_t rest = i;
      Tuple global(table.arity);
      for (std::size_t j = table.arity; j-- > 0;) {
        global[j] = elements[rest % elements.size()];
        rest /= elements.size();
      }
      target.values[i] = position[static_cast<std::size_t>(table.values[function_index(table, global)])];
    }
  }
  return sub;
}

Structure Structure::permuted(std::span<const Element> perm) const {
  if (perm.size() != names_.size()) throw Error(kOrigin, "permutation size mismatch");
  std::vector<std::string> names(names_.size());
  for (std::size_t i = 0; i < perm.size(); ++i) names.at(perm[i]) = names_[i];
  Structure out(vocab_, names);
  for (const auto& [name, rel] : relations_) {
    for (const Tuple& t : rel.tuples()) {
      Tuple image(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) image[j] = perm[t[j]];
      out.add_tuple(name, image);
    }
  }
  for (const auto& [name, table] : functions_) {
    for (std::size_t i = 0; i < table.values.size(); ++i) {
      if (table.values[i] < 0) continue;
      std::size_t rest = i;
      Tuple args(table.arity);
      for (std::size_t j = table.arity; j-- > 0;) {
        args[j] = perm[rest % names_.size()];
        rest /= names_.size();
      }
      out.set_function(name, args, perm[static_cast<std::size_t>(table.values[i])]);
    }
  }
  return out;
}

// ---------------------------------------------------------------- isomorphism

bool is_isomorphism(const Structure& a, const Structure& b, std::span<const Element> iso) {
  if (!(a.vocabulary() == b.vocabulary()) || a.size() != b.size() || iso.size() != a.size()) return false;
  std::vector<bool> hit(b.size(), false);
  for (Element e : iso) {
    if (e >= b.size() || hit[e]) return false;
    hit[e] = true;
  }
  for (const auto& sym : a.vocabulary().relations()) {
    const Relation& ra = a.relation(sym.name);
    const Relation& rb = b.relation(sym.name);
    if (ra.count() != rb.count()) return false;
    for (const Tuple& t : ra.tuples()) {
      Tuple image(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) image[j] = iso[t[j]];
      if (!rb.contains(image)) return false;
    }
  }
  for (const auto& sym : a.vocabulary().functions()) {
    Relation domain(sym.arity, a.size());
    for (std::size_t i = 0; i < domain.table_size(); ++i) {
      Tuple args = domain.tuple_at(i);
      Tuple image(args.size());
      for (std::size_t j = 0; j < args.size(); ++j) image[j] = iso[args[j]];
      if (iso[a.apply(sym.name, args)] != b.apply(sym.name, image)) return false;
    }
  }
  return true;
}

std::optional<std::vector<Element>> find_isomorphism(const Structure& a, const Structure& b) {
  if (!(a.vocabulary() == b.vocabulary()) || a.size() != b.size()) return std::nullopt;
  std::vector<Element> perm(a.size());
  std::iota(perm.begin(), perm.end(), Element{0});
  // Desk-scale: permutations are enumerated with a cheap unary-profile filter.
  auto profile = [](const Structure& s, Element e) {
    std::vector<std::size_t> p;
    for (const auto& sym : s.vocabulary().relations()) {
      const Relation& r = s.relation(sym.name);
      std::size_t c = 0;
      for (const Tuple& t : r.tuples())
        for (Element x : t) c += (x == e);
      p.push_back(c);
    }
    return p;
  };
  std::vector<std::vector<std::size_t>> pa(a.size()), pb(b.size());
  for (Element e = 0; e < a.size(); ++e) {
    pa[e] = profile(a, e);
    pb[e] = profile(b, e);
  }
  do {
    bool ok = true;
    for (Element e = 0; e < a.size() && ok; ++e) ok = pa[e] == pb[perm[e]];
    if (ok && is_isomorphism(a, b, perm)) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace pozlog
