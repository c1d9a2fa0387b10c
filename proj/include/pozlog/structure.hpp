#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pozlog {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  bool operator==(const Symbol&) const = default;
};

// Relation and function symbols. Constants are 0-ary functions.
class Vocabulary {
 public:
  Vocabulary() = default;

  // The fixed vocabulary {R0/2, R1/2, R2/2, R3/1, R4/1}.
  static Vocabulary tau_d();

  void add_relation(std::string name, std::size_t arity);
  void add_function(std::string name, std::size_t arity);

  const std::vector<Symbol>& relations() const { return relations_; }
  const std::vector<Symbol>& functions() const { return functions_; }

  std::optional<std::size_t> relation_arity(std::string_view name) const;
  std::optional<std::size_t> function_arity(std::string_view name) const;
  bool has_symbol(std::string_view name) const;

  // True when every tau_d symbol is present with its tau_d arity.
  bool contains_tau_d() const;

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<Symbol> relations_;
  std::vector<Symbol> functions_;
};

// A set of k-tuples over an n-element domain, stored as a dense bit table.
class Relation {
 public:
  Relation() = default;
  Relation(std::size_t arity, std::size_t domain_size);

  std::size_t arity() const { return arity_; }
  std::size_t domain_size() const { return domain_size_; }

  bool contains(std::span<const Element> tuple) const { return bits_[index(tuple)]; }
  void insert(std::span<const Element> tuple) { bits_[index(tuple)] = true; }
  void erase(std::span<const Element> tuple) { bits_[index(tuple)] = false; }

  // Tuple at a raw table index (mixed radix, first coordinate most significant).
  Tuple tuple_at(std::size_t index) const;
  std::size_t table_size() const { return bits_.size(); }
  bool bit(std::size_t index) const { return bits_[index]; }
  void set_bit(std::size_t index, bool value) { bits_[index] = value; }

  std::size_t count() const;
  // All tuples in lexicographic order.
  std::vector<Tuple> tuples() const;

  bool operator==(const Relation&) const = default;

 private:
  std::size_t index(std::span<const Element> tuple) const;

  std::size_t arity_ = 0;
  std::size_t domain_size_ = 0;
  std::vector<bool> bits_;
};

// A finite structure: named elements and an interpretation of every symbol.
class Structure {
 public:
  Structure() = default;
  Structure(Vocabulary vocab, std::vector<std::string> domain);

  const Vocabulary& vocabulary() const { return vocab_; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& element_names() const { return names_; }
  const std::string& name_of(Element e) const { return names_.at(e); }
  std::optional<Element> element(std::string_view name) const;

  const Relation& relation(std::string_view name) const;
  Relation& relation(std::string_view name);
  const Relation* find_relation(std::string_view name) const;

  void add_tuple(std::string_view rel, std::span<const Element> tuple);
  void add_tuple(std::string_view rel, std::initializer_list<Element> tuple) {
    add_tuple(rel, std::span<const Element>(tuple.begin(), tuple.size()));
  }
  bool holds(std::string_view rel, std::span<const Element> tuple) const {
    return relation(rel).contains(tuple);
  }

  void set_function(std::string_view fn, std::span<const Element> args, Element value);
  Element apply(std::string_view fn, std::span<const Element> args) const;
  // Whether fn(args) has been assigned; complete structures define all of them.
  bool function_defined(std::string_view fn, std::span<const Element> args) const;

  // Throws unless every function is total on domain^arity.
  void validate() const;

  // Substructure induced by `elements` (kept in the given order). The subset
  // must be closed under every function.
  Structure induced(std::span<const Element> elements) const;
  bool closed_under_functions(std::span<const Element> elements) const;

  // Image of this structure under a bijection `perm` (old index -> new index).
  // Element names move with their elements.
  Structure permuted(std::span<const Element> perm) const;

  bool operator==(const Structure&) const = default;

 private:
  struct FunctionTable {
    std::size_t arity = 0;
    std::vector<std::int64_t> values;  // -1 = undefined

    bool operator==(const FunctionTable&) const = default;
  };
  std::size_t function_index(const FunctionTable& table, std::span<const Element> args) const;

  Vocabulary vocab_;
  std::vector<std::string> names_;
  std::map<std::string, Relation, std::less<>> relations_;
  std::map<std::string, FunctionTable, std::less<>> functions_;
};

// Plain-text structure files:
//   vocab R0/2 R1/2 R2/2 R3/1 R4/1
//   domain a b c
//   rel R0 (a b) (b c)
//   fun f (a b -> c)
// '#' starts a comment.
Structure parse_structure(std::string_view text);
std::string print_structure(const Structure& s);

// Checks that `iso` (index in a -> index in b) is an isomorphism, relation by
// relation and tuple by tuple.
bool is_isomorphism(const Structure& a, const Structure& b, std::span<const Element> iso);
// Backtracking search for an isomorphism.
std::optional<std::vector<Element>> find_isomorphism(const Structure& a, const Structure& b);

}  // namespace pozlog
