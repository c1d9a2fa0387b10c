#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pozlog {

// Finite binary word; each entry is 0 or 1.
using Word = std::vector<std::uint8_t>;

Word parse_word(std::string_view text);  // "0110"; "" is the empty word
std::string to_string(const Word& w);
// "-" for the empty word, otherwise the digits.
std::string word_label(const Word& w);

// All words of length <= max_length in shortlex order.
std::vector<Word> words_up_to(std::size_t max_length);
bool is_prefix(const Word& prefix, const Word& of);

// An ultimately periodic branch u.v^omega.
struct Lasso {
  Word prefix;
  Word period;  // nonempty

  Lasso() = default;
  Lasso(Word u, Word v);

  // Shortest prefix and primitive period; two lassos denote the same branch
  // iff their canonical forms are equal.
  Lasso canonical() const;
  std::uint8_t at(std::size_t i) const;
  Word take(std::size_t n) const;
  bool extends(const Word& sigma) const;

  bool operator==(const Lasso& other) const;
  std::strong_ordering operator<=>(const Lasso& other) const;
};

Lasso parse_lasso(std::string_view text);  // "01(10)" = 01.(10)^omega
std::string to_string(const Lasso& l);
std::vector<Lasso> parse_lasso_list(std::string_view text);  // "0(1),1(0)"

}  // namespace pozlog
