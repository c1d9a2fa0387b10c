#include "pozlog/word.hpp"

#include <algorithm>

#include "pozlog/error.hpp"

namespace pozlog {

namespace {
constexpr const char* kOrigin = "omega-lang";
}

Word parse_word(std::string_view text) {
  Word w;
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(kOrigin, "bad bit '" + std::string(1, c) + "' in word '" + std::string(text) + "'");
    w.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

std::string to_string(const Word& w) {
  std::string s;
  for (auto b : w) s.push_back(static_cast<char>('0' + b));
  return s;
}

std::string word_label(const Word& w) { return w.empty() ? "-" : to_string(w); }

std::vector<Word> words_up_to(std::size_t max_length) {
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_length) continue;
    for (std::uint8_t b : {0, 1}) {
      Word w = out[i];
      w.push_back(b);
      out.push_back(std::move(w));
    }
  }
  return out;
}

bool is_prefix(const Word& prefix, const Word& of) {
  return prefix.size() <= of.size() && std::equal(prefix.begin(), prefix.end(), of.begin());
}

Lasso::Lasso(Word u, Word v) : prefix(std::move(u)), period(std::move(v)) {
  if (period.empty()) throw Error(kOrigin, "lasso period must be nonempty");
}

Lasso Lasso::canonical() const {
  Word v = period;
  // Primitive root.
  for (std::size_t p = 1; p <= v.size(); ++p) {
    if (v.size() % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < v.size() && ok; ++i) ok = v[i] == v[i - p];
    if (ok) {
      v.resize(p);
      break;
    }
  }
  Word u = prefix;
  // Roll the period back into the prefix while possible.
  while (!u.empty() && u.back() == v.back()) {
    u.pop_back();
    std::rotate(v.rbegin(), v.rbegin() + 1, v.rend());
  }
  Lasso out;
  out.prefix = std::move(u);
  out.period = std::move(v);
  return out;
}

std::uint8_t Lasso::at(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  return period[(i - prefix.size()) % period.size()];
}

Word Lasso::take(std::size_t n) const {
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = at(i);
  return w;
}

bool Lasso::extends(const Word& sigma) const { return take(sigma.size()) == sigma; }

bool Lasso::operator==(const Lasso& other) const {
  Lasso a = canonical(), b = other.canonical();
  return a.prefix == b.prefix && a.period == b.period;
}

std::strong_ordering Lasso::operator<=>(const Lasso& other) const {
  Lasso a = canonical(), b = other.canonical();
  if (auto c = a.prefix.size() + a.period.size() <=> b.prefix.size() + b.period.size(); c != 0) return c;
  if (auto c = a.prefix <=> b.prefix; c != 0) return c;
  return a.period <=> b.period;
}

Lasso parse_lasso(std::string_view text) {
  auto open = text.find('(');
  auto close = text.find(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open || close + 1 != text.size())
    throw Error(kOrigin, "bad lasso literal '" + std::string(text) + "', expected u(v)");
  Word v = parse_word(text.substr(open + 1, close - open - 1));
  if (v.empty()) throw Error(kOrigin, "lasso period must be nonempty in '" + std::string(text) + "'");
  return Lasso(parse_word(text.substr(0, open)), std::move(v));
}

std::string to_string(const Lasso& l) { return to_string(l.prefix) + "(" + to_string(l.period) + ")"; }

std::vector<Lasso> parse_lasso_list(std::string_view text) {
  std::vector<Lasso> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(parse_lasso(item));
    pos = comma + 1;
  }
  return out;
}

}  // namespace pozlog
