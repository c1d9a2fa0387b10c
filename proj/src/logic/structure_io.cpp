#include <cctype>
#include <sstream>

#include "pozlog/error.hpp"
#include "pozlog/structure.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "logic-core";

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

// Splits into whitespace tokens; '(' ')' and "->" become separate tokens.
std::vector<Line> tokenize_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::string cur;
    auto flush = [&] {
      if (!cur.empty()) line.tokens.push_back(std::move(cur));
      cur.clear();
    };
    for (std::size_t i = 0; i < raw.size(); ++i) {
      char c = raw[i];
      if (c == '(' || c == ')') {
        flush();
        line.tokens.emplace_back(1, c);
      } else if (c == '-' && i + 1 < raw.size() && raw[i + 1] == '>') {
        flush();
        line.tokens.emplace_back("->");
        ++i;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        flush();
      } else {
        cur.push_back(c);
      }
    }
    flush();
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void fail(const Line& line, const std::string& msg) { throw SyntaxError(kOrigin, msg, line.number, 1); }

std::pair<std::string, std::size_t> parse_symbol(const Line& line, const std::string& tok) {
  auto slash = tok.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == tok.size()) fail(line, "expected NAME/ARITY, got '" + tok + "'");
  std::size_t arity = 0;
  for (char c : tok.substr(slash + 1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) fail(line, "bad arity in '" + tok + "'");
    arity = arity * 10 + static_cast<std::size_t>(c - '0');
  }
  return {tok.substr(0, slash), arity};
}

// Groups "( a b )" or "( a b -> c )" after the symbol name.
std::vector<std::vector<std::string>> parse_groups(const Line& line, std::size_t from) {
  std::vector<std::vector<std::string>> groups;
  std::size_t i = from;
  while (i < line.tokens.size()) {
    if (line.tokens[i] != "(") {
      groups.push_back({line.tokens[i]});  // bare element for unary relations
      ++i;
      continue;
    }
    std::vector<std::string> g;
    ++i;
    while (i < line.tokens.size() && line.tokens[i] != ")") g.push_back(line.tokens[i++]);
    if (i == line.tokens.size()) fail(line, "unterminated tuple");
    ++i;
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace

Structure parse_structure(std::string_view text) {
  auto lines = tokenize_lines(text);
  Vocabulary vocab;
  std::vector<std::string> domain;
  bool have_vocab = false, have_domain = false;
  for (const Line& line : lines) {
    const std::string& kw = line.tokens[0];
    if (kw == "vocab") {
      if (have_vocab) fail(line, "duplicate vocab line");
      have_vocab = true;
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        std::string tok = line.tokens[i];
        bool is_fun = tok.rfind("fun:", 0) == 0;
        if (is_fun) tok = tok.substr(4);
        auto [name, arity] = parse_symbol(line, tok);
        try {
          if (is_fun)
            vocab.add_function(name, arity);
          else
            vocab.add_relation(name, arity);
        } catch (const Error& e) {
          fail(line, e.what());
        }
      }
    } else if (kw == "domain") {
      if (have_domain) fail(line, "duplicate domain line");
      have_domain = true;
      domain.assign(line.tokens.begin() + 1, line.tokens.end());
    } else if (kw != "rel" && kw != "fun") {
      fail(line, "unknown directive '" + kw + "'");
    }
  }
  if (!have_vocab) throw Error(kOrigin, "structure file lacks a vocab line");
  if (!have_domain) throw Error(kOrigin, "structure file lacks a domain line");

  Structure s(vocab, domain);
  auto lookup = [&](const Line& line, const std::string& name) {
    auto e = s.element(name);
    if (!e) fail(line, "unknown element '" + name + "'");
    return *e;
  };
  for (const Line& line : lines) {
    const std::string& kw = line.tokens[0];
    if (kw != "rel" && kw != "fun") continue;
    if (line.tokens.size() < 2) fail(line, "missing symbol name");
    const std::string& sym = line.tokens[1];
    if (kw == "rel") {
      auto arity = vocab.relation_arity(sym);
      if (!arity) fail(line, "undeclared relation '" + sym + "'");
      for (const auto& g : parse_groups(line, 2)) {
        if (g.size() != *arity) fail(line, "tuple arity mismatch for '" + sym + "'");
        Tuple t;
        for (const auto& n : g) t.push_back(lookup(line, n));
        s.add_tuple(sym, t);
      }
    } else {
      auto arity = vocab.function_arity(sym);
      if (!arity) fail(line, "undeclared function '" + sym + "'");
      for (const auto& g : parse_groups(line, 2)) {
        if (g.size() != *arity + 2 || g[*arity] != "->") fail(line, "expected (args -> value) for '" + sym + "'");
        Tuple args;
        for (std::size_t i = 0; i < *arity; ++i) args.push_back(lookup(line, g[i]));
        s.set_function(sym, args, lookup(line, g.back()));
      }
    }
  }
  s.validate();
  return s;
}

std::string print_structure(const Structure& s) {
  std::ostringstream out;
  out << "vocab";
  for (const auto& r : s.vocabulary().relations()) out << ' ' << r.name << '/' << r.arity;
  for (const auto& f : s.vocabulary().functions()) out << " fun:" << f.name << '/' << f.arity;
  out << "\ndomain";
  for (const auto& n : s.element_names()) out << ' ' << n;
  out << '\n';
  for (const auto& r : s.vocabulary().relations()) {
    out << "rel " << r.name;
    for (const Tuple& t : s.relation(r.name).tuples()) {
      out << " (";
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << s.name_of(t[i]);
      out << ')';
    }
    out << '\n';
  }
  for (const auto& f : s.vocabulary().functions()) {
    out << "fun " << f.name;
    Relation domain(f.arity, s.size());
    for (std::size_t i = 0; i < domain.table_size(); ++i) {
      Tuple args = domain.tuple_at(i);
      out << " (";
      for (Element a : args) out << s.name_of(a) << ' ';
      out << "-> " << s.name_of(s.apply(f.name, args)) << ')';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace pozlog
