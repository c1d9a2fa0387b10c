#include <cctype>
#include <map>

#include "pozlog/error.hpp"
#include "pozlog/formula.hpp"

namespace pozlog {

namespace {

constexpr const char* kOrigin = "logic-core";

struct Token {
  enum class Kind { Open, Close, Ident, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        out.push_back({Token::Kind::End, "", line_, col_});
        return out;
      }
      char c = text_[pos_];
      if (c == '(' || c == ')') {
        out.push_back({c == '(' ? Token::Kind::Open : Token::Kind::Close, std::string(1, c), line_, col_});
        advance();
        continue;
      }
      std::size_t line = line_, col = col_;
      std::string ident;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
             text_[pos_] != ')' && text_[pos_] != '#') {
        ident.push_back(text_[pos_]);
        advance();
      }
      out.push_back({Token::Kind::Ident, std::move(ident), line, col});
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

bool is_keyword(const std::string& s) {
  return s == "and" || s == "or" || s == "not" || s == "not-atom" || s == "exists" || s == "forall" || s == "exists2" || s == "QA" ||
         s == "Qfam";
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options) : tokens_(std::move(tokens)), options_(options) {}

  bool at_end() const { return peek().kind == Token::Kind::End; }

  Formula formula() {
    const Token& open = expect(Token::Kind::Open, "'('");
    const Token& head = expect(Token::Kind::Ident, "a keyword or relation name");
    Formula f = body(head, open);
    expect(Token::Kind::Close, "')'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const { throw SyntaxError(kOrigin, msg, at.line, at.column); }

  const Token& expect(Token::Kind kind, const char* what) {
    const Token& t = peek();
    if (t.kind != kind) fail(t, std::string("expected ") + what + (t.kind == Token::Kind::End ? ", got end of input" : ", got '" + t.text + "'"));
    return next();
  }

  std::string identifier(const char* what) {
    const Token& t = expect(Token::Kind::Ident, what);
    if (is_keyword(t.text)) fail(t, "keyword '" + t.text + "' used as " + what);
    return t.text;
  }

  void bind(const Token& at, const std::string& var) {
    for (const auto& v : vars_)
      if (v == var) fail(at, "variable '" + var + "' shadows an enclosing binder");
    vars_.push_back(var);
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Open) {
      next();
      const Token& fn = expect(Token::Kind::Ident, "function name");
      std::vector<Term> args;
      while (peek().kind != Token::Kind::Close) args.push_back(term());
      next();
      if (options_.vocabulary) {
        auto arity = options_.vocabulary->function_arity(fn.text);
        if (!arity) fail(fn, "undeclared function '" + fn.text + "'");
        if (*arity != args.size()) fail(fn, "arity mismatch for function '" + fn.text + "'");
      }
      return Term::apply(fn.text, std::move(args));
    }
    const Token& id = expect(Token::Kind::Ident, "a term");
    if (is_keyword(id.text)) fail(id, "keyword '" + id.text + "' used as a term");
    bool bound = false;
    for (const auto& v : vars_) bound = bound || v == id.text;
    if (!bound && options_.vocabulary && options_.vocabulary->function_arity(id.text) == std::size_t{0})
      return Term::apply(id.text);
    return Term::var(id.text);
  }

  std::vector<Term> terms_until_close() {
    std::vector<Term> ts;
    while (peek().kind != Token::Kind::Close && peek().kind != Token::Kind::End) ts.push_back(term());
    return ts;
  }

  void check_relation(const Token& at, const std::string& rel, std::size_t arity) {
    for (auto it = rel_vars_.rbegin(); it != rel_vars_.rend(); ++it) {
      if (it->first == rel) {
        if (it->second != arity) fail(at, "arity mismatch for relation variable '" + rel + "'");
        return;
      }
    }
    if (!options_.vocabulary) return;
    auto a = options_.vocabulary->relation_arity(rel);
    if (!a) fail(at, "undeclared relation '" + rel + "'");
    if (*a != arity) fail(at, "arity mismatch for relation '" + rel + "': expected " + std::to_string(*a) + ", got " + std::to_string(arity));
  }

  Formula literal(const Token& head, bool negated) {
    std::vector<Term> ts = terms_until_close();
    if (head.text == "=") {
      if (ts.size() != 2) fail(head, "equality takes exactly two terms");
      return negated ? Formula::neg_equal(ts[0], ts[1]) : Formula::equal(ts[0], ts[1]);
    }
    if (is_keyword(head.text)) fail(head, "keyword '" + head.text + "' used as relation name");
    check_relation(head, head.text, ts.size());
    return negated ? Formula::neg_atom(head.text, std::move(ts)) : Formula::atom(head.text, std::move(ts));
  }

  Formula body(const Token& head, const Token& open) {
    const std::string& kw = head.text;
    if (kw == "and" || kw == "or") {
      std::vector<Formula> parts;
      while (peek().kind == Token::Kind::Open) parts.push_back(formula());
      return kw == "and" ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    if (kw == "not-atom") {
      const Token& rel = expect(Token::Kind::Ident, "relation name");
      return literal(rel, true);
    }
    if (kw == "not") {
      Formula inner = formula();
      if (inner.kind() == NodeKind::Atom) return Formula::neg_atom(inner.symbol(), inner.terms());
      if (inner.kind() == NodeKind::Equal) return Formula::neg_equal(inner.terms()[0], inner.terms()[1]);
      if (!options_.allow_negation) fail(open, "negation only atomic: general negation requires ld1 mode");
      return Formula::negation(std::move(inner));
    }
    if (kw == "exists" || kw == "forall") {
      const Token& at = peek();
      std::string var = identifier("variable");
      bind(at, var);
      Formula b = formula();
      vars_.pop_back();
      return kw == "exists" ? Formula::exists(var, std::move(b)) : Formula::forall(var, std::move(b));
    }
    if (kw == "exists2") {
      const Token& at = peek();
      std::string rel = identifier("relation variable");
      if (options_.vocabulary && options_.vocabulary->has_symbol(rel)) fail(at, "relation variable '" + rel + "' shadows a vocabulary symbol");
      for (const auto& r : rel_vars_)
        if (r.first == rel) fail(at, "relation variable '" + rel + "' shadows an enclosing binder");
      const Token& ar = expect(Token::Kind::Ident, "arity");
      std::size_t arity = 0;
      for (char c : ar.text) {
        if (!std::isdigit(static_cast<unsigned char>(c))) fail(ar, "bad arity '" + ar.text + "'");
        arity = arity * 10 + static_cast<std::size_t>(c - '0');
      }
      if (arity == 0) fail(ar, "relation variable arity must be >= 1");
      rel_vars_.emplace_back(rel, arity);
      Formula b = formula();
      rel_vars_.pop_back();
      return Formula::exists_rel(rel, arity, std::move(b));
    }
    if (kw == "QA" || kw == "Qfam") {
      std::string ref = identifier(kw == "QA" ? "set name" : "family name");
      expect(Token::Kind::Open, "'(' before quantifier variables");
      const Token& at0 = peek();
      std::string x0 = identifier("variable");
      const Token& at1 = peek();
      std::string x1 = identifier("variable");
      expect(Token::Kind::Close, "')' after quantifier variables");
      if (x0 == x1) fail(at1, "quantifier variables must differ");
      bind(at0, x0);
      bind(at1, x1);
      std::array<Formula, 5> psi{Formula::truth(), Formula::truth(), Formula::truth(), Formula::truth(), Formula::truth()};
      for (std::size_t i = 0; i < 5; ++i) {
        const Token& at = peek();
        if (at.kind != Token::Kind::Open) fail(at, "quantifier takes exactly five formulas");
        psi[i] = formula();
        if (i >= 3 && psi[i].free_variables().count(x1)) fail(at, "psi" + std::to_string(i) + " must not use " + x1);
      }
      vars_.pop_back();
      vars_.pop_back();
      return kw == "QA" ? Formula::qa(ref, x0, x1, std::move(psi)) : Formula::qfam(ref, x0, x1, std::move(psi));
    }
    return literal(head, false);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const ParseOptions& options_;
  std::vector<std::string> vars_;
  std::vector<std::pair<std::string, std::size_t>> rel_vars_;
};

}  // namespace

std::vector<Formula> parse_formulas(std::string_view text, const ParseOptions& options) {
  Parser p(Lexer(text).run(), options);
  std::vector<Formula> out;
  while (!p.at_end()) out.push_back(p.formula());
  return out;
}

Formula parse_formula(std::string_view text, const ParseOptions& options) {
  auto fs = parse_formulas(text, options);
  if (fs.size() != 1) throw SyntaxError(kOrigin, "expected exactly one formula, found " + std::to_string(fs.size()), 1, 1);
  return fs.front();
}

}  // namespace pozlog
