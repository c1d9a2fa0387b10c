#include <sstream>

#include "pozlog/automata.hpp"
#include "pozlog/error.hpp"

namespace pozlog::omega {

namespace {

constexpr const char* kOrigin = "omega-lang";

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::uint64_t parse_uint(const std::string& text, std::size_t line) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw SyntaxError(kOrigin, "expected a number, got '" + text + "'", line, 1);
  return std::stoull(text);
}

State parse_state(const std::string& text, std::size_t line) {
  std::string t = text;
  if (!t.empty() && t[0] == 'q') t = t.substr(1);
  return static_cast<State>(parse_uint(t, line));
}

std::string value_of(const std::string& tok, const std::string& key, std::size_t line) {
  if (tok.rfind(key + "=", 0) != 0) throw SyntaxError(kOrigin, "expected " + key + "=...", line, 1);
  return tok.substr(key.size() + 1);
}

}  // namespace

std::string print_branch_set(const BranchSet& set) {
  std::ostringstream out;
  out << "omega " << (set.name().empty() ? "unnamed" : set.name()) << " states=" << set.size() << " init=";
  for (std::size_t i = 0; i < set.initial().size(); ++i) out << (i ? "," : "") << 'q' << set.initial()[i];
  out << " acc=" << to_string(set.acceptance()) << '\n';
  for (State q = 0; q < set.size(); ++q) {
    if (set.coordinates() > 0) {
      out << "prio q" << q;
      for (std::size_t c = 0; c < set.coordinates(); ++c) out << ' ' << set.priority(q, c);
      out << '\n';
    }
    for (std::uint8_t b : {0, 1})
      for (State r : set.successors(q, b)) out << "trans q" << q << ' ' << int(b) << " -> q" << r << '\n';
    if (!set.labels().empty()) out << "label q" << q << ' ' << set.labels()[q] << '\n';
  }
  return out.str();
}

std::vector<BranchSet> parse_branch_sets(std::string_view text) {
  std::vector<BranchSet> out;
  std::vector<std::vector<Priority>> maps;
  std::vector<std::string> labels;
  bool open = false;
  bool seen_prio = false;
  auto finish = [&] {
    if (!open) return;
    BranchSet& s = out.back();
    if (s.coordinates() > 0) s.set_priorities(maps);
    bool any_label = false;
    for (const auto& l : labels) any_label = any_label || !l.empty();
    if (any_label) {
      for (State q = 0; q < labels.size(); ++q)
        if (labels[q].empty()) labels[q] = "q" + std::to_string(q);
      s.set_labels(labels);
    }
    open = false;
  };

  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "omega") {
      finish();
      if (toks.size() != 5) throw SyntaxError(kOrigin, "header needs: omega <name> states=N init=... acc=...", lineno, 1);
      std::size_t n = parse_uint(value_of(toks[2], "states", lineno), lineno);
      std::vector<State> init;
      std::string init_text = value_of(toks[3], "init", lineno);
      std::istringstream parts(init_text);
      for (std::string p; std::getline(parts, p, ',');)
        if (!p.empty()) init.push_back(parse_state(p, lineno));
      std::string acc = value_of(toks[4], "acc", lineno);
      Acceptance a;
      if (acc == "safety")
        a = Acceptance::Safety;
      else if (acc == "parity")
        a = Acceptance::Parity;
      else if (acc == "product-parity")
        a = Acceptance::ProductParity;
      else
        throw SyntaxError(kOrigin, "unknown acceptance '" + acc + "'", lineno, 1);
      for (State q : init)
        if (q >= n) throw SyntaxError(kOrigin, "initial state out of range", lineno, 1);
      out.emplace_back(n, init, a);
      out.back().set_name(toks[1]);
      maps.assign(out.back().coordinates(), std::vector<Priority>(n, 0));
      labels.assign(n, "");
      seen_prio = false;
      open = true;
      continue;
    }
    if (!open) throw SyntaxError(kOrigin, "expected an 'omega' header", lineno, 1);
    BranchSet& s = out.back();
    if (toks[0] == "prio") {
      if (s.coordinates() == 0) throw SyntaxError(kOrigin, "safety automata take no priorities", lineno, 1);
      // Product-parity headers do not fix the coordinate count; the first
      // prio line does.
      if (s.acceptance() == Acceptance::ProductParity && !seen_prio && toks.size() >= 4)
        maps.assign(toks.size() - 2, std::vector<Priority>(s.size(), 0));
      seen_prio = true;
      if (toks.size() != 2 + maps.size())
        throw SyntaxError(kOrigin, "prio needs " + std::to_string(maps.size()) + " value(s)", lineno, 1);
      State q = parse_state(toks[1], lineno);
      if (q >= s.size()) throw SyntaxError(kOrigin, "state out of range", lineno, 1);
      for (std::size_t c = 0; c < maps.size(); ++c) maps[c][q] = static_cast<Priority>(parse_uint(toks[2 + c], lineno));
    } else if (toks[0] == "trans") {
      if (toks.size() != 5 || toks[3] != "->" || (toks[2] != "0" && toks[2] != "1"))
        throw SyntaxError(kOrigin, "expected: trans q <0|1> -> r", lineno, 1);
      State q = parse_state(toks[1], lineno), r = parse_state(toks[4], lineno);
      if (q >= s.size() || r >= s.size()) throw SyntaxError(kOrigin, "state out of range", lineno, 1);
      s.add_transition(q, toks[2] == "1", r);
    } else if (toks[0] == "label") {
      if (toks.size() < 3) throw SyntaxError(kOrigin, "expected: label q text", lineno, 1);
      State q = parse_state(toks[1], lineno);
      if (q >= s.size()) throw SyntaxError(kOrigin, "state out of range", lineno, 1);
      std::string rest;
      for (std::size_t i = 2; i < toks.size(); ++i) rest += (i > 2 ? " " : "") + toks[i];
      labels[q] = rest;
    } else {
      throw SyntaxError(kOrigin, "unknown directive '" + toks[0] + "'", lineno, 1);
    }
  }
  finish();
  return out;
}

BranchSet parse_branch_set(std::string_view text) {
  auto sets = parse_branch_sets(text);
  if (sets.size() != 1) throw Error(kOrigin, "expected exactly one automaton, found " + std::to_string(sets.size()));
  return sets.front();
}

}  // namespace pozlog::omega
