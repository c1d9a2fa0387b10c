#include "pozlog/family.hpp"

#include <sstream>

#include "pozlog/error.hpp"

namespace pozlog {

namespace {
constexpr const char* kOrigin = "omega-lang";

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string p; std::getline(in, p, sep);)
    if (!p.empty()) out.push_back(p);
  return out;
}
}  // namespace

bool FamilyReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::vector<std::string> FamilyReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.kind + " fail at " + c.where + (c.detail.empty() ? "" : ": " + c.detail));
  return out;
}

FamilyReport validate_family(const BranchFamily& family, std::size_t subset_cap) {
  FamilyReport report;
  const auto& chain = family.chain;
  for (std::size_t j = 0; j < chain.size(); ++j) {
    auto d = omega::is_dense(chain[j], subset_cap);
    report.checks.push_back({"density", std::to_string(j), d.dense, d.dense ? "" : "sigma=" + word_label(d.witness)});
  }
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
    std::string where = "(" + std::to_string(j) + "," + std::to_string(j + 1) + ")";
    auto up = omega::includes(chain[j], chain[j + 1], subset_cap);
    if (!up.holds) {
      report.checks.push_back({"strictness", where, false, "not included, counterexample " + to_string(*up.counterexample)});
      continue;
    }
    auto down = omega::includes(chain[j + 1], chain[j], subset_cap);
    report.checks.push_back(
        {"strictness", where, !down.holds, down.holds ? "members are equal" : "extra branch " + to_string(*down.counterexample)});
  }
  if (!chain.empty()) {
    BranchSet all = chain[0];
    for (std::size_t j = 1; j < chain.size(); ++j) all = omega::unite(all, chain[j]);
    // The union of a chain of complementable sets need not be complementable;
    // compare one inclusion at a time through the last member when possible.
    auto a = omega::includes(all, family.union_set, subset_cap);
    auto b = omega::includes(family.union_set, chain.back(), subset_cap);
    bool ok = a.holds && b.holds;
    std::string detail;
    if (!a.holds) detail = "missing " + to_string(*a.counterexample);
    if (!b.holds) detail = "extra " + to_string(*b.counterexample);
    report.checks.push_back({"union", "U", ok, detail});
  }
  return report;
}

FamilyFile parse_family_file(std::string_view text) {
  std::string automata;
  std::vector<std::pair<std::size_t, std::string>> family_lines;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::istringstream toks(raw.substr(0, raw.find('#')));
    std::string first;
    toks >> first;
    if (first == "family") {
      family_lines.emplace_back(lineno, raw.substr(0, raw.find('#')));
      automata += '\n';
    } else {
      automata += raw + '\n';
    }
  }
  FamilyFile out;
  out.sets = omega::parse_branch_sets(automata);
  auto find = [&](const std::string& name, std::size_t line) -> const BranchSet& {
    for (const auto& s : out.sets)
      if (s.name() == name) return s;
    throw SyntaxError(kOrigin, "family refers to unknown automaton '" + name + "'", line, 1);
  };
  for (const auto& [line, text_line] : family_lines) {
    std::istringstream toks(text_line);
    std::string kw, name, members, uni;
    toks >> kw >> name >> members >> uni;
    if (name.empty() || members.rfind("members=", 0) != 0 || uni.rfind("union=", 0) != 0)
      throw SyntaxError(kOrigin, "expected: family <name> members=A0,A1,... union=U", line, 1);
    BranchFamily f;
    f.name = name;
    for (const auto& m : split(members.substr(8), ',')) f.chain.push_back(find(m, line));
    if (f.chain.empty()) throw SyntaxError(kOrigin, "family needs at least one member", line, 1);
    f.union_set = find(uni.substr(6), line);
    out.families.push_back(std::move(f));
  }
  return out;
}

std::string print_family(const BranchFamily& family) {
  std::string out;
  std::string members;
  for (std::size_t j = 0; j < family.chain.size(); ++j) {
    out += omega::print_branch_set(family.chain[j]);
    members += (j ? "," : "") + family.chain[j].name();
  }
  out += omega::print_branch_set(family.union_set);
  out += "family " + family.name + " members=" + members + " union=" + family.union_set.name() + "\n";
  return out;
}

}  // namespace pozlog
