#include <algorithm>
#include <fstream>
#include <sstream>

#include "pozlog/automata.hpp"
#include "pozlog/cli.hpp"
#include "pozlog/error.hpp"

namespace pozlog::cli {

namespace {

constexpr const char* kOrigin = "cli";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(kOrigin, "cannot read '" + p.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Word> parse_words(const std::string& text) {
  std::vector<Word> out;
  std::istringstream in(text);
  for (std::string w; std::getline(in, w, ',');) out.push_back(parse_word(w));
  return out;
}

}  // namespace

std::optional<BranchSet> parse_set_spec(const std::string& spec) {
  if (spec == "universal") return omega::universal();
  if (spec == "empty") return omega::empty_set();
  auto colon = spec.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  BranchSet s;
  if (kind == "starts")
    s = omega::starts_with(parse_word(arg));
  else if (kind == "inf" && (arg == "0" || arg == "1"))
    s = omega::infinitely_many(arg == "1");
  else if (kind == "ev")
    s = omega::eventually_periodic(parse_words(arg));
  else if (kind == "lassos")
    s = omega::from_lassos(parse_lasso_list(arg));
  else
    return std::nullopt;
  s.set_name(spec);
  return s;
}

void Workspace::add_set(const std::string& name, BranchSet set) {
  if (registry_.has_set(name) && name != "universal" && name != "empty")
    throw Error(kOrigin, "branch set '" + name + "' is defined twice");
  registry_.add_set(name, std::move(set));
}

void Workspace::open_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(kOrigin, "workspace '" + dir.string() + "' is not a directory");
  dir_ = dir;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files)
    if (f.extension() == ".omega") load_sets(f);
  for (const auto& f : files)
    if (f.extension() == ".family") load_families(f);
}

void Workspace::load_sets(const std::filesystem::path& file) {
  for (auto& s : omega::parse_branch_sets(read_file(file))) {
    std::string name = s.name();
    add_set(name, std::move(s));
  }
}

void Workspace::load_families(const std::filesystem::path& file) {
  FamilyFile ff = parse_family_file(read_file(file));
  for (auto& s : ff.sets) {
    std::string name = s.name();
    if (!registry_.has_set(name)) add_set(name, s);
  }
  for (auto& f : ff.families) {
    if (registry_.has_family(f.name)) throw Error(kOrigin, "family '" + f.name + "' is defined twice");
    FamilyReport report = validate_family(f);
    if (!report.passed()) {
      std::string msg = "family '" + f.name + "' failed validation:";
      for (const auto& s : report.failures()) msg += " " + s + ";";
      throw Error("omega-lang", msg);
    }
    registry_.add_family(std::move(f));
  }
}

void Workspace::define(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(kOrigin, "expected NAME=SPEC, got '" + assignment + "'");
  auto s = parse_set_spec(assignment.substr(eq + 1));
  if (!s) throw Error(kOrigin, "unknown set spec '" + assignment.substr(eq + 1) + "'");
  add_set(assignment.substr(0, eq), std::move(*s));
}

std::filesystem::path Workspace::resolve(const std::string& ref, const char* extension) const {
  std::filesystem::path p(ref);
  if (std::filesystem::exists(p)) return p;
  if (dir_) {
    for (auto candidate : {*dir_ / ref, *dir_ / (ref + extension)})
      if (std::filesystem::exists(candidate)) return candidate;
  }
  throw Error(kOrigin, "cannot find '" + ref + "'");
}

Structure Workspace::structure(const std::string& ref) const {
  Structure s = parse_structure(read_file(resolve(ref, ".struct")));
  s.validate();
  return s;
}

std::string Workspace::formula_text(const std::string& ref) const { return read_file(resolve(ref, ".pfl")); }

const BranchSet& Workspace::set(const std::string& ref) {
  if (!registry_.has_set(ref)) {
    auto s = parse_set_spec(ref);
    if (!s) throw Error("omega-lang", "unknown branch set '" + ref + "'");
    registry_.add_set(ref, std::move(*s));
  }
  return registry_.set(ref);
}

void Workspace::prepare(const Formula& f) {
  if (f.kind() == NodeKind::QA) set(f.symbol());
  for (const Formula& c : f.children()) prepare(c);
}

}  // namespace pozlog::cli
