#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pozlog/formula.hpp"
#include "pozlog/registry.hpp"
#include "pozlog/structure.hpp"

namespace pozlog::cli {

// Named objects available to a command: the builtin sets, files passed with
// --sets / --family, and everything in an optional workspace directory
// (*.omega, *.family, and *.struct / *.pfl looked up by name).
class Workspace {
 public:
  void open_directory(const std::filesystem::path& dir);
  void load_sets(const std::filesystem::path& file);
  void load_families(const std::filesystem::path& file);
  // Adds NAME=SPEC, see parse_set_spec.
  void define(const std::string& assignment);

  Structure structure(const std::string& ref) const;
  std::string formula_text(const std::string& ref) const;
  // Registered set, or a standard set written inline (registered on use).
  const BranchSet& set(const std::string& ref);
  // Registers inline specs used by the formula's QA nodes.
  void prepare(const Formula& f);

  Registry& registry() { return registry_; }

 private:
  std::filesystem::path resolve(const std::string& ref, const char* extension) const;
  void add_set(const std::string& name, BranchSet set);

  std::optional<std::filesystem::path> dir_;
  Registry registry_;
};

// Standard sets written inline: universal, empty, starts:<word>,
// inf:<bit>, ev:<w1>,<w2>,..., lassos:<u(v)>,...
std::optional<BranchSet> parse_set_spec(const std::string& spec);

// Runs one command line (args excludes the program name). Returns the exit
// code: 0 true / success, 1 false, 2 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pozlog::cli
