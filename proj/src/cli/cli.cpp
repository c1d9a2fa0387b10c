#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pozlog/automata.hpp"
#include "pozlog/cli.hpp"
#include "pozlog/error.hpp"
#include "pozlog/evaluator.hpp"
#include "pozlog/model_lab.hpp"
#include "pozlog/omega_extract.hpp"

namespace pozlog::cli {

namespace {

using json = nlohmann::ordered_json;

struct Common {
  std::string workspace;
  std::vector<std::string> sets;
  std::vector<std::string> families;
  std::vector<std::string> defines;
  bool json = false;
};

struct EvalArgs {
  std::string structure;
  std::string formula;
  std::string formula_text;
  std::string mode = "ld1";
  std::size_t budget = 0;
  bool trace = false;
  bool witnesses = false;
  std::vector<std::string> assign;
};

struct Outcome {
  int code = 0;
  json report = json::object();
  std::string text;
};

std::string verdict_line(bool truth, const std::string& command, const std::string& witness = {}) {
  std::string line = std::string("VERDICT ") + (truth ? "true " : "false ") + command;
  if (!witness.empty()) line += " " + witness;
  return line + "\n";
}

std::vector<Word> split_words(const std::string& text) {
  std::vector<Word> out;
  std::istringstream in(text);
  for (std::string w; std::getline(in, w, ',');)
    if (!w.empty()) out.push_back(parse_word(w));
  return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cli", "cannot write '" + p.string() + "'");
  out << content;
}

// Writes to --out when given, otherwise (or for "-") returns the text for stdout.
std::string emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") return content;
  write_file(out, content);
  return {};
}

Formula load_formula(Workspace& ws, const EvalArgs& a, const Structure& m, FragmentTag mode) {
  if (a.formula.empty() == a.formula_text.empty()) throw Error("cli", "give exactly one of --formula, --formula-text");
  ParseOptions po;
  po.vocabulary = &m.vocabulary();
  po.allow_negation = mode == FragmentTag::Ld1;
  std::string text = a.formula.empty() ? a.formula_text : ws.formula_text(a.formula);
  auto parts = parse_formulas(text, po);
  Formula f = parts.size() == 1 ? parts.front() : Formula::conj(parts);
  ws.prepare(f);
  return f;
}

Assignment load_assignment(const std::vector<std::string>& items, const Structure& m) {
  Assignment asg;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("cli", "expected var=element, got '" + item + "'");
    auto e = m.element(item.substr(eq + 1));
    if (!e) throw Error("cli", "no element '" + item.substr(eq + 1) + "'");
    asg.vars[item.substr(0, eq)] = *e;
  }
  return asg;
}

std::vector<Formula> load_formula_list(Workspace& ws, const std::string& ref, const Structure& m) {
  ParseOptions po;
  po.vocabulary = &m.vocabulary();
  po.allow_negation = true;
  auto fs = parse_formulas(ws.formula_text(ref), po);
  for (const auto& f : fs) ws.prepare(f);
  return fs;
}

std::string eval_witness(const EvalResult& r) {
  if (r.not_dense_witness) return "sigma=" + word_label(*r.not_dense_witness);
  if (r.matched_member) return "member=" + std::to_string(*r.matched_member);
  if (!r.relation_witnesses.empty()) {
    const auto& [name, tuples] = *r.relation_witnesses.begin();
    return name + "=" + std::to_string(tuples.size());
  }
  return {};
}

json trace_json(const TraceNode& t) {
  json j;
  j["label"] = t.label;
  j["value"] = t.value;
  json kids = json::array();
  for (const auto& c : t.children) kids.push_back(trace_json(c));
  j["children"] = kids;
  return j;
}

Outcome cmd_eval(Workspace& ws, const EvalArgs& a, bool explain) {
  Structure m = ws.structure(a.structure);
  EvalOptions opt;
  opt.mode = fragment_from_string(a.mode);
  Formula f = load_formula(ws, a, m, opt.mode);
  if (a.budget > 0) opt.budget.max_relation_candidates = a.budget;
  opt.trace = a.trace || explain;
  opt.witnesses = a.witnesses;
  EvalResult r = evaluate(m, f, load_assignment(a.assign, m), opt, &ws.registry());

  Outcome o;
  o.code = r.truth ? 0 : 1;
  const std::string command = explain ? "explain" : "eval";
  const std::string witness = eval_witness(r);
  std::ostringstream text;
  if (explain) {
    text << "formula " << print_formula(f) << "\n";
    text << "fragment " << to_string(classify_fragment(f)) << "\n";
    text << "nodes " << r.nodes_visited << "\n";
  }
  if (r.trace) text << render_trace(*r.trace);
  for (const auto& w : a.witnesses ? r.density_witnesses : std::vector<DensityWitness>{})
    text << "witness sigma=" << word_label(w.sigma) << " eta=" << to_string(w.eta) << " anchor=" << w.anchor << "\n";
  for (const auto& [rel, tuples] : r.relation_witnesses) {
    text << "relation " << rel << " =";
    for (const auto& t : tuples) {
      text << " (";
      for (std::size_t i = 0; i < t.size(); ++i) text << (i ? " " : "") << m.name_of(t[i]);
      text << ")";
    }
    text << "\n";
  }
  text << verdict_line(r.truth, command, witness);
  o.text = text.str();

  o.report["command"] = command;
  o.report["verdict"] = r.truth;
  o.report["witness"] = witness;
  o.report["mode"] = std::string(to_string(opt.mode));
  o.report["fragment"] = std::string(to_string(classify_fragment(f)));
  o.report["nodes_visited"] = r.nodes_visited;
  json dw = json::array();
  for (const auto& w : r.density_witnesses)
    dw.push_back(json{{"sigma", word_label(w.sigma)}, {"eta", to_string(w.eta)}, {"anchor", w.anchor}});
  o.report["density_witnesses"] = dw;
  if (r.trace) o.report["trace"] = trace_json(*r.trace);
  return o;
}

Outcome cmd_omega(Workspace& ws, const std::string& ref, bool per_anchor, const std::string& out) {
  Structure m = ws.structure(ref);
  const std::string stem = std::filesystem::path(ref).stem().string();
  Outcome o;
  json automata = json::array();
  std::string text;
  if (per_anchor) {
    for (auto& [anchor, set] : omega_per_anchor(m)) {
      set.set_name(stem + "@" + m.name_of(anchor));
      text += omega::print_branch_set(set);
      automata.push_back(json{{"name", set.name()}, {"anchor", m.name_of(anchor)}, {"states", set.size()}});
    }
  } else {
    BranchSet set = omega_of(m);
    set.set_name(stem);
    text = omega::print_branch_set(set);
    automata.push_back(json{{"name", set.name()}, {"states", set.size()}});
  }
  o.text = emit(out, text);
  o.report["command"] = "omega";
  o.report["automata"] = automata;
  o.report["text"] = text;
  return o;
}

Outcome cmd_density(Workspace& ws, const std::string& set_ref, const std::string& omega_ref, const std::string& minus) {
  if (set_ref.empty() == omega_ref.empty()) throw Error("cli", "give exactly one of --set, --omega-of");
  BranchSet target;
  if (!set_ref.empty())
    target = ws.set(set_ref);
  else if (ws.registry().has_set(omega_ref))
    target = ws.registry().set(omega_ref);
  else
    target = omega_of(ws.structure(omega_ref));
  if (!minus.empty()) target = omega::intersect(target, ws.registry().complement_of(ws.set(minus).name()));
  auto v = omega::is_dense(target);
  Outcome o;
  o.code = v.dense ? 0 : 1;
  const std::string witness = v.dense ? "" : word_label(v.witness);
  o.text = v.dense ? "DENSE\n" : "NOT DENSE witness=" + witness + "\n";
  o.text += verdict_line(v.dense, "density", witness);
  o.report["command"] = "density";
  o.report["verdict"] = v.dense;
  o.report["witness"] = witness;
  return o;
}

Outcome cmd_check_family(const std::string& file, const std::string& name) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cli", "cannot read '" + file + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  FamilyFile ff = parse_family_file(buf.str());
  Outcome o;
  bool all = true;
  json fams = json::array();
  std::ostringstream text;
  for (const auto& f : ff.families) {
    if (!name.empty() && f.name != name) continue;
    FamilyReport r = validate_family(f);
    json checks = json::array();
    for (const auto& c : r.checks) {
      text << (c.passed ? "PASS " : "FAIL ") << f.name << " " << c.kind << " " << c.where;
      if (!c.detail.empty()) text << " " << c.detail;
      text << "\n";
      checks.push_back(json{{"kind", c.kind}, {"where", c.where}, {"passed", c.passed}, {"detail", c.detail}});
    }
    text << "NOTE " << f.name << " countability " << r.countability << "\n";
    fams.push_back(json{{"name", f.name}, {"passed", r.passed()}, {"countability", r.countability}, {"checks", checks}});
    all = all && r.passed();
  }
  if (fams.empty()) throw Error("cli", name.empty() ? "no family in '" + file + "'" : "no family '" + name + "'");
  text << verdict_line(all, "check-family");
  o.code = all ? 0 : 1;
  o.text = text.str();
  o.report["command"] = "check-family";
  o.report["verdict"] = all;
  o.report["families"] = fams;
  return o;
}

Outcome cmd_ls(Workspace& ws, const std::string& structure, const std::string& formula, std::size_t size) {
  Structure m = ws.structure(structure);
  Fragment fragment = Fragment::closure(load_formula_list(ws, formula, m));
  LsResult r = ls_search(m, fragment, size, &ws.registry());
  Outcome o;
  o.code = r.found ? 0 : 1;
  std::vector<std::string> names;
  for (Element e : r.elements) names.push_back(m.name_of(e));
  std::ostringstream text;
  text << "fragment " << fragment.formulas().size() << " formulas, " << r.subsets_checked << " subsets checked\n";
  if (r.found) text << print_structure(*r.substructure);
  text << verdict_line(r.found, "ls-search", join(names));
  o.text = text.str();
  o.report["command"] = "ls-search";
  o.report["verdict"] = r.found;
  o.report["elements"] = names;
  o.report["subsets_checked"] = r.subsets_checked;
  return o;
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("POZLOG_SEED");
  if (!s || !*s) return 0;
  char* end = nullptr;
  std::uint64_t v = std::strtoull(s, &end, 10);
  if (*end) throw Error("cli", std::string("POZLOG_SEED must be a number, got '") + s + "'");
  return v;
}

Outcome cmd_los(Workspace& ws, const std::vector<std::string>& factors, std::size_t principal, const std::string& formula) {
  UltraSetup setup;
  for (const auto& f : factors) setup.factors.push_back(ws.structure(f));
  if (principal >= setup.factors.size()) throw Error("cli", "--principal is out of range");
  setup.filter = Ultrafilter::principal(setup.factors.size(), principal);
  auto formulas = load_formula_list(ws, formula, setup.factors.front());
  const std::uint64_t seed = seed_from_env();
  LosReport r = los_check(setup, formulas, seed, &ws.registry());
  Outcome o;
  o.code = r.passed() ? 0 : 1;
  std::ostringstream text;
  text << "factors " << setup.factors.size() << " principal " << principal << " seed " << seed << "\n";
  text << "formulas " << r.formulas << " checks " << r.checks
       << (r.exhaustive ? " exhaustive" : " sampled cap=" + std::to_string(r.sample_cap)) << "\n";
  text << "isomorphic " << (r.isomorphic ? "yes" : "no") << "\n";
  for (const auto& v : r.violations) text << "violation " << v << "\n";
  text << verdict_line(r.passed(), "los-check", r.passed() ? "" : std::to_string(r.violations.size()));
  o.text = text.str();
  o.report["command"] = "los-check";
  o.report["verdict"] = r.passed();
  o.report["seed"] = seed;
  o.report["formulas"] = r.formulas;
  o.report["checks"] = r.checks;
  o.report["exhaustive"] = r.exhaustive;
  o.report["isomorphic"] = r.isomorphic;
  o.report["violations"] = r.violations;
  return o;
}

struct GenArgs {
  std::string lassos;
  std::string cones;
  bool separate_roots = false;
  std::string language_out;
  std::string patterns;
  std::string name = "F";
  std::string shared, left, right;
  std::string out_dir = ".";
  std::string spec;
  std::string out;
};

Outcome gen_structure(const Structure& s, const std::string& kind, const std::string& out) {
  Outcome o;
  std::string text = print_structure(s);
  o.text = emit(out, text);
  o.report["command"] = "gen " + kind;
  o.report["elements"] = s.size();
  o.report["text"] = text;
  return o;
}

Outcome cmd_gen_canonical(const GenArgs& a) {
  LassoGadgetSpec spec;
  if (!a.lassos.empty()) spec.lassos = parse_lasso_list(a.lassos);
  spec.cones = split_words(a.cones);
  spec.share_root = !a.separate_roots;
  if (!a.language_out.empty()) {
    BranchSet lang = gadget_language(spec);
    lang.set_name("language");
    write_file(a.language_out, omega::print_branch_set(lang));
  }
  return gen_structure(canonical_model(spec), "canonical", a.out);
}

Outcome cmd_gen_family(const GenArgs& a) {
  auto patterns = split_words(a.patterns);
  if (patterns.empty()) throw Error("cli", "--patterns is empty");
  BranchFamily f = family_gen(patterns.size(), patterns, a.name);
  Outcome o;
  std::string text = print_family(f);
  o.text = emit(a.out, text);
  o.report["command"] = "gen family";
  o.report["name"] = f.name;
  o.report["members"] = f.member_count();
  o.report["text"] = text;
  return o;
}

Outcome cmd_gen_scenario(const GenArgs& a) {
  Scenario21 sc = theorem21_scenario(split_words(a.shared), split_words(a.left), split_words(a.right));
  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "F.family", print_family(sc.left));
  write_file(dir / "G.family", print_family(sc.right));
  write_file(dir / "union.struct", print_structure(sc.union_model));
  write_file(dir / "a0.struct", print_structure(sc.a0_model));
  write_file(dir / "phi.pfl", print_formula(sc.phi) + "\n");
  Outcome o;
  std::ostringstream text;
  json cross = json::array();
  for (const auto& c : sc.cross) {
    text << "cross F." << c.left << " G." << c.right << " " << (c.equivalent ? "equal" : "distinct") << "\n";
    cross.push_back(json{{"left", c.left}, {"right", c.right}, {"equivalent", c.equivalent}});
  }
  text << "wrote F.family G.family union.struct a0.struct phi.pfl to " << dir.string() << "\n";
  o.text = text.str();
  o.report["command"] = "gen scenario21";
  o.report["cross"] = cross;
  return o;
}

Outcome cmd_gen_set(const GenArgs& a) {
  auto eq = a.spec.find('=');
  std::string name = eq == std::string::npos ? a.spec : a.spec.substr(0, eq);
  auto s = parse_set_spec(eq == std::string::npos ? a.spec : a.spec.substr(eq + 1));
  if (!s) throw Error("cli", "unknown set spec '" + a.spec + "'");
  s->set_name(name);
  Outcome o;
  std::string text = omega::print_branch_set(*s);
  o.text = emit(a.out, text);
  o.report["command"] = "gen set";
  o.report["name"] = name;
  o.report["states"] = s->size();
  o.report["text"] = text;
  return o;
}

void add_eval_options(CLI::App* sub, EvalArgs& a) {
  sub->add_option("--structure", a.structure, "Structure file or workspace name")->required();
  sub->add_option("--formula", a.formula, "Formula file or workspace name");
  sub->add_option("--formula-text", a.formula_text, "Formula given inline");
  sub->add_option("--mode", a.mode, "fo, sigma11, ld, ld-, ld0 or ld1")->capture_default_str();
  sub->add_option("--budget", a.budget, "Relation candidates per second-order quantifier");
  sub->add_option("--assign", a.assign, "Free variable assignment var=element");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive logics with density quantifiers over finite structures", "pozlog"};
  app.fallthrough();
  app.require_subcommand(1);
  Common common;
  app.add_option("--workspace", common.workspace, "Directory of .omega, .family, .struct and .pfl files");
  app.add_option("--sets", common.sets, "Automaton file with named branch sets");
  app.add_option("--family", common.families, "Family file");
  app.add_option("--define", common.defines, "Inline set NAME=SPEC");
  app.add_flag("--json", common.json, "JSON report instead of text");

  EvalArgs eval_args, explain_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a formula on a structure");
  add_eval_options(eval, eval_args);
  eval->add_flag("--trace", eval_args.trace, "Print the evaluation trace");
  eval->add_flag("--witnesses", eval_args.witnesses, "Density witnesses for short prefixes");

  auto* explain = app.add_subcommand("explain", "Evaluate with the full trace");
  add_eval_options(explain, explain_args);

  std::string omega_structure, omega_out;
  bool per_anchor = false;
  auto* omega_cmd = app.add_subcommand("omega", "Extract the represented branches of a structure");
  omega_cmd->add_option("--structure", omega_structure)->required();
  omega_cmd->add_flag("--per-anchor", per_anchor, "One automaton per anchor");
  omega_cmd->add_option("--out", omega_out);

  std::string density_set, density_omega, density_minus;
  auto* density = app.add_subcommand("density", "Density of a branch set");
  density->add_option("--set", density_set, "Set name or inline spec");
  density->add_option("--omega-of", density_omega, "Structure (or saved extraction) to take the branches of");
  density->add_option("--minus", density_minus, "Set to subtract");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate models, families and sets");
  gen->require_subcommand(1);
  auto* canonical = gen->add_subcommand("canonical", "Canonical model of lasso gadgets and cones");
  canonical->add_option("--lassos", gen_args.lassos, "Comma separated lassos, e.g. 0(1),1(0)");
  canonical->add_option("--cones", gen_args.cones, "Comma separated prefixes");
  canonical->add_flag("--separate-roots", gen_args.separate_roots);
  canonical->add_option("--language-out", gen_args.language_out, "Also write the represented branches");
  canonical->add_option("--out", gen_args.out);
  auto* full = gen->add_subcommand("full", "One-element model representing every branch");
  full->add_option("--out", gen_args.out);
  auto* family = gen->add_subcommand("family", "Chain of eventually periodic sets");
  family->add_option("--patterns", gen_args.patterns, "Comma separated words")->required();
  family->add_option("--name", gen_args.name)->capture_default_str();
  family->add_option("--out", gen_args.out);
  auto* scenario = gen->add_subcommand("scenario21", "Two families sharing only their union");
  scenario->add_option("--shared", gen_args.shared);
  scenario->add_option("--left", gen_args.left)->required();
  scenario->add_option("--right", gen_args.right)->required();
  scenario->add_option("--out-dir", gen_args.out_dir)->capture_default_str();
  auto* set_cmd = gen->add_subcommand("set", "Standard set as an automaton");
  set_cmd->add_option("--spec", gen_args.spec, "NAME=SPEC or SPEC")->required();
  set_cmd->add_option("--out", gen_args.out);

  std::string ls_structure, ls_formula;
  std::size_t ls_size = 1;
  auto* ls = app.add_subcommand("ls-search", "Smallest substructure preserving a fragment downward");
  ls->add_option("--structure", ls_structure)->required();
  ls->add_option("--formula", ls_formula, "Formula list; its subformula closure is used")->required();
  ls->add_option("--size", ls_size, "Largest size to try")->required();

  std::vector<std::string> los_factors;
  std::size_t los_principal = 0;
  std::string los_formula;
  auto* los = app.add_subcommand("los-check", "Transfer through a principal ultraproduct");
  los->add_option("--factor", los_factors, "Factor structure (repeat)")->required();
  los->add_option("--principal", los_principal, "Index of the generating factor")->capture_default_str();
  los->add_option("--formula", los_formula, "Formula list")->required();

  std::string fam_file, fam_name;
  auto* check = app.add_subcommand("check-family", "Validate a family file");
  check->add_option("--file", fam_file)->required();
  check->add_option("--name", fam_name);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[cli]: " << e.what() << "\n";
    return 2;
  }

  try {
    Workspace ws;
    if (!common.workspace.empty()) ws.open_directory(common.workspace);
    for (const auto& f : common.sets) ws.load_sets(f);
    for (const auto& f : common.families) ws.load_families(f);
    for (const auto& d : common.defines) ws.define(d);

    Outcome o;
    if (eval->parsed())
      o = cmd_eval(ws, eval_args, false);
    else if (explain->parsed())
      o = cmd_eval(ws, explain_args, true);
    else if (omega_cmd->parsed())
      o = cmd_omega(ws, omega_structure, per_anchor, omega_out);
    else if (density->parsed())
      o = cmd_density(ws, density_set, density_omega, density_minus);
    else if (canonical->parsed())
      o = cmd_gen_canonical(gen_args);
    else if (full->parsed())
      o = gen_structure(full_model(), "full", gen_args.out);
    else if (family->parsed())
      o = cmd_gen_family(gen_args);
    else if (scenario->parsed())
      o = cmd_gen_scenario(gen_args);
    else if (set_cmd->parsed())
      o = cmd_gen_set(gen_args);
    else if (ls->parsed())
      o = cmd_ls(ws, ls_structure, ls_formula, ls_size);
    else if (los->parsed())
      o = cmd_los(ws, los_factors, los_principal, los_formula);
    else if (check->parsed())
      o = cmd_check_family(fam_file, fam_name);

    if (common.json) {
      o.report["exit"] = o.code;
      out << o.report.dump(2) << "\n";
    } else {
      out << o.text;
    }
    return o.code;
  } catch (const Error& e) {
    err << "error[" << e.origin() << "]: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace pozlog::cli
