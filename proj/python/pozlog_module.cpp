#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pozlog/automata.hpp"
#include "pozlog/cli.hpp"
#include "pozlog/error.hpp"
#include "pozlog/evaluator.hpp"
#include "pozlog/model_lab.hpp"
#include "pozlog/omega_extract.hpp"
#include "pozlog/registry.hpp"

namespace py = pybind11;
using namespace pozlog;

namespace {

BranchSet set_from_spec(const std::string& spec) {
  auto s = cli::parse_set_spec(spec);
  if (!s) return omega::parse_branch_set(spec);
  return *s;
}

py::dict eval_dict(const EvalResult& r) {
  py::dict d;
  d["truth"] = r.truth;
  d["nodes"] = r.nodes_visited;
  if (r.trace) d["trace"] = render_trace(*r.trace);
  if (r.not_dense_witness) d["not_dense_witness"] = word_label(*r.not_dense_witness);
  if (r.matched_member) d["matched_member"] = *r.matched_member;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pozlog, m) {
  m.doc() = "Positive logics with density quantifiers over finite structures";

  py::register_exception<Error>(m, "PozlogError");

  py::class_<Structure>(m, "Structure")
      .def_static("parse", &parse_structure)
      .def("__str__", &print_structure)
      .def("__len__", &Structure::size)
      .def("element_names", &Structure::element_names)
      .def("__eq__", [](const Structure& a, const Structure& b) { return a == b; });

  py::class_<Formula>(m, "Formula")
      .def_static(
          "parse",
          [](const std::string& text, bool negation) {
            ParseOptions o;
            o.allow_negation = negation;
            return parse_formula(text, o);
          },
          py::arg("text"), py::arg("negation") = false)
      .def("__str__", &print_formula)
      .def("fragment", [](const Formula& f) { return std::string(to_string(classify_fragment(f))); })
      .def("free_variables", &Formula::free_variables);

  py::class_<BranchSet>(m, "BranchSet")
      .def_static("parse", &omega::parse_branch_set)
      .def_static("from_spec", &set_from_spec)
      .def("__str__", &omega::print_branch_set)
      .def("__len__", &BranchSet::size)
      .def("contains", [](const BranchSet& s, const std::string& lasso) { return omega::membership(parse_lasso(lasso), s); })
      .def("is_dense", [](const BranchSet& s) { return omega::is_dense(s).dense; })
      .def("density_witness",
           [](const BranchSet& s) -> std::optional<std::string> {
             auto v = omega::is_dense(s);
             if (v.dense) return std::nullopt;
             return word_label(v.witness);
           })
      .def("is_empty", [](const BranchSet& s) { return omega::is_empty(s).empty; })
      .def("equivalent", [](const BranchSet& a, const BranchSet& b) { return omega::equivalent(a, b).equivalent; })
      .def("complement", [](const BranchSet& s) { return omega::complement_general(s); })
      .def("__and__", [](const BranchSet& a, const BranchSet& b) { return omega::intersect(a, b); })
      .def("__or__", [](const BranchSet& a, const BranchSet& b) { return omega::unite(a, b); });

  py::class_<Registry>(m, "Registry")
      .def(py::init<>())
      .def("add_set", &Registry::add_set)
      .def("add_family_text",
           [](Registry& r, const std::string& text) {
             FamilyFile ff = parse_family_file(text);
             for (auto& f : ff.families) r.add_family(std::move(f));
           })
      .def("set_names", &Registry::set_names)
      .def("family_names", &Registry::family_names);

  m.def("omega_of", &omega_of);
  m.def("canonical_model",
        [](const std::vector<std::string>& lassos, const std::vector<std::string>& cones, bool share_root) {
          LassoGadgetSpec spec;
          for (const auto& l : lassos) spec.lassos.push_back(parse_lasso(l));
          for (const auto& c : cones) spec.cones.push_back(c == "-" ? Word{} : parse_word(c));
          spec.share_root = share_root;
          return canonical_model(spec);
        },
        py::arg("lassos"), py::arg("cones") = std::vector<std::string>{}, py::arg("share_root") = true);
  m.def("full_model", &full_model);
  m.def("check_theta_tl", &check_theta_tl);
  m.def("psi_A", [](const std::string& set) { return build_psi_A(set); });
  m.def("psi_fam", [](const std::string& family) { return build_psi_fam(family); });

  m.def(
      "evaluate",
      [](const Structure& s, const Formula& f, const Registry* reg, const std::string& mode, bool trace,
         const std::map<std::string, std::string>& assign) {
        EvalOptions o;
        o.mode = fragment_from_string(mode);
        o.trace = trace;
        Assignment a;
        for (const auto& [var, name] : assign) {
          auto e = s.element(name);
          if (!e) throw Error("cli", "unknown element '" + name + "'");
          a.vars[var] = *e;
        }
        return eval_dict(evaluate(s, f, a, o, reg));
      },
      py::arg("structure"), py::arg("formula"), py::arg("registry") = nullptr, py::arg("mode") = "ld1",
      py::arg("trace") = false, py::arg("assign") = std::map<std::string, std::string>{});

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
