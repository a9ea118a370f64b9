// Python bindings: the pipeline stages and the main per-module operations,
// exchanged as JSON/text so the python side stays dependency-free.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sitl/pipeline.hpp"
#include "sitl/semantics.hpp"

namespace py = pybind11;
using namespace sitl;

namespace {

PipelineConfig config_from(const std::string& formula, const std::string& predicates_json,
                           const std::string& abstraction_json, const std::string& u_max,
                           const std::string& dt, size_t lasso_bound) {
  PipelineConfig c;
  c.formula_text = formula;
  c.predicates = PredicateSet::from_json(predicates_json);
  if (!abstraction_json.empty())
    c.abstraction = AbstractionConfig::from_json(abstraction_json);
  c.u_max = parse_rat(u_max);
  c.dt = parse_rat(dt);
  c.lasso_bound = lasso_bound;
  return c;
}

} // namespace

PYBIND11_MODULE(_sitlplan, m) {
  m.doc() = "SITL planning via timed signal transducers";

  m.def("parse_formula",
        [](const std::string& text) {
          return formula_str(*parse_formula(text, FormulaMode::Sitl));
        },
        py::arg("text"), "Parse a formula and return its canonical form.");

  m.def("rewrite_core",
        [](const std::string& text) {
          return core_str(*rewrite_to_core(parse_formula(text, FormulaMode::Mitl)));
        },
        py::arg("text"), "Rewrite to the core operator set.");

  m.def("eval_signal",
        [](const std::string& formula, const std::string& signal_json,
           const std::string& at) {
          auto phi = parse_formula(formula, FormulaMode::Mitl);
          auto sig = BooleanSignal::from_json(signal_json);
          return std::string(verdict_str(eval_mitl(sig, phi, parse_rat(at))));
        },
        py::arg("formula"), py::arg("signal_json"), py::arg("at") = "0",
        "Continuous-time evaluation of an MITL formula on a signal.");

  m.def("sat",
        [](const std::string& predicates_json, const std::string& label) {
          auto set = PredicateSet::from_json(predicates_json);
          FeasibilityOracle oracle(set);
          // labels are conjunctions of literals like "mu1 & !mu2"
          std::vector<BcPtr> lits;
          std::istringstream in(label);
          std::string tok;
          while (std::getline(in, tok, '&')) {
            while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
            while (!tok.empty() && tok.back() == ' ') tok.pop_back();
            if (tok.empty()) continue;
            bool neg = tok.front() == '!';
            lits.push_back(Bc::lit(neg ? tok.substr(1) : tok, !neg));
          }
          auto r = oracle.sat(*Bc::conj(std::move(lits)));
          switch (r.verdict) {
            case SatResult::Verdict::Sat: return std::string("sat");
            case SatResult::Verdict::Unsat: return std::string("unsat");
            default: return std::string("unknown");
          }
        },
        py::arg("predicates_json"), py::arg("label"),
        "Feasibility of a conjunction of predicate literals.");

  m.def("compile_info",
        [](const std::string& formula, const std::string& predicates_json,
           const std::string& abstraction_json) {
          auto cfg = config_from(formula, predicates_json, abstraction_json, "1",
                                 "1/100", 1000);
          auto c = run_compile(cfg);
          py::dict d;
          d["states"] = c.tst_varphi.states.size();
          d["transitions"] = c.tst_varphi.transitions.size();
          d["pruned_states"] = c.tst_phi.states.size();
          d["unrealizable"] = c.unrealizable;
          if (c.unrealizable) d["reason"] = c.unrealizable_reason;
          else d["modified_states"] = c.tst_m.states.size();
          return d;
        },
        py::arg("formula"), py::arg("predicates_json"), py::arg("abstraction_json"));

  m.def("plan",
        [](const std::string& formula, const std::string& predicates_json,
           const std::string& abstraction_json, const std::string& u_max) {
          auto cfg = config_from(formula, predicates_json, abstraction_json, u_max,
                                 "1/100", 1000);
          auto c = run_compile(cfg);
          py::dict d;
          if (c.unrealizable) {
            d["found"] = false;
            d["reason"] = c.unrealizable_reason;
            return d;
          }
          auto p = run_plan(c, cfg);
          d["found"] = p.found;
          if (!p.found) {
            d["reason"] = p.reason;
            return d;
          }
          d["plan_mu"] = p.plan_mu.to_json();
          d["plan_p"] = p.plan_p.to_json();
          d["ra_states"] = p.ra.states.size();
          d["timing"] = p.timing.to_json();
          return d;
        },
        py::arg("formula"), py::arg("predicates_json"), py::arg("abstraction_json"),
        py::arg("u_max") = "1");

  m.def("simulate",
        [](const std::string& formula, const std::string& predicates_json,
           const std::string& abstraction_json, const std::string& u_max,
           const std::string& dt, size_t n_periods) {
          auto cfg = config_from(formula, predicates_json, abstraction_json, u_max,
                                 dt, 1000);
          cfg.n_periods = n_periods;
          auto c = run_compile(cfg);
          if (c.unrealizable) throw std::runtime_error(c.unrealizable_reason);
          auto p = run_plan(c, cfg);
          if (!p.found) throw std::runtime_error(p.reason);
          auto s = run_simulate(c, p, cfg);
          py::dict d;
          d["pass"] = s.report.pass;
          d["note"] = s.report.note;
          d["samples"] = s.report.samples;
          d["csv"] = s.trajectory.to_csv(p.plan_mu);
          return d;
        },
        py::arg("formula"), py::arg("predicates_json"), py::arg("abstraction_json"),
        py::arg("u_max") = "1", py::arg("dt") = "1/100", py::arg("n_periods") = 2);
}
