// sitlplan: SITL planning pipeline front end.
//
// Subcommands compose through files in the output directory:
//   compile    parse + compile + prune; writes transducers, prune report
//   plan       region automaton + lasso search + timing; writes plan JSON
//   simulate   closed-loop run + conformance report
//   monitor    evaluate a formula on a signal JSON
//   export-dot dump transducers/automata in graphviz form
//
// Exit codes: 0 success, 2 input/parse errors, 3 unrealizable/exhausted,
// 4 conformance failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sitl/pipeline.hpp"
#include "sitl/semantics.hpp"

namespace fs = std::filesystem;
using namespace sitl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << text;
}

struct Options {
  std::string formula_file, predicates_file, abstraction_file, out_dir = "out";
  size_t lasso_bound = 1000;
  std::string eps_cap = "1", dt = "1/100", u_max = "1";
  size_t n_periods = 2;
  uint64_t seed = 1;
};

PipelineConfig load_config(const Options& o) {
  PipelineConfig c;
  c.formula_text = slurp(o.formula_file);
  while (!c.formula_text.empty() &&
         (c.formula_text.back() == '\n' || c.formula_text.back() == ' '))
    c.formula_text.pop_back();
  c.predicates = PredicateSet::from_json(slurp(o.predicates_file));
  c.predicates.seed = o.seed;
  if (!o.abstraction_file.empty())
    c.abstraction = AbstractionConfig::from_json(slurp(o.abstraction_file));
  c.eps_cap = parse_rat(o.eps_cap);
  c.dt = parse_rat(o.dt);
  c.u_max = parse_rat(o.u_max);
  c.lasso_bound = o.lasso_bound;
  c.n_periods = o.n_periods;
  return c;
}

int cmd_compile(const Options& o) {
  auto config = load_config(o);
  auto c = run_compile(config);
  fs::path out(o.out_dir);
  spit(out / "tst_varphi.json", c.tst_varphi.to_json());
  spit(out / "tst_varphi.dot", c.tst_varphi.dot());
  spit(out / "tst_phi.json", c.tst_phi.to_json());
  spit(out / "tst_phi.dot", c.tst_phi.dot());
  spit(out / "prune_report.json", c.report.to_json());
  spit(out / "abstraction.dot", c.abstraction.dot());
  std::cout << "compiled: |S|=" << c.tst_varphi.states.size()
            << " |Delta|=" << c.tst_varphi.transitions.size()
            << " -> pruned |S|=" << c.tst_phi.states.size()
            << " |Delta|=" << c.tst_phi.transitions.size() << "\n";
  if (c.unrealizable) {
    std::cout << "unrealizable: " << c.unrealizable_reason << "\n";
    return 3;
  }
  spit(out / "tst_m.json", c.tst_m.to_json());
  spit(out / "tst_m.dot", c.tst_m.dot());
  std::cout << "modified transducer: |S|=" << c.tst_m.states.size()
            << " |Delta|=" << c.tst_m.transitions.size()
            << " (time scale " << c.time_scale.str() << ")\n";
  return 0;
}

int cmd_plan(const Options& o) {
  auto config = load_config(o);
  auto c = run_compile(config);
  if (c.unrealizable) {
    std::cout << "unrealizable: " << c.unrealizable_reason << "\n";
    return 3;
  }
  auto p = run_plan(c, config);
  fs::path out(o.out_dir);
  std::cout << "region automaton: |Q|=" << p.ra.states.size()
            << " edges=" << p.ra.edges.size() << "\n";
  if (!p.found) {
    std::cout << "no plan: " << p.reason
              << (p.bound_hit ? " [bound]" : "") << "\n";
    return 3;
  }
  spit(out / "lasso.json", p.lasso.to_json(p.ra, c.tst_m));
  spit(out / "timing.json", p.timing.to_json());
  spit(out / "plan_p.json", p.plan_p.to_json());
  spit(out / "plan_mu.json", p.plan_mu.to_json());
  spit(out / "schedule.json", p.sched.to_json());
  std::cout << "plan found after " << p.lassos_tried << " candidate lasso(s); "
            << p.plan_p.entries() << " entries, period " << rat_str(p.plan_p.period)
            << "\n";
  return 0;
}

int cmd_simulate(const Options& o) {
  auto config = load_config(o);
  auto c = run_compile(config);
  if (c.unrealizable) {
    std::cout << "unrealizable: " << c.unrealizable_reason << "\n";
    return 3;
  }
  auto p = run_plan(c, config);
  if (!p.found) {
    std::cout << "no plan: " << p.reason << "\n";
    return 3;
  }
  auto s = run_simulate(c, p, config);
  fs::path out(o.out_dir);
  spit(out / "trajectory.csv", s.trajectory.to_csv(p.plan_mu));
  spit(out / "conformance.json", s.report.to_json());
  std::cout << (s.report.pass ? "conformance pass: " : "conformance FAIL: ")
            << s.report.note << "\n";
  return s.report.pass ? 0 : 4;
}

int cmd_monitor(const std::string& formula_file, const std::string& signal_file,
                const std::string& at) {
  auto text = slurp(formula_file);
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
  auto phi = parse_formula(text, FormulaMode::Mitl);
  auto sig = BooleanSignal::from_json(slurp(signal_file));
  auto v = eval_mitl(sig, phi, parse_rat(at));
  std::cout << verdict_str(v) << "\n";
  return 0;
}

int cmd_export_dot(const Options& o, const std::string& what) {
  auto config = load_config(o);
  auto c = run_compile(config);
  if (what == "varphi") std::cout << c.tst_varphi.dot();
  else if (what == "phi") std::cout << c.tst_phi.dot();
  else if (what == "m" && !c.unrealizable) std::cout << c.tst_m.dot();
  else if (what == "abstraction") std::cout << c.abstraction.dot();
  else if (what == "ra" && !c.unrealizable) {
    auto ra = build_ra(c.tst_m);
    std::cout << ra.dot(c.tst_m);
  } else {
    std::cerr << "nothing to export for '" << what << "'\n";
    return 2;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"SITL planning via timed signal transducers"};
  app.require_subcommand(1);

  Options o;
  auto add_common = [&](CLI::App* cmd, bool needs_abs) {
    cmd->add_option("--formula", o.formula_file, "formula file")->required();
    cmd->add_option("--predicates", o.predicates_file, "predicate config JSON")->required();
    auto* a = cmd->add_option("--abstraction", o.abstraction_file, "abstraction config JSON");
    if (needs_abs) a->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--lasso-bound", o.lasso_bound, "lasso enumeration bound");
    cmd->add_option("--eps-cap", o.eps_cap, "timing margin cap (rational)");
    cmd->add_option("--dt", o.dt, "simulation step (rational)");
    cmd->add_option("--u-max", o.u_max, "speed bound (rational)");
    cmd->add_option("--n-periods", o.n_periods, "suffix periods to simulate");
    cmd->add_option("--seed", o.seed, "sampling seed");
  };

  auto* compile = app.add_subcommand("compile", "compile and prune the specification");
  add_common(compile, true);
  auto* plan = app.add_subcommand("plan", "search for a timed plan");
  add_common(plan, true);
  auto* simulate = app.add_subcommand("simulate", "closed-loop run and conformance");
  add_common(simulate, true);

  std::string mon_formula, mon_signal, mon_at = "0";
  auto* monitor = app.add_subcommand("monitor", "evaluate a formula on a signal");
  monitor->add_option("--formula", mon_formula)->required();
  monitor->add_option("--signal", mon_signal)->required();
  monitor->add_option("--at", mon_at, "evaluation time (rational)");

  std::string dot_what = "m";
  auto* export_dot = app.add_subcommand("export-dot", "dump graphviz");
  add_common(export_dot, true);
  export_dot->add_option("--what", dot_what, "varphi|phi|m|abstraction|ra");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compile->parsed()) return cmd_compile(o);
    if (plan->parsed()) return cmd_plan(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (monitor->parsed()) return cmd_monitor(mon_formula, mon_signal, mon_at);
    if (export_dot->parsed()) return cmd_export_dot(o, dot_what);
  } catch (const ParseError& e) {
    std::cerr << "parse error at position " << e.position << ": " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedInterval& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
