// tfnp: solve search problems, check reductions, build Herbrand instances,
// compile and run verifier programs, and run the acceptance checklist.
//
// Exit codes: 0 success, 1 semantic failure, 2 input error, 3 resource limit.

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "json.hpp"
#include "tfnp/circuit.hpp"
#include "tfnp/error.hpp"
#include "tfnp/logic.hpp"
#include "tfnp/programs.hpp"
#include "tfnp/prop.hpp"
#include "tfnp/vm.hpp"
#include "workspace.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using nlohmann::json;
using namespace tfnp;
namespace fs = std::filesystem;

enum Exit { kOk = 0, kSemantic = 1, kInput = 2, kResource = 3 };

struct Globals {
  std::string config_path;
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::string filter;
  std::optional<std::size_t> gate_cap;
  cli::WorkspaceConfig config;

  void resolve() {
    if (!config_path.empty()) config = cli::load_config(config_path);
    if (seed) config.seed = *seed;
    if (gate_cap) {
      if (*gate_cap == 0) throw InputError("--gate-cap must be positive");
      config.gate_cap = *gate_cap;
    }
  }
};

/// Per-command report: text lines as cases complete, or one JSON document.
class Report {
 public:
  Report(std::string command, bool as_json) : as_json_(as_json) { doc_["command"] = std::move(command); }

  void add_case(json c, const std::string& line) {
    if (c.contains("verdict") && c["verdict"] == "FAIL") pass_ = false;
    doc_["cases"].push_back(std::move(c));
    if (!as_json_) std::cout << line << '\n';
  }
  void note(const std::string& key, json value, const std::string& line) {
    doc_[key] = std::move(value);
    if (!as_json_ && !line.empty()) std::cout << line << '\n';
  }

  int finish(int code) {
    if (code == kOk && !pass_) code = kSemantic;
    if (code != kOk) pass_ = false;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["summary"] = pass_ ? "PASS" : "FAIL";
    doc_["exit_code"] = code;
    doc_["seconds"] = secs;
    if (!doc_.contains("cases")) doc_["cases"] = json::array();
    if (as_json_)
      std::cout << doc_.dump(2) << '\n';
    else
      std::cout << doc_["summary"].get<std::string>() << '\n';
    std::cout.flush();
    return code;
  }

 private:
  bool as_json_;
  bool pass_ = true;
  json doc_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ------------------------------------------------------------ solve

int cmd_solve(const Globals& g, const std::string& problem_file, const std::string& instance) {
  const auto problem = cli::load_problem(cli::read_json(problem_file), fs::path(problem_file).parent_path(), g.config);
  const auto x = cli::parse_instance(instance);
  Report rep("solve " + problem_file + " " + instance, g.json);
  rep.note("problem", {{"name", problem.name}, {"bound", problem.bound.to_string()}},
           "problem " + problem.name + ", witness bound " + problem.bound.to_string());
  json c = {{"instance", cli::describe_bits(x)}};
  try {
    const auto y = core::solve_brute(problem, x, g.config.solver_max_bits);
    const bool ok = core::verify_solution(problem, x, y);
    const auto run = problem.verifier->run(std::vector<BitString>{x, y});
    c["witness"] = cli::describe_bits(y);
    c["steps"] = run.steps;
    c["verdict"] = ok ? "PASS" : "FAIL";
    rep.add_case(c, "instance " + cli::show_bits(x) + "\nwitness  " + cli::show_bits(y) + "\nverified " +
                        (ok ? "yes" : "no") + " (" + std::to_string(run.steps) + " verifier steps)");
  } catch (const TotalityViolation& e) {
    c["verdict"] = "FAIL";
    c["error"] = e.what();
    rep.add_case(c, std::string("no witness: ") + e.what());
  }
  return rep.finish(kOk);
}

// ------------------------------------------------------------ check-reduction

int cmd_check_reduction(const Globals& g, const std::string& file, const std::string& domain_spec) {
  auto loaded = cli::load_reduction(cli::read_json(file), fs::path(file).parent_path(), g.config);
  Report rep("check-reduction " + file + (domain_spec.empty() ? "" : " " + domain_spec), g.json);
  int code = kOk;
  std::vector<BitString> domain = loaded.domain;
  bool truncated = false;
  const json spec = domain_spec.empty() ? loaded.domain_spec : json(domain_spec);
  if (!spec.is_null()) domain = cli::parse_domain(spec, g.config.max_domain, &truncated);
  if (truncated) {
    // Check what fits, then report the overflow.
    code = kResource;
    rep.note("truncated", true,
             "resource limit: domain truncated to " + std::to_string(g.config.max_domain) + " instances (max_domain)");
  }
  if (domain.empty()) throw InputError("no domain given for " + loaded.reduction.name);
  rep.note("reduction", {{"name", loaded.reduction.name}, {"source", loaded.source.name}, {"target", loaded.target.name}},
           loaded.reduction.name + ": " + loaded.source.name + " -> " + loaded.target.name + " on " +
               std::to_string(domain.size()) + " instances");
  std::optional<json> counterexample;
  std::size_t witnesses = 0;
  for (const auto& x : domain) {
    json c = {{"instance", x.to_string()}};
    try {
      const auto r = core::check_many_one(loaded.reduction, loaded.source, loaded.target, {x});
      const auto& rc = r.cases.at(0);
      c["image"] = rc.fx.to_string();
      json checks = json::array();
      for (const auto& w : rc.checks) {
        checks.push_back({{"z", w.z.to_string()}, {"g", w.y.to_string()}, {"ok", w.ok}});
        ++witnesses;
      }
      c["checks"] = checks;
      c["verdict"] = r.pass ? "PASS" : "FAIL";
      if (!rc.error.empty()) c["error"] = rc.error;
      std::string line = (r.pass ? "  ok   x=" : "  FAIL x=") + x.to_string() + "  " + std::to_string(rc.checks.size()) +
                         " witnesses of f(x)";
      if (r.counterexample && !counterexample) {
        const auto& [cx, cz, cy] = *r.counterexample;
        counterexample = json{{"x", cx.to_string()}, {"z", cz.to_string()}, {"g", cy.to_string()}};
        line += "\n  counterexample: x=" + cx.to_string() + " z=" + cz.to_string() + " g(x,z)=" + cy.to_string() +
                " is not a witness of x";
      }
      rep.add_case(c, line);
    } catch (const ResourceLimit& e) {
      // Partial results stay in the report.
      c["verdict"] = "FAIL";
      c["error"] = e.what();
      rep.add_case(c, "  x=" + x.to_string() + "  resource limit: " + e.what());
      code = kResource;
      break;
    }
  }
  rep.note("witness_checks", witnesses, std::to_string(witnesses) + " witness checks");
  if (counterexample) rep.note("counterexample", *counterexample, "");
  return rep.finish(code);
}

// ------------------------------------------------------------ herbrand

std::vector<std::vector<logic::Term>> herbrand_tuples(const logic::UniversalSentence& s, std::size_t depth,
                                                      std::size_t max_tuples) {
  const auto terms = logic::enumerate_herbrand_terms(s.signature, depth);
  const std::size_t k = s.variables.size();
  std::vector<std::vector<logic::Term>> out;
  std::vector<std::size_t> idx(k, 0);
  while (out.size() < max_tuples) {
    std::vector<logic::Term> t;
    for (auto i : idx) t.push_back(terms[i]);
    out.push_back(std::move(t));
    std::size_t pos = k;
    while (pos > 0 && ++idx[pos - 1] == terms.size()) idx[--pos] = 0;
    if (pos == 0) break;
  }
  return out;
}

int cmd_herbrand(const Globals& g, const std::string& file, std::size_t depth, std::optional<std::size_t> tuple_limit,
                 const std::string& dimacs_path, bool solve) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot read " + file);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto sentence = logic::parse_sentence_file(text);
  const std::size_t limit = tuple_limit.value_or(g.config.max_tuples);
  auto tuples = herbrand_tuples(sentence, depth, limit);
  if (!tuple_limit && tuples.size() == limit) {
    // Full enumeration requested but the config limit was reached.
    auto terms = logic::enumerate_herbrand_terms(sentence.signature, depth).size();
    double total = 1;
    for (std::size_t i = 0; i < sentence.variables.size(); ++i) total *= static_cast<double>(terms);
    if (total > static_cast<double>(limit)) throw ResourceLimit("more than " + std::to_string(limit) + " Herbrand tuples");
  }
  const auto expansion = logic::herbrand_expand(sentence, tuples);
  const auto cnf = prop::tseitin(expansion.propositional).cnf;

  Report rep("herbrand " + file + " --depth " + std::to_string(depth), g.json);
  rep.note("expansion", {{"tuples", tuples.size()}, {"atoms", expansion.atoms.size()},
                         {"clauses", cnf.clauses.size()}, {"variables", cnf.num_vars}},
           std::to_string(tuples.size()) + " tuples, " + std::to_string(expansion.atoms.size()) + " atoms, " +
               std::to_string(cnf.clauses.size()) + " clauses");
  {
    std::ofstream out(dimacs_path);
    if (!out) throw InputError("cannot write " + dimacs_path);
    out << "c Herbrand expansion of " << sentence.to_string() << "\n";
    for (std::size_t i = 0; i < expansion.atoms.size(); ++i) out << "c atom " << i + 1 << " " << expansion.atoms[i].to_string() << "\n";
    out << prop::to_dimacs(cnf);
    rep.note("dimacs", dimacs_path, "wrote " + dimacs_path);
  }
  if (!solve) return rep.finish(kOk);

  const auto res = prop::sat_solve(cnf);
  json c = {{"satisfiable", res.satisfiable}};
  if (!res.satisfiable) {
    c["verdict"] = "FAIL";
    rep.add_case(c, "UNSAT: the ground instances are contradictory, so the sentence is inconsistent");
    return rep.finish(kSemantic);
  }
  std::vector<bool> assignment;
  json model = json::object();
  for (std::size_t i = 0; i < expansion.atoms.size(); ++i) {
    assignment.push_back(res.model[static_cast<std::uint32_t>(i + 1)]);
    model[expansion.atoms[i].to_string()] = static_cast<bool>(assignment.back());
  }
  const bool verified = expansion.evaluate(assignment);
  c["model"] = model;
  c["verified"] = verified;
  c["verdict"] = verified ? "PASS" : "FAIL";
  std::string line = verified ? "SAT, assignment verified against the ground conjunction"
                              : "SAT, but the assignment does not satisfy the ground conjunction";
  if (!g.json)
    for (const auto& [atom, v] : model.items()) line += "\n  " + atom + " = " + (v.get<bool>() ? "1" : "0");
  rep.add_case(c, line);
  return rep.finish(kOk);
}

// ------------------------------------------------------------ programs

vm::Program load_program(const std::string& name_or_path) {
  if (fs::exists(name_or_path) && fs::is_regular_file(name_or_path)) {
    std::ifstream in(name_or_path);
    return vm::Program::assemble(std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()));
  }
  return programs::load(name_or_path);
}

vm::RunOracle make_oracle(const std::string& name, std::size_t max_bits) {
  if (name.empty()) return nullptr;
  core::TFNPProblem p;
  if (name == "FACTORING") p = core::factoring_problem();
  else if (name == "SUCC") p = core::succ_problem();
  else throw InputError("unknown oracle problem " + name);
  return [p, max_bits](const BitString& q) { return core::solve_brute(p, q, max_bits); };
}

int cmd_program(const Globals& g, const std::string& name, const std::vector<std::string>& inputs, bool list,
                bool show_source, const std::string& oracle) {
  Report rep("program", g.json);
  if (list) {
    json names = programs::names();
    std::string line;
    for (const auto& n : programs::names()) line += (line.empty() ? "" : "\n") + n;
    rep.note("programs", names, line);
    return rep.finish(kOk);
  }
  if (name.empty()) throw InputError("program name required");
  const auto p = load_program(name);
  if (show_source) {
    rep.note("source", p.disassemble(), p.disassemble());
    return rep.finish(kOk);
  }
  std::vector<BitString> in;
  for (const auto& s : inputs) in.push_back(cli::parse_instance(s));
  json c = {{"program", p.name}, {"inputs", json::array()}};
  for (const auto& x : in) c["inputs"].push_back(x.to_string());
  try {
    const auto r = vm::run(p, in, make_oracle(oracle, g.config.solver_max_bits));
    c["result"] = r.accepted() ? "ACCEPT" : "REJECT";
    c["steps"] = r.steps;
    c["budget"] = p.budget.to_string();
    c["output"] = r.output.to_string();
    c["oracle_calls"] = r.oracle_calls;
    rep.add_case(c, std::string(r.accepted() ? "ACCEPT" : "REJECT") + " in " + std::to_string(r.steps) +
                        " steps (budget " + p.budget.to_string() + "), output \"" + r.output.to_string() + "\"");
  } catch (const BudgetExceeded& e) {
    c["verdict"] = "FAIL";
    c["error"] = e.what();
    rep.add_case(c, std::string("budget exceeded: ") + e.what());
  }
  return rep.finish(kOk);
}

std::vector<std::size_t> parse_widths(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("widths must be comma-separated numbers: " + text);
    out.push_back(std::stoul(part));
  }
  return out;
}

int cmd_compile(const Globals& g, const std::string& name, const std::string& widths_text, bool padded,
                std::optional<std::size_t> tape, const std::string& out_path, bool check, const std::string& oracle) {
  const auto p = load_program(name);
  const auto widths = parse_widths(widths_text);
  if (widths.size() != p.arity)
    throw InputError(p.name + " takes " + std::to_string(p.arity) + " inputs, got " + std::to_string(widths.size()) + " widths");
  std::vector<vm::InputSpec> specs;
  std::size_t total = 0;
  for (auto w : widths) {
    specs.push_back(padded ? vm::InputSpec::padded(w) : vm::InputSpec::free(w));
    total += specs.back().wires();
  }
  vm::CompileOptions opts;
  opts.gate_cap = g.config.gate_cap;
  if (tape) {
    opts.tape_output = true;
    opts.tape_bound = *tape;
  }
  std::optional<core::TFNPProblem> oracle_problem;
  if (!oracle.empty()) {
    oracle_problem = oracle == "FACTORING" ? core::factoring_problem() : core::succ_problem();
    opts.answer_bound = [b = oracle_problem->bound](std::size_t n) { return b(n); };
  }
  Report rep("compile " + p.name + " --widths " + widths_text, g.json);
  const auto res = vm::compile_to_circuit(p, specs, opts);
  rep.note("circuit", {{"gates", res.circuit.size()}, {"inputs", res.circuit.input_width()},
                       {"outputs", res.circuit.outputs().size()}, {"steps_unrolled", res.steps_unrolled},
                       {"oracle_gates", res.circuit.oracle_gate_count()}},
           p.name + ": " + std::to_string(res.circuit.size()) + " gates, " + std::to_string(res.circuit.input_width()) +
               " inputs, " + std::to_string(res.circuit.outputs().size()) + " outputs, " +
               std::to_string(res.steps_unrolled) + " steps unrolled");
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write " + out_path);
    out << res.circuit.to_text();
    rep.note("written", out_path, "wrote " + out_path);
  }
  if (!check) return rep.finish(kOk);

  if (total > 20) throw ResourceLimit("--check sweeps at most 20 input wires");
  auto run_oracle = make_oracle(oracle, g.config.solver_max_bits);
  std::size_t disagreements = 0, checked = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << total); ++v) {
    const auto wires = total ? BitString::from_uint(v, total) : BitString{};
    std::vector<BitString> in;
    std::size_t off = 0;
    bool valid = true;
    for (const auto& s : specs) {
      auto part = wires.slice(off, s.wires());
      off += s.wires();
      if (s.kind == vm::InputSpec::Kind::Padded) {
        auto y = unpad(part);
        if (!y) valid = false;
        else in.push_back(*y);
      } else {
        in.push_back(part);
      }
    }
    if (!valid) continue;
    ++checked;
    bool accept = false;
    BitString tape_out;
    try {
      const auto r = vm::run(p, in, run_oracle);
      accept = r.accepted();
      if (tape) tape_out = r.output.size() <= *tape ? pad_to_width(r.output, *tape + 1) : BitString::zeros(*tape + 1);
    } catch (const BudgetExceeded&) {
      accept = false;
      tape_out = BitString::zeros(tape.value_or(0) + 1);
    }
    BitString got;
    if (res.circuit.has_oracle()) {
      const auto b = oracle_problem->bound;
      got = circuit::eval_oracle_circuit(res.circuit, wires, [&](const BitString& q) {
              return pad_to_width(run_oracle(q), b(q.size()) + 1);
            }).outputs;
    } else {
      got = circuit::eval(res.circuit, wires);
    }
    const bool same = tape ? got == tape_out : got[0] == accept;
    disagreements += !same;
  }
  json c = {{"checked", checked}, {"disagreements", disagreements}, {"verdict", disagreements ? "FAIL" : "PASS"}};
  rep.add_case(c, "checked " + std::to_string(checked) + " inputs against the interpreter, " +
                      std::to_string(disagreements) + " disagreements");
  return rep.finish(kOk);
}

// ------------------------------------------------------------ selftest

int cmd_selftest(const Globals& g, const std::string& data_dir) {
  acceptance::Options o;
  o.seed = g.config.seed;
  o.filter = g.filter;
  o.gate_cap = g.config.gate_cap;
  o.data_dir = data_dir.empty() ? g.config.data_dir : data_dir;
  Report rep("selftest" + (g.filter.empty() ? "" : " --filter " + g.filter), g.json);
  std::size_t ran = 0;
  acceptance::run(o, [&](const acceptance::CriterionResult& r) {
    ++ran;
    json c = {{"id", r.id}, {"name", r.name}, {"tags", r.tags}, {"verdict", r.pass ? "PASS" : "FAIL"},
              {"detail", r.detail}, {"seconds", r.seconds}};
    rep.add_case(c, acceptance::format_line(r));
    std::cout.flush();
  });
  if (ran == 0) throw InputError("filter '" + g.filter + "' selects no checklist item");
  return rep.finish(kOk);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Total search problems, reductions, Herbrand expansion and proof-system pairs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Workspace config (JSON)")->check(CLI::ExistingFile);
  app.add_flag("--json", g.json, "Print the report as JSON");
  app.add_option("--seed", g.seed, "Seed for generated test data (default 0)");
  app.add_option("--filter", g.filter, "selftest: checklist number, tag or name substring");
  app.add_option("--gate-cap", g.gate_cap, "Gate cap for circuit compilation");

  std::function<int()> action;

  auto* solve = app.add_subcommand("solve", "Find and verify a witness");
  std::string problem_file, instance;
  solve->add_option("problem", problem_file, "Problem description (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("instance", instance, "Instance: decimal, 0x.., 0b.., len:hex or text:..")->required();
  solve->callback([&] { action = [&] { return cmd_solve(g, problem_file, instance); }; });

  auto* check = app.add_subcommand("check-reduction", "Check a many-one reduction on every witness");
  std::string reduction_file, domain;
  check->add_option("reduction", reduction_file, "Reduction description (JSON)")->required()->check(CLI::ExistingFile);
  check->add_option("domain", domain, "a..b, strings:n (overrides the file)");
  check->callback([&] { action = [&] { return cmd_check_reduction(g, reduction_file, domain); }; });

  auto* herbrand = app.add_subcommand("herbrand", "Expand a universal sentence to DIMACS");
  std::string sentence_file, dimacs = "herbrand.cnf";
  std::size_t depth = 1;
  std::optional<std::size_t> tuples;
  bool do_solve = false;
  herbrand->add_option("sentence", sentence_file, "Sentence file")->required()->check(CLI::ExistingFile);
  herbrand->add_option("--depth", depth, "Term depth")->capture_default_str();
  herbrand->add_option("--tuples", tuples, "Use only the first N tuples");
  herbrand->add_option("--dimacs", dimacs, "Output path")->capture_default_str();
  herbrand->add_flag("--solve", do_solve, "Solve and verify the model directly");
  herbrand->callback([&] { action = [&] { return cmd_herbrand(g, sentence_file, depth, tuples, dimacs, do_solve); }; });

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance checklist");
  std::string data_dir;
  selftest->add_option("--data-dir", data_dir, "Directory holding golden files");
  selftest->callback([&] { action = [&] { return cmd_selftest(g, data_dir); }; });

  auto* compile = app.add_subcommand("compile", "Compile a verifier program to a circuit");
  std::string program_name, widths, circuit_out, compile_oracle;
  bool padded = false, check_equiv = false;
  std::optional<std::size_t> tape;
  compile->add_option("program", program_name, "Shipped program name or assembly file")->required();
  compile->add_option("--widths", widths, "Comma-separated input widths")->required();
  compile->add_flag("--padded", padded, "Inputs in padded form (any length up to the width)");
  compile->add_option("--tape", tape, "Output the tape, bounded to N bits, instead of the verdict");
  compile->add_option("--out", circuit_out, "Write the circuit text here");
  compile->add_option("--oracle", compile_oracle, "FACTORING or SUCC, for oracle programs");
  compile->add_flag("--check", check_equiv, "Compare against the interpreter on every input");
  compile->callback([&] {
    action = [&] { return cmd_compile(g, program_name, widths, padded, tape, circuit_out, check_equiv, compile_oracle); };
  });

  auto* program = app.add_subcommand("program", "Run a verifier program");
  std::string run_name, run_oracle;
  std::vector<std::string> run_inputs;
  bool list = false, source = false;
  program->add_option("name", run_name, "Shipped program name or assembly file");
  program->add_option("inputs", run_inputs, "Inputs in instance syntax");
  program->add_flag("--list", list, "List shipped programs");
  program->add_flag("--source", source, "Print the assembly");
  program->add_option("--oracle", run_oracle, "FACTORING or SUCC, for oracle programs");
  program->callback([&] { action = [&] { return cmd_program(g, run_name, run_inputs, list, source, run_oracle); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }
  try {
    g.resolve();
    return action();
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kSemantic;
  } catch (const TotalityViolation& e) {
    std::cerr << "totality violation: " << e.what() << '\n';
    return kSemantic;
  } catch (const ReductionUnsound& e) {
    std::cerr << "unsound reduction: " << e.what() << '\n';
    return kSemantic;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  }
}
