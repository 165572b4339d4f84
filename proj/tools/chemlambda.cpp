// chemlambda command line: validate mol files, run reductions, move between
// lambda terms and molecules, and inspect molecules.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "chemlambda/analysis.hpp"
#include "chemlambda/formats.hpp"
#include "chemlambda/lambda.hpp"
#include "chemlambda/mol.hpp"
#include "chemlambda/rewrites.hpp"
#include "chemlambda/scheduler.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

void emit(const std::optional<std::string>& path, const std::string& content) {
  if (path)
    write_file(*path, content);
  else
    std::cout << content;
}

std::map<chemlambda::MoveKind, double> parse_weights_file(const std::string& path) {
  std::map<chemlambda::MoveKind, double> weights;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    std::istringstream is(line);
    std::string name;
    if (!(is >> name)) continue;
    double value = 0.0;
    if (!(is >> value))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'KIND value'");
    auto kind = chemlambda::move_from_token(name);
    if (!kind || *kind == chemlambda::MoveKind::Comb)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": unknown move kind '" + name + "'");
    weights[*kind] = value;
  }
  return weights;
}

struct ReduceOptions {
  std::string file;
  std::string algo = "det";
  std::uint64_t seed = 0;
  std::string weights_path;
  int max_cycles = 10000;
  int snapshot_every = 0;
  bool lt_literal = false;
  std::string trace_path;
  std::string format = "mol";
  std::optional<std::string> output;
};

int run_check(const std::string& path) {
  const std::string text = read_file(path);
  const chemlambda::MolDocument doc = chemlambda::tokenize_mol(text);
  const chemlambda::ValidationReport report = chemlambda::validate(doc);
  for (const auto& issue : report.warnings)
    std::cerr << path << ":" << issue.line_no << ": warning: " << issue.message << '\n';
  if (!report.ok()) {
    for (const auto& issue : report.errors)
      std::cerr << path << ":" << issue.line_no << ": error: " << issue.message << '\n';
    return kExitDomainError;
  }
  const chemlambda::Molecule m = chemlambda::parse_mol(text);
  const auto s = chemlambda::stats(m);
  std::cout << "ok: " << m.node_count() << " node(s), " << s.bonds << " bond(s), "
            << s.free_ports << " free port(s)\n";
  return kExitOk;
}

int run_reduce(const ReduceOptions& opt) {
  chemlambda::AlgorithmConfig cfg;
  cfg.variant = opt.algo == "random" ? chemlambda::SchedulerVariant::Random
                                     : chemlambda::SchedulerVariant::Deterministic;
  cfg.seed = opt.seed;
  cfg.max_cycles = opt.max_cycles;
  cfg.snapshot_every = opt.snapshot_every;
  cfg.lt_literal = opt.lt_literal;

  std::string weights_path = opt.weights_path;
  if (weights_path.empty()) {
    if (const char* env = std::getenv("CHEMLAMBDA_WEIGHTS")) weights_path = env;
  }
  if (!weights_path.empty()) cfg.weights = parse_weights_file(weights_path);
  cfg.check();

  const chemlambda::Molecule m = chemlambda::parse_mol(read_file(opt.file));
  const chemlambda::Trace trace = chemlambda::reduce(m, cfg);

  if (!opt.trace_path.empty()) {
    const bool json = opt.trace_path.size() > 5 &&
                      opt.trace_path.substr(opt.trace_path.size() - 5) == ".json";
    write_file(opt.trace_path, json ? chemlambda::trace_to_json(trace)
                                    : chemlambda::serialize_trace(trace));
  }

  std::string rendered;
  if (opt.format == "dot")
    rendered = chemlambda::to_dot(trace.final_molecule);
  else if (opt.format == "json")
    rendered = chemlambda::molecule_to_json(trace.final_molecule);
  else
    rendered = chemlambda::serialize_mol(trace.final_molecule);
  emit(opt.output, rendered);

  std::cerr << "cycles " << trace.steps.size() << ", termination "
            << (trace.termination == chemlambda::Termination::Normal ? "normal"
                                                                     : "budget-exhausted")
            << '\n';
  return kExitOk;
}

int run_compile(const std::string& term_text, const std::optional<std::string>& output) {
  const chemlambda::TermPtr term = chemlambda::parse_lambda(term_text);
  const chemlambda::Molecule m = chemlambda::compile(term);
  emit(output, chemlambda::serialize_mol(m));
  return kExitOk;
}

int run_decompile(const std::string& path) {
  chemlambda::Molecule m = chemlambda::parse_mol(read_file(path));
  m = chemlambda::comb_cycle(m);
  std::cout << chemlambda::print_lambda(chemlambda::decompile(m)) << '\n';
  return kExitOk;
}

int run_quine(const std::string& path, int max_period) {
  const chemlambda::Molecule m = chemlambda::parse_mol(read_file(path));
  chemlambda::AlgorithmConfig cfg;
  const chemlambda::QuineReport report = chemlambda::detect_quine(m, cfg, max_period);
  if (report.is_quine) {
    std::cout << "quine: yes, period " << report.period_checked << '\n';
    for (const auto& step : report.witness_steps) {
      std::cout << "  step " << step.cycle << ":";
      for (const auto& move : step.applied) {
        std::cout << ' ' << chemlambda::move_name(move.kind);
        for (chemlambda::NodeId id : move.nodes) std::cout << ' ' << id;
        std::cout << ';';
      }
      std::cout << '\n';
    }
  } else {
    std::cout << "quine: no (checked up to period " << report.period_checked << ")\n";
  }
  return kExitOk;
}

int run_moves() {
  for (const auto& rule : chemlambda::rule_table())
    std::cout << chemlambda::format_rule(rule) << '\n';
  return kExitOk;
}

int run_stats(const std::string& path) {
  const chemlambda::Molecule m = chemlambda::parse_mol(read_file(path));
  const chemlambda::MoleculeStats s = chemlambda::stats(m);
  for (chemlambda::NodeKind kind : chemlambda::all_node_kinds()) {
    if (int n = s.count(kind); n > 0)
      std::cout << chemlambda::kind_name(kind) << ' ' << n << '\n';
  }
  std::cout << "bonds " << s.bonds << '\n';
  std::cout << "free-ports " << s.free_ports << '\n';
  std::cout << "arrow-loops " << s.arrow_loops << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chemlambda graph-rewriting engine"};
  app.require_subcommand(1);

  std::string check_file;
  CLI::App* check = app.add_subcommand("check", "validate a mol file");
  check->add_option("file", check_file, "mol file")->required();

  ReduceOptions reduce_opt;
  CLI::App* reduce = app.add_subcommand("reduce", "reduce a molecule");
  reduce->add_option("file", reduce_opt.file, "mol file")->required();
  reduce->add_option("--algo", reduce_opt.algo, "scheduler variant")
      ->check(CLI::IsMember({"det", "random"}));
  reduce->add_option("--seed", reduce_opt.seed, "random seed");
  reduce->add_option("--weights", reduce_opt.weights_path,
                     "weights file, one 'KIND value' per line");
  reduce->add_option("--max-cycles", reduce_opt.max_cycles, "cycle budget");
  reduce->add_option("--snapshot-every", reduce_opt.snapshot_every,
                     "record a snapshot every N cycles (0 = endpoints only)");
  reduce->add_flag("--lt-literal", reduce_opt.lt_literal,
                   "use the L-T rule exactly as tabulated");
  reduce->add_option("--trace", reduce_opt.trace_path,
                     "write the trace here (.json selects the JSON schema)");
  reduce->add_option("--format", reduce_opt.format, "final molecule format")
      ->check(CLI::IsMember({"mol", "dot", "json"}));
  std::string reduce_output;
  reduce->add_option("-o,--output", reduce_output, "write the final molecule here");

  std::string compile_term;
  std::string compile_output;
  CLI::App* compile = app.add_subcommand("compile", "compile a lambda term to a molecule");
  compile->add_option("term", compile_term, "lambda term text")->required();
  compile->add_option("-o,--output", compile_output, "write the molecule here");

  std::string decompile_file;
  CLI::App* decompile = app.add_subcommand("decompile", "read a lambda term back");
  decompile->add_option("file", decompile_file, "mol file")->required();

  std::string quine_file;
  int quine_period = 16;
  CLI::App* quine = app.add_subcommand("quine", "check for quine behaviour");
  quine->add_option("file", quine_file, "mol file")->required();
  quine->add_option("--max-period", quine_period, "periods to check");

  bool moves_list = false;
  CLI::App* moves = app.add_subcommand("moves", "show the move catalog");
  moves->add_flag("--list", moves_list, "print the full rule catalog");

  std::string stats_file;
  CLI::App* stats_cmd = app.add_subcommand("stats", "molecule census");
  stats_cmd->add_option("file", stats_file, "mol file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return run_check(check_file);
    if (reduce->parsed()) {
      if (!reduce_output.empty()) reduce_opt.output = reduce_output;
      return run_reduce(reduce_opt);
    }
    if (compile->parsed()) {
      std::optional<std::string> out;
      if (!compile_output.empty()) out = compile_output;
      return run_compile(compile_term, out);
    }
    if (decompile->parsed()) return run_decompile(decompile_file);
    if (quine->parsed()) return run_quine(quine_file, quine_period);
    if (moves->parsed()) return run_moves();
    if (stats_cmd->parsed()) return run_stats(stats_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsage;
}
