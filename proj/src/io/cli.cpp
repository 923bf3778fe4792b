#include "nashcsg/io/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nashcsg/engine/engine.hpp"
#include "nashcsg/formula/parser.hpp"
#include "nashcsg/io/model_io.hpp"
#include "nashcsg/io/nfg_io.hpp"
#include "nashcsg/nfg/solver.hpp"
#include "nashcsg/synthesis/synthesis.hpp"

namespace nashcsg {

namespace {

std::string num(double v) { return format_double(v == 0.0 ? 0.0 : v, 12); }

struct CheckOptions {
  std::string model;
  std::string prop;
  std::vector<std::string> constants;
  double epsilon = 1e-6;
  int max_iters = 10000;
  int threads = 1;
  std::string export_path;
  bool certify = false;
};

Constants parse_bindings(const std::vector<std::string>& bindings) {
  Constants out;
  for (const auto& b : bindings) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("constant binding must be NAME=VALUE: '" + b + "'");
    out[b.substr(0, eq)] = evaluate_expression(b.substr(eq + 1), {});
  }
  return out;
}

EngineConfig engine_config(const CheckOptions& o) {
  if (!(o.epsilon > 0.0)) throw Error("--epsilon must be positive");
  if (o.max_iters < 1) throw Error("--max-iters must be positive");
  if (o.threads < 1) throw Error("--threads must be positive");
  EngineConfig cfg;
  cfg.vi.epsilon = o.epsilon;
  cfg.vi.max_iterations = o.max_iters;
  cfg.threads = o.threads;
  cfg.solver.threads = o.threads;
  return cfg;
}

std::string vector_text(const std::vector<double>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out + ")";
}

std::string coalition_label(const Csg& game, PlayerId i) { return game.player_name(i); }

int run_check(const CheckOptions& o, std::ostream& out) {
  const auto model = load_model(o.model, parse_bindings(o.constants));
  const auto formula = parse_formula(o.prop);
  const EngineConfig cfg = engine_config(o);
  out << "model: " << o.model << " (" << model->num_states() << " states, " << model->num_players()
      << " players)\n";

  if (formula->kind != StateFormula::Kind::kNash) {
    const StateSet sat = check_state_formula(model, *formula, cfg);
    bool all = true;
    for (StateId s : model->initial_states()) {
      out << "state " << model->state_name(s) << ": " << (sat[s] ? "true" : "false") << "\n";
      all = all && sat[s];
    }
    return all ? kExitOk : kExitUnsat;
  }

  const NashFormula& nash = *formula->nash;
  const NashResult r = check_nash_formula(model, nash, cfg);
  const Csg& cgame = r.coalition_game->game();
  out << "coalitions:";
  for (PlayerId i = 0; i < cgame.num_players(); ++i) out << " " << coalition_label(cgame, i);
  out << "\n";
  out << "horizon: " << (r.horizon == Horizon::kFinite ? "finite" : "infinite") << "\n";
  bool all = true;
  for (StateId s : model->initial_states()) {
    out << "state " << model->state_name(s) << ": values " << vector_text(r.values[s]) << " sum " << num(r.sums[s]);
    if (!nash.is_numeric()) {
      out << " satisfied " << (r.satisfied[s] ? "true" : "false");
      all = all && r.satisfied[s];
    }
    out << "\n";
  }
  const SolveResult& sol = r.solution;
  out << "product nodes: " << sol.graph->num_nodes() << "\n";
  out << "stage games: " << sol.stage_games << " (ties " << sol.ties << ")\n";
  if (r.horizon == Horizon::kInfinite) {
    out << "iterations: " << sol.iterations << " residual " << num(sol.residual) << "\n";
  }
  if (o.certify) {
    const auto cert = certify_epsilon(*sol.graph, sol.strategy, nash.opt, cfg.vi.epsilon);
    out << "certified epsilon: " << num(cert.epsilon) << "\n";
  }
  if (!o.export_path.empty()) {
    std::ofstream f(o.export_path, std::ios::binary);
    if (!f) throw Error("cannot write '" + o.export_path + "'");
    f << export_strategy(*sol.graph, sol.strategy);
    out << "strategy written to " << o.export_path << "\n";
  }
  return all ? kExitOk : kExitUnsat;
}

int run_solve_nfg(const std::string& path, const std::string& mode, int threads, std::ostream& out) {
  const NormalFormGame game = load_nfg(path);
  SolverConfig cfg;
  cfg.threads = threads;
  const NfgSolution sol = mode == "swne" ? swne(game, cfg) : scne(game, cfg);
  const auto name = [&](PlayerId i, int a) {
    return game.has_action_names() ? game.action_name(i, a) : std::to_string(a + 1);
  };
  out << "mode: " << mode << "\n";
  out << "values:";
  for (double v : sol.values) out << " " << num(v);
  out << "\n" << (mode == "swne" ? "welfare: " : "cost: ") << num(sol.welfare) << "\n";
  out << "profile:\n";
  for (PlayerId i = 0; i < game.num_players(); ++i) {
    out << "  player " << i + 1 << ":";
    for (int a = 0; a < game.num_actions(i); ++a) {
      if (sol.profile[i][a] > 0.0) out << " " << name(i, a) << "=" << num(sol.profile[i][a]);
    }
    out << "\n";
  }
  out << "regrets:";
  for (double v : sol.regrets) out << " " << num(v);
  out << "\n";
  out << "supports: " << sol.supports_total << " total, " << sol.supports_solved << " solved, "
      << sol.supports_pruned << " pruned, " << sol.supports_inconclusive << " inconclusive\n";
  if (sol.tie) out << "note: another equilibrium has the same welfare within tolerance\n";
  return kExitOk;
}

struct SweepOptions {
  CheckOptions check;
  std::string param;
  double from = 0.0, to = 0.0, step = 0.0;
  std::string csv;
};

int run_sweep(const SweepOptions& o, std::ostream& out) {
  if (!(o.step > 0.0)) throw Error("--step must be positive");
  if (o.to < o.from) throw Error("--to must not be below --from");
  const std::string text = read_file(o.check.model);
  const Constants declared = model_constants(text);
  if (!declared.contains(o.param)) throw Error("model declares no constant '" + o.param + "'");
  const Constants base = parse_bindings(o.check.constants);
  const auto formula = parse_formula(o.check.prop);
  if (formula->kind != StateFormula::Kind::kNash) throw Error("sweep needs a Nash formula");
  const EngineConfig cfg = engine_config(o.check);
  const int points = static_cast<int>(std::floor((o.to - o.from) / o.step + 1e-9)) + 1;

  std::ofstream csv(o.csv, std::ios::binary);
  if (!csv) throw Error("cannot write '" + o.csv + "'");
  bool header = false;
  for (int k = 0; k < points; ++k) {
    const double value = o.from + k * o.step;
    Constants bindings = base;
    bindings[o.param] = value;
    const auto model = std::make_shared<const Csg>(parse_model(text, bindings));
    if (model->initial_states().empty()) throw Error("model has no initial state");
    const StateId s0 = model->initial_states().front();
    const NashResult r = check_nash_formula(model, *formula->nash, cfg);
    const Csg& cgame = r.coalition_game->game();
    if (!header) {
      std::vector<std::string> cols{o.param};
      for (PlayerId i = 0; i < cgame.num_players(); ++i) cols.push_back(coalition_label(cgame, i));
      for (const auto& c : {"sum", "iterations", "epsilon"}) cols.emplace_back(c);
      write_csv_row(csv, cols);
      header = true;
    }
    const auto cert = certify_epsilon(*r.solution.graph, r.solution.strategy, formula->nash->opt, cfg.vi.epsilon);
    std::vector<std::string> row{csv_number(value)};
    for (double v : r.values[s0]) row.push_back(csv_number(v == 0.0 ? 0.0 : v));
    row.push_back(csv_number(r.sums[s0] == 0.0 ? 0.0 : r.sums[s0]));
    row.push_back(std::to_string(r.solution.iterations));
    row.push_back(csv_number(cert.epsilon));
    write_csv_row(csv, row);
    out << o.param << " = " << num(value) << ": values " << vector_text(r.values[s0]) << " sum " << num(r.sums[s0])
        << "\n";
  }
  out << points << " rows written to " << o.csv << "\n";
  return kExitOk;
}

int run_info(const std::string& path, const std::vector<std::string>& constants, std::ostream& out) {
  const std::string text = read_file(path);
  const auto model = std::make_shared<const Csg>(parse_model(text, parse_bindings(constants)));
  const Csg& g = *model;
  out << "model: " << path << "\n";
  out << "players: " << g.num_players() << "\n";
  out << "states: " << g.num_states() << "\n";
  out << "initial states: " << g.initial_states().size() << "\n";
  out << "choices: " << g.num_total_choices() << "\n";
  out << "transitions: " << g.num_transitions() << "\n";
  int max_joint = 0;
  std::vector<int> max_local(g.num_players(), 0);
  for (StateId s = 0; s < g.num_states(); ++s) {
    max_joint = std::max(max_joint, g.num_choices(s));
    for (PlayerId i = 0; i < g.num_players(); ++i) {
      max_local[i] = std::max(max_local[i], static_cast<int>(g.available(s, i).size()));
    }
  }
  out << "max joint actions per state: " << max_joint << "\n";
  out << "max actions per state:";
  for (PlayerId i = 0; i < g.num_players(); ++i) out << " " << g.player_name(i) << "=" << max_local[i];
  out << "\n";
  out << "labels:";
  for (int l = 0; l < g.num_labels(); ++l) out << " " << g.label_name(l);
  out << "\nrewards:";
  for (int r = 0; r < g.num_rewards(); ++r) out << " " << g.reward_name(r);
  out << "\n";
  const Constants declared = model_constants(text);
  if (!declared.empty()) {
    out << "constants:";
    for (const auto& [name, v] : declared) out << " " << name << "=" << num(v);
    out << "\n";
  }
  return kExitOk;
}

void add_engine_options(CLI::App* cmd, CheckOptions& o) {
  cmd->add_option("--prop", o.prop, "Property formula")->required();
  cmd->add_option("--const", o.constants, "Constant binding NAME=VALUE (repeatable)");
  cmd->add_option("--epsilon", o.epsilon, "Value iteration tolerance");
  cmd->add_option("--max-iters", o.max_iters, "Value iteration cap");
  cmd->add_option("--threads", o.threads, "Worker threads");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibria-based model checking of concurrent stochastic games", "nashcsg"};
  app.require_subcommand(1);

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Check a formula on a model");
  check_cmd->add_option("model", check.model, "Model file (JSON)")->required();
  add_engine_options(check_cmd, check);
  check_cmd->add_option("--export-strategy", check.export_path, "Write the synthesized strategy to this file");
  check_cmd->add_flag("--certify", check.certify, "Report the achieved epsilon of the synthesized profile");

  std::string nfg_path, mode = "swne";
  int nfg_threads = 1;
  auto* nfg_cmd = app.add_subcommand("solve-nfg", "Solve a normal form game");
  nfg_cmd->add_option("file", nfg_path, "NFG file")->required();
  nfg_cmd->add_option("--mode", mode, "swne or scne")->check(CLI::IsMember({"swne", "scne"}));
  nfg_cmd->add_option("--threads", nfg_threads, "Worker threads")->check(CLI::PositiveNumber);

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a model constant and write CSV");
  sweep_cmd->add_option("model", sweep.check.model, "Model file (JSON)")->required();
  add_engine_options(sweep_cmd, sweep.check);
  sweep_cmd->add_option("--param", sweep.param, "Constant to sweep")->required();
  sweep_cmd->add_option("--from", sweep.from, "First value")->required();
  sweep_cmd->add_option("--to", sweep.to, "Last value")->required();
  sweep_cmd->add_option("--step", sweep.step, "Increment")->required();
  sweep_cmd->add_option("--csv", sweep.csv, "Output CSV file")->required();

  std::string info_path;
  std::vector<std::string> info_constants;
  auto* info_cmd = app.add_subcommand("info", "Print model statistics");
  info_cmd->add_option("model", info_path, "Model file (JSON)")->required();
  info_cmd->add_option("--const", info_constants, "Constant binding NAME=VALUE (repeatable)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (check_cmd->parsed()) return run_check(check, out);
    if (nfg_cmd->parsed()) return run_solve_nfg(nfg_path, mode, nfg_threads, out);
    if (sweep_cmd->parsed()) return run_sweep(sweep, out);
    if (info_cmd->parsed()) return run_info(info_path, info_constants, out);
  } catch (const NotConvergedError& e) {
    err << "not converged: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace nashcsg
