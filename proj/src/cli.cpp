#include "wgvqe/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wgvqe/ansatz.hpp"
#include "wgvqe/error.hpp"
#include "wgvqe/experiment.hpp"
#include "wgvqe/format.hpp"
#include "wgvqe/rl.hpp"
#include "wgvqe/ssvqe.hpp"
#include "wgvqe/waveguide.hpp"

namespace fs = std::filesystem;

namespace wgvqe {

namespace {

struct UsageError : Error {
  using Error::Error;
};

// Everything a flag can override. Unset optionals leave the config value alone.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;

  std::optional<std::string> family;
  std::optional<int> qubits;
  std::optional<double> dl;

  std::optional<std::string> ansatz;
  std::optional<int> layers;
  std::optional<std::string> circuit;

  std::optional<std::string> evaluator;
  std::optional<int> shots;
  std::optional<double> noise;
  std::optional<int> max_iter;
  std::optional<double> lr;
  std::optional<std::vector<double>> weights;
  std::optional<std::string> name;

  std::optional<int> episodes;
  std::optional<double> lambda;
  std::optional<std::string> target;
  std::optional<int> max_gates;
  std::optional<int> inner_steps;
  bool early_stop = false;
  bool adaptive_reward = false;

  std::optional<std::vector<double>> levels;
  std::optional<std::vector<std::uint64_t>> seeds;

  std::string mode_label;
  std::string source = "reference";
  std::string system;
  std::optional<std::string> rl_tm;
  std::optional<std::string> rl_te;
};

void add_problem_options(CLI::App* app, Flags& f) {
  app->add_option("--mode", f.family, "mode family: tm or te");
  app->add_option("--qubits", f.qubits, "number of qubits (grid has 2^n nodes)");
  app->add_option("--dl", f.dl, "grid spacing");
}

void add_ssvqe_options(CLI::App* app, Flags& f) {
  app->add_option("--ansatz", f.ansatz, "hea or file");
  app->add_option("--layers", f.layers, "HEA layers");
  app->add_option("--circuit", f.circuit, "circuit JSON for --ansatz file");
  app->add_option("--evaluator", f.evaluator, "exact, fixed or adaptive");
  app->add_option("--shots", f.shots, "shots per evaluation");
  app->add_option("--noise", f.noise, "depolarizing strength");
  app->add_option("--max-iter", f.max_iter, "maximum Adam iterations");
  app->add_option("--lr", f.lr, "Adam learning rate");
  app->add_option("--weights", f.weights, "SSVQE weights, strictly decreasing")->delimiter(',');
}

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig cfg = f.config ? load_config(*f.config) : ExperimentConfig{};
  if (f.out) cfg.out_dir = *f.out;
  if (f.family) cfg.family = parse_mode_family(*f.family);
  if (f.qubits) cfg.n_qubits = *f.qubits;
  if (f.dl) cfg.dl = *f.dl;
  if (f.ansatz) {
    if (*f.ansatz == "hea")
      cfg.ansatz.kind = AnsatzKind::Hea;
    else if (*f.ansatz == "file")
      cfg.ansatz.kind = AnsatzKind::File;
    else
      throw InvalidArgument(fmt::format("--ansatz must be hea or file, got '{}'", *f.ansatz));
  }
  if (f.layers) cfg.ansatz.layers = *f.layers;
  if (f.circuit) {
    cfg.ansatz.path = *f.circuit;
    if (!f.ansatz) cfg.ansatz.kind = AnsatzKind::File;
  }
  SsvqeConfig& s = cfg.ssvqe;
  if (f.evaluator || f.shots) {
    const int shots = f.shots.value_or(s.evaluator.kind == EvaluatorKind::Exact ? 1024 : s.evaluator.shots);
    std::string kind = f.evaluator.value_or(s.evaluator.kind == EvaluatorKind::Exact   ? "exact"
                                            : s.evaluator.kind == EvaluatorKind::FixedShots ? "fixed"
                                                                                         : "adaptive");
    if (kind == "exact")
      s.evaluator = Evaluator::exact();
    else if (kind == "fixed")
      s.evaluator = Evaluator::fixed(shots);
    else if (kind == "adaptive")
      s.evaluator = Evaluator::adaptive(shots);
    else
      throw InvalidArgument(fmt::format("--evaluator must be exact, fixed or adaptive, got '{}'", kind));
  }
  if (f.noise) s.noise = *f.noise > 0.0 ? NoiseSpec::depolarizing(*f.noise) : NoiseSpec::none();
  if (f.max_iter) s.max_iterations = *f.max_iter;
  if (f.lr) s.learning_rate = *f.lr;
  if (f.weights) {
    s.weights = *f.weights;
    s.basis.clear();
    for (std::size_t j = 0; j < s.weights.size(); ++j) s.basis.push_back(j);
  }
  RlConfig& rl = cfg.ansatz.rl;
  if (f.episodes) rl.episodes = *f.episodes;
  if (f.lambda) rl.lambda = *f.lambda;
  if (f.target) rl.target_mode = parse_target_mode(*f.target);
  if (f.max_gates) rl.max_gates = *f.max_gates;
  if (f.inner_steps) rl.inner_opt_steps = *f.inner_steps;
  if (f.early_stop) rl.early_stop = true;
  if (f.adaptive_reward) rl.adaptive_reward = true;
  if (f.levels) cfg.noise_levels = *f.levels;
  if (f.seeds) cfg.seeds = *f.seeds;
  if (f.seed && !f.seeds) cfg.seeds = {*f.seed};
  return cfg;
}

std::uint64_t require_seed(const Flags& f, const ExperimentConfig& cfg) {
  if (f.seed) return *f.seed;
  if (!cfg.seeds.empty()) return cfg.seeds.front();
  throw UsageError("--seed is required for stochastic commands (or list seeds in the config)");
}

void announce(std::ostream& out, const fs::path& p) { out << "wrote " << p.string() << "\n"; }

int cmd_hamiltonian(const Flags& f, bool decompose, std::ostream& out) {
  ExperimentConfig cfg = resolve(f);
  check_qubit_count(cfg.n_qubits, "hamiltonian");
  const WaveguideOperator op = build_operator(cfg.family, cfg.n_qubits, cfg.dl);
  const std::string tag = fmt::format("{}_{}q", fmt::format("{}", to_string(op.family)), op.n_qubits);
  if (decompose) {
    const fs::path p = cfg.out_dir / fmt::format("pauli_{}.json", tag);
    save_json(p, op.pauli);
    announce(out, p);
    out << op.pauli.size() << " terms\n";
  } else {
    const fs::path p = cfg.out_dir / fmt::format("operator_{}.json", tag);
    save_json(p, operator_matrix_json(op));
    announce(out, p);
  }
  return kExitOk;
}

int cmd_ssvqe(const Flags& f, std::ostream& out) {
  ExperimentConfig cfg = resolve(f);
  const std::uint64_t seed = require_seed(f, cfg);
  cfg.validate(false);
  const WaveguideOperator op = build_operator(cfg.family, cfg.n_qubits, cfg.dl);
  const Circuit circuit = resolve_circuit(cfg.ansatz, cfg.n_qubits);
  Rng rng(seed);
  const SsvqeOutcome o = optimize(circuit, op, cfg.ssvqe, rng);
  const std::string stem = f.name.value_or("ssvqe");
  write_outcome(cfg.out_dir, stem, o, circuit);
  announce(out, cfg.out_dir / (stem + ".json"));
  announce(out, cfg.out_dir / (stem + "_trace.csv"));
  out << "energies:";
  for (double e : o.energies) out << " " << fmt9(e);
  out << "\n";
  return kExitOk;
}

int cmd_search(const Flags& f, std::ostream& out) {
  ExperimentConfig cfg = resolve(f);
  const std::uint64_t seed = require_seed(f, cfg);
  cfg.ansatz.kind = AnsatzKind::Rl;
  cfg.ansatz.rl.seed = seed;
  cfg.validate(false);
  const WaveguideOperator op = build_operator(cfg.family, cfg.n_qubits, cfg.dl);
  const RlConfig& rl = cfg.ansatz.rl;
  const int every = std::max(1, rl.episodes / 10);
  const SearchReport report = run_search(op, rl, cfg.ssvqe, [&](const EpisodeRecord& r) {
    if (r.episode % every == 0 || r.episode + 1 == rl.episodes)
      out << fmt::format("episode {:>4}  best {}  depth {}  epsilon {}  xi {}\n", r.episode, fmt9(r.best_energy),
                         r.depth, fmt9(r.epsilon), fmt9(r.xi));
  });
  write_search_report(cfg.out_dir, report, rl, op);
  announce(out, cfg.out_dir / "search_report.json");
  out << fmt::format("best circuit: {} gates ({} RY, {} CNOT), energies", report.gates.total, report.gates.ry,
                     report.gates.cnot);
  for (double e : report.best_outcome.energies) out << " " << fmt9(e);
  out << "\n";
  return kExitOk;
}

int cmd_field(const Flags& f, std::ostream& out) {
  if (f.source != "reference" && f.source != "ssvqe")
    throw InvalidArgument(fmt::format("--source must be reference or ssvqe, got '{}'", f.source));
  const ModeLabel label = parse_mode_label(f.mode_label);
  Flags g = f;
  g.family = std::string(to_string(label.family));
  ExperimentConfig cfg = resolve(g);
  const WaveguideOperator op = build_operator(label.family, cfg.n_qubits, cfg.dl);
  const int kx = eigenpair_for_index(label.family, label.m);
  const int ky = eigenpair_for_index(label.family, label.n);
  const int need = std::max(kx, ky) + 1;

  std::vector<EigenPair> solutions;
  if (f.source == "reference") {
    solutions = reference_spectrum(op, need);
  } else {
    const std::uint64_t seed = require_seed(f, cfg);
    cfg.validate(false);
    if (static_cast<int>(cfg.ssvqe.weights.size()) < need)
      throw InvalidArgument(fmt::format("{} needs {} SSVQE states; pass more --weights", f.mode_label, need));
    const Circuit circuit = resolve_circuit(cfg.ansatz, cfg.n_qubits);
    Rng rng(seed);
    SsvqeConfig s = cfg.ssvqe;
    s.noise = NoiseSpec::none();
    const SsvqeOutcome o = optimize(circuit, op, s, rng);
    std::vector<std::size_t> order(o.state_energies.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return o.state_energies[a] < o.state_energies[b]; });
    for (int k = 0; k < need; ++k) {
      const std::size_t j = order[static_cast<std::size_t>(k)];
      EigenPair p;
      p.value = o.state_energies[j];
      for (const cplx& a : o.states[j].amplitudes()) p.vector.push_back(a.real());
      fix_sign(p.vector);
      solutions.push_back(std::move(p));
    }
  }
  const ModeField field = compose_mode(label.family, solutions[static_cast<std::size_t>(kx)],
                                       solutions[static_cast<std::size_t>(ky)], label.m, label.n);
  std::ostringstream csv;
  write_field_csv(csv, field);
  const fs::path grid = cfg.out_dir / fmt::format("field_{}.csv", f.mode_label);
  const fs::path meta = cfg.out_dir / fmt::format("field_{}.json", f.mode_label);
  save_text(grid, csv.str());
  nlohmann::json m = field_metadata(field);
  m["source"] = f.source;
  save_json(meta, m);
  announce(out, grid);
  announce(out, meta);
  return kExitOk;
}

int cmd_noise(const Flags& f, std::ostream& out) {
  ExperimentConfig cfg = resolve(f);
  if (cfg.seeds.empty()) throw UsageError("noise sweep needs --seed, --seeds or seeds in the config");
  cfg.validate(true);
  const WaveguideOperator op = build_operator(cfg.family, cfg.n_qubits, cfg.dl);
  const Circuit circuit = resolve_circuit(cfg.ansatz, cfg.n_qubits);
  const auto cells = noise_sweep(circuit, op.pauli, cfg.ssvqe, cfg.noise_levels, cfg.seeds, worker_threads());

  // Per-cell files first, then the merged table in (level, seed) order.
  const fs::path cell_dir = cfg.out_dir / "cells";
  for (const SweepCell& c : cells) {
    const std::string stem = fmt::format("level_{}_seed_{}", fmt9(c.level), c.seed);
    write_outcome(cell_dir, stem, c.outcome, circuit);
  }
  save_text(cfg.out_dir / "noise_sweep.csv", sweep_csv(cells));
  std::vector<double> analytic;
  for (const EigenPair& p : reference_spectrum(op, static_cast<int>(cfg.ssvqe.weights.size())))
    analytic.push_back(std::abs(p.value) < 1e-12 ? 0.0 : p.value);
  save_text(cfg.out_dir / "noise_summary.csv", sweep_summary_csv(summarize_sweep(cells, analytic)));
  announce(out, cfg.out_dir / "noise_sweep.csv");
  announce(out, cfg.out_dir / "noise_summary.csv");
  return kExitOk;
}

int cmd_tables(const Flags& f, std::ostream& out) {
  TableInputs in;
  if (f.system == "3q")
    in.n_qubits = 3;
  else if (f.system == "5q")
    in.n_qubits = 5;
  else
    throw InvalidArgument(fmt::format("--system must be 3q or 5q, got '{}'", f.system));
  Flags g = f;
  g.qubits = in.n_qubits;
  ExperimentConfig cfg = resolve(g);
  in.seed = require_seed(f, cfg);
  in.ssvqe = cfg.ssvqe;
  if (f.rl_tm) in.rl_tm = *f.rl_tm;
  if (f.rl_te) in.rl_te = *f.rl_te;
  const Tables t = report_tables(in);
  const fs::path gates = cfg.out_dir / fmt::format("table_gates_{}.csv", f.system);
  const fs::path energies = cfg.out_dir / fmt::format("table_energies_{}.csv", f.system);
  save_text(gates, t.gates_csv);
  save_text(energies, t.energies_csv);
  announce(out, gates);
  announce(out, energies);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Waveguide eigenmodes with subspace-search VQE and RL ansatz search", "wgvqe"};
  app.require_subcommand(1);
  app.fallthrough();  // inherited, so --seed/--out/--config work after the verb
  Flags f;
  app.add_option("--config", f.config, "TOML experiment config; flags override it");
  app.add_option("--out", f.out, "output directory (default: config value or ./out)");
  app.add_option("--seed", f.seed, "seed for every stochastic component");

  auto* ham = app.add_subcommand("hamiltonian", "build the operator or its Pauli decomposition");
  ham->require_subcommand(1);
  auto* ham_build = ham->add_subcommand("build", "write the FDM matrix as JSON");
  auto* ham_dec = ham->add_subcommand("decompose", "write the Pauli decomposition as JSON");
  add_problem_options(ham_build, f);
  add_problem_options(ham_dec, f);

  auto* ssvqe = app.add_subcommand("ssvqe", "weighted SSVQE");
  ssvqe->require_subcommand(1);
  auto* ssvqe_run = ssvqe->add_subcommand("run", "one optimization: outcome JSON and trace CSV");
  add_problem_options(ssvqe_run, f);
  add_ssvqe_options(ssvqe_run, f);
  ssvqe_run->add_option("--name", f.name, "output file stem (default ssvqe)");

  auto* search = app.add_subcommand("search", "DDQN ansatz search");
  search->require_subcommand(1);
  auto* search_run = search->add_subcommand("run", "search, re-optimize the best circuit, write the report");
  add_problem_options(search_run, f);
  search_run->add_option("--episodes", f.episodes, "training episodes");
  search_run->add_option("--lambda", f.lambda, "depth penalty per gate");
  search_run->add_option("--target", f.target, "TD target: double or vanilla");
  search_run->add_option("--max-gates", f.max_gates, "episode length (default: HEA gate count)");
  search_run->add_option("--inner-steps", f.inner_steps, "Adam steps after each placed gate");
  search_run->add_option("--max-iter", f.max_iter, "Adam iterations for the final re-optimization");
  search_run->add_flag("--early-stop", f.early_stop, "end an episode once the energy beats the threshold");
  search_run->add_flag("--adaptive-reward", f.adaptive_reward, "estimate rewards with adaptive shots");

  auto* field = app.add_subcommand("field", "mode field grids");
  field->require_subcommand(1);
  auto* field_rec = field->add_subcommand("reconstruct", "field grid CSV and metadata for one mode");
  field_rec->add_option("--mode", f.mode_label, "mode label such as TM11, TM21, TE01, TE10")->required();
  field_rec->add_option("--qubits", f.qubits, "number of qubits");
  field_rec->add_option("--dl", f.dl, "grid spacing");
  field_rec->add_option("--source", f.source, "reference (exact eigenvectors) or ssvqe");
  field_rec->add_option("--layers", f.layers, "HEA layers for --source ssvqe");
  field_rec->add_option("--circuit", f.circuit, "circuit JSON for --source ssvqe");
  field_rec->add_option("--max-iter", f.max_iter, "Adam iterations for --source ssvqe");
  field_rec->add_option("--weights", f.weights, "SSVQE weights")->delimiter(',');

  auto* noise = app.add_subcommand("noise", "depolarizing-noise studies");
  noise->require_subcommand(1);
  auto* sweep = noise->add_subcommand("sweep", "optimize under every noise level x seed");
  add_problem_options(sweep, f);
  add_ssvqe_options(sweep, f);
  sweep->add_option("--levels", f.levels, "noise levels")->delimiter(',');
  sweep->add_option("--seeds", f.seeds, "seeds")->delimiter(',');

  auto* report = app.add_subcommand("report", "summary tables");
  report->require_subcommand(1);
  auto* tables = report->add_subcommand("tables", "gate-count and energy tables");
  tables->add_option("--system", f.system, "3q or 5q")->required();
  tables->add_option("--rl-tm", f.rl_tm, "RL circuit JSON for the TM operator");
  tables->add_option("--rl-te", f.rl_te, "RL circuit JSON for the TE operator");
  tables->add_option("--max-iter", f.max_iter, "Adam iterations per run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ham_build) return cmd_hamiltonian(f, false, out);
    if (*ham_dec) return cmd_hamiltonian(f, true, out);
    if (*ssvqe_run) return cmd_ssvqe(f, out);
    if (*search_run) return cmd_search(f, out);
    if (*field_rec) return cmd_field(f, out);
    if (*sweep) return cmd_noise(f, out);
    if (*tables) return cmd_tables(f, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidArgument& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace wgvqe
