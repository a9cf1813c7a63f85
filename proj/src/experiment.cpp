#include "wgvqe/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <toml.hpp>

#include "wgvqe/ansatz.hpp"
#include "wgvqe/error.hpp"
#include "wgvqe/format.hpp"

namespace fs = std::filesystem;

namespace wgvqe {

void ExperimentConfig::validate(bool need_seeds) const {
  check_qubit_count(n_qubits, "ExperimentConfig");
  if (!(dl > 0.0) || !std::isfinite(dl)) throw InvalidArgument("config: dl must be positive");
  if (ansatz.kind == AnsatzKind::Hea && ansatz.layers < 0) throw InvalidArgument("config: ansatz.layers must be >= 0");
  if (ansatz.kind == AnsatzKind::File) {
    if (ansatz.path.empty()) throw InvalidArgument("config: ansatz.path is required for kind = \"file\"");
    if (!fs::exists(ansatz.path)) throw IoError(fmt::format("circuit file '{}' does not exist", ansatz.path.string()));
  }
  if (ansatz.kind == AnsatzKind::Rl) ansatz.rl.validate();
  ssvqe.validate(n_qubits);
  for (double p : noise_levels)
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(fmt::format("config: noise level {} outside [0, 1]", p));
  if (need_seeds && seeds.empty()) throw InvalidArgument("config: at least one seed is required");
}

namespace {

void reject_unknown(const toml::table& t, std::initializer_list<std::string_view> known, std::string_view where) {
  const std::set<std::string_view> allowed(known);
  for (const auto& [k, v] : t)
    if (!allowed.contains(k.str())) throw InvalidArgument(fmt::format("config: unknown key '{}{}'", where, k.str()));
}

template <typename T>
void read(const toml::table& t, std::string_view key, T& dst) {
  const toml::node* node = t.get(key);
  if (!node) return;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = node->value<double>()) {
      dst = *v;
      return;
    }
  } else if constexpr (std::is_same_v<T, bool>) {
    if (auto v = node->value<bool>()) {
      dst = *v;
      return;
    }
  } else if constexpr (std::is_integral_v<T>) {
    if (auto v = node->value<std::int64_t>()) {
      if (*v < 0 && std::is_unsigned_v<T>) throw InvalidArgument(fmt::format("config: '{}' must be non-negative", key));
      dst = static_cast<T>(*v);
      return;
    }
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = node->value<std::string>()) {
      dst = *v;
      return;
    }
  }
  throw InvalidArgument(fmt::format("config: '{}' has the wrong type", key));
}

template <typename T>
void read_array(const toml::table& t, std::string_view key, std::vector<T>& dst) {
  const toml::node* node = t.get(key);
  if (!node) return;
  const toml::array* arr = node->as_array();
  if (!arr) throw InvalidArgument(fmt::format("config: '{}' must be an array", key));
  dst.clear();
  for (const toml::node& el : *arr) {
    if constexpr (std::is_floating_point_v<T>) {
      auto v = el.value<double>();
      if (!v) throw InvalidArgument(fmt::format("config: '{}' must hold numbers", key));
      dst.push_back(*v);
    } else {
      auto v = el.value<std::int64_t>();
      if (!v || *v < 0) throw InvalidArgument(fmt::format("config: '{}' must hold non-negative integers", key));
      dst.push_back(static_cast<T>(*v));
    }
  }
}

Evaluator parse_evaluator(const std::string& kind, int shots) {
  if (kind == "exact") return Evaluator::exact();
  if (kind == "fixed") return Evaluator::fixed(shots);
  if (kind == "adaptive") return Evaluator::adaptive(shots);
  throw InvalidArgument(fmt::format("config: unknown evaluator '{}'", kind));
}

void read_rl(const toml::table& t, RlConfig& rl) {
  reject_unknown(t,
                 {"episodes", "max_gates", "gamma", "tau", "epsilon_start", "epsilon_end", "epsilon_decay", "lambda",
                  "bonus", "delta", "inner_opt_steps", "replay_capacity", "batch_size", "hidden", "net_learning_rate",
                  "target", "early_stop", "adaptive_reward", "reward_shots", "reopt_candidates", "energy_tie_tol"},
                 "rl.");
  read(t, "episodes", rl.episodes);
  read(t, "max_gates", rl.max_gates);
  read(t, "gamma", rl.gamma);
  read(t, "tau", rl.tau);
  read(t, "epsilon_start", rl.epsilon_start);
  read(t, "epsilon_end", rl.epsilon_end);
  read(t, "epsilon_decay", rl.epsilon_decay);
  read(t, "lambda", rl.lambda);
  read(t, "bonus", rl.bonus);
  read(t, "delta", rl.delta);
  read(t, "inner_opt_steps", rl.inner_opt_steps);
  read(t, "replay_capacity", rl.replay_capacity);
  read(t, "batch_size", rl.batch_size);
  read_array(t, "hidden", rl.hidden);
  read(t, "net_learning_rate", rl.net_learning_rate);
  std::string target = to_string(rl.target_mode);
  read(t, "target", target);
  rl.target_mode = parse_target_mode(target);
  read(t, "early_stop", rl.early_stop);
  read(t, "adaptive_reward", rl.adaptive_reward);
  read(t, "reward_shots", rl.reward_shots);
  read(t, "reopt_candidates", rl.reopt_candidates);
  read(t, "energy_tie_tol", rl.energy_tie_tol);
}

void read_ssvqe(const toml::table& t, SsvqeConfig& s) {
  reject_unknown(t,
                 {"weights", "basis", "learning_rate", "max_iterations", "convergence_tol", "plateau_iterations",
                  "evaluator", "shots", "noise"},
                 "ssvqe.");
  read_array(t, "weights", s.weights);
  if (t.contains("weights") && !t.contains("basis")) {
    s.basis.clear();
    for (std::size_t j = 0; j < s.weights.size(); ++j) s.basis.push_back(j);
  }
  read_array(t, "basis", s.basis);
  read(t, "learning_rate", s.learning_rate);
  read(t, "max_iterations", s.max_iterations);
  read(t, "convergence_tol", s.convergence_tol);
  read(t, "plateau_iterations", s.plateau_iterations);
  std::string kind = "exact";
  int shots = 1024;
  read(t, "evaluator", kind);
  read(t, "shots", shots);
  s.evaluator = parse_evaluator(kind, shots);
  double p = 0.0;
  read(t, "noise", p);
  s.noise = p > 0.0 ? NoiseSpec::depolarizing(p) : NoiseSpec::none();
}

}  // namespace

ExperimentConfig parse_config(std::string_view toml_text, const fs::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    throw InvalidArgument(fmt::format("config: {} (line {})", e.description(), e.source().begin.line));
  }
  reject_unknown(root, {"family", "n_qubits", "dl", "seeds", "noise_levels", "out", "ansatz", "ssvqe", "rl"}, "");

  ExperimentConfig cfg;
  std::string family(to_string(cfg.family));
  read(root, "family", family);
  cfg.family = parse_mode_family(family);
  read(root, "n_qubits", cfg.n_qubits);
  read(root, "dl", cfg.dl);
  read_array(root, "seeds", cfg.seeds);
  read_array(root, "noise_levels", cfg.noise_levels);
  std::string out = cfg.out_dir.string();
  read(root, "out", out);
  cfg.out_dir = out;

  if (const toml::table* a = root["ansatz"].as_table()) {
    reject_unknown(*a, {"kind", "layers", "path"}, "ansatz.");
    std::string kind = "hea";
    read(*a, "kind", kind);
    if (kind == "hea")
      cfg.ansatz.kind = AnsatzKind::Hea;
    else if (kind == "rl")
      cfg.ansatz.kind = AnsatzKind::Rl;
    else if (kind == "file")
      cfg.ansatz.kind = AnsatzKind::File;
    else
      throw InvalidArgument(fmt::format("config: unknown ansatz kind '{}'", kind));
    read(*a, "layers", cfg.ansatz.layers);
    std::string path;
    read(*a, "path", path);
    if (!path.empty()) cfg.ansatz.path = fs::path(path).is_absolute() ? fs::path(path) : base_dir / path;
  }
  if (const toml::table* s = root["ssvqe"].as_table()) read_ssvqe(*s, cfg.ssvqe);
  if (const toml::table* r = root["rl"].as_table()) read_rl(*r, cfg.ansatz.rl);
  return cfg;
}

ExperimentConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", file.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.parent_path());
}

nlohmann::json load_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(fmt::format("cannot open '{}'", file.string()));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(fmt::format("'{}' is not valid JSON: {}", file.string(), e.what()));
  }
}

void save_text(const fs::path& file, const std::string& text) {
  std::error_code ec;
  if (file.has_parent_path()) fs::create_directories(file.parent_path(), ec);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", file.string()));
  out << text;
  if (!out) throw IoError(fmt::format("write to '{}' failed", file.string()));
}

void save_json(const fs::path& file, const nlohmann::json& j) { save_text(file, j.dump(2) + "\n"); }

Circuit load_circuit(const fs::path& file) {
  const auto j = load_json(file);
  try {
    return j.get<Circuit>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(fmt::format("'{}' is not a circuit: {}", file.string(), e.what()));
  }
}

Circuit resolve_circuit(const AnsatzSpec& spec, int n_qubits) {
  switch (spec.kind) {
    case AnsatzKind::Hea:
      return build_hea(n_qubits, spec.layers > 0 ? spec.layers : default_hea_layers(n_qubits));
    case AnsatzKind::File: {
      Circuit c = load_circuit(spec.path);
      if (c.n_qubits() != n_qubits)
        throw InvalidArgument(fmt::format("circuit file has {} qubits, config asks for {}", c.n_qubits(), n_qubits));
      return c;
    }
    case AnsatzKind::Rl: break;
  }
  throw InvalidArgument("resolve_circuit: RL ansatz comes from `search run`");
}

namespace {

std::string energy_header(std::size_t k) {
  std::string h;
  for (std::size_t i = 0; i < k; ++i) h += fmt::format(",E{}", i);
  return h;
}

std::vector<double> sorted(std::vector<double> v) {
  std::ranges::sort(v);
  return v;
}

std::vector<double> rounded(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(round9(x));
  return out;
}

}  // namespace

std::string trace_csv(const SsvqeOutcome& outcome) {
  const std::size_t k = outcome.trace.empty() ? outcome.energies.size() : outcome.trace.front().energies.size();
  std::string s = "iter,cost" + energy_header(k) + "\n";
  for (const TracePoint& tp : outcome.trace) {
    s += fmt::format("{},{}", tp.iteration, fmt9(tp.cost));
    for (double e : sorted(tp.energies)) s += "," + fmt9(e);
    s += "\n";
  }
  return s;
}

nlohmann::json outcome_json(const SsvqeOutcome& outcome, const Circuit& circuit, const std::string& trace_file) {
  nlohmann::json j;
  j["energies"] = rounded(outcome.energies);
  j["state_energies"] = rounded(outcome.state_energies);
  j["params"] = outcome.params;
  j["iterations"] = outcome.iterations;
  j["final_cost"] = round9(outcome.final_cost);
  j["cost_trace_file"] = trace_file;
  j["circuit"] = circuit;
  return j;
}

void write_outcome(const fs::path& dir, const std::string& stem, const SsvqeOutcome& outcome, const Circuit& circuit) {
  const std::string trace = stem + "_trace.csv";
  save_text(dir / trace, trace_csv(outcome));
  save_json(dir / (stem + ".json"), outcome_json(outcome, circuit, trace));
}

std::string episode_csv(const std::vector<EpisodeRecord>& episodes) {
  std::string s = "episode,best_energy,depth,reward_sum,epsilon,xi\n";
  for (const EpisodeRecord& r : episodes)
    s += fmt::format("{},{},{},{},{},{}\n", r.episode, fmt9(r.best_energy), r.depth, fmt9(r.reward_sum),
                     fmt9(r.epsilon), fmt9(r.xi));
  return s;
}

void write_search_report(const fs::path& dir, const SearchReport& report, const RlConfig& rl,
                         const WaveguideOperator& op) {
  save_text(dir / "episodes.csv", episode_csv(report.episodes));
  save_json(dir / "best_circuit.json", report.best_circuit);
  write_outcome(dir, "best_outcome", report.best_outcome, report.best_circuit);

  nlohmann::json j;
  j["family"] = std::string(to_string(op.family));
  j["n_qubits"] = op.n_qubits;
  j["seed"] = rl.seed;
  j["episodes"] = report.episodes.size();
  j["lambda"] = rl.lambda;
  j["target"] = to_string(rl.target_mode);
  j["max_gates"] = rl.resolved_max_gates(op.n_qubits);
  j["best_episode_energy"] = round9(report.best_episode_energy);
  j["gates"] = report.gates;
  j["candidates_reoptimized"] = report.candidates_reoptimized;
  j["energies"] = rounded(report.best_outcome.energies);
  j["files"] = {{"episodes", "episodes.csv"},
                {"best_circuit", "best_circuit.json"},
                {"best_outcome", "best_outcome.json"},
                {"best_trace", "best_outcome_trace.csv"}};
  save_json(dir / "search_report.json", j);
}

int worker_threads() {
  if (const char* env = std::getenv("WGVQE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepCell> noise_sweep(const Circuit& circuit, const PauliSum& pauli, const SsvqeConfig& base,
                                   const std::vector<double>& levels, const std::vector<std::uint64_t>& seeds,
                                   int threads) {
  if (levels.empty() || seeds.empty()) throw InvalidArgument("noise_sweep: need at least one level and one seed");
  for (double p : levels) NoiseSpec::depolarizing(p).validate();
  base.validate(circuit.n_qubits());

  std::vector<double> lv = levels;
  std::vector<std::uint64_t> sd = seeds;
  std::ranges::sort(lv);
  std::ranges::sort(sd);
  std::vector<SweepCell> cells;
  for (double p : lv)
    for (std::uint64_t s : sd) cells.push_back({p, s, {}});

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cells.size());
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        SsvqeConfig cfg = base;
        cfg.noise = NoiseSpec::depolarizing(cells[i].level);
        Rng rng(cells[i].seed);
        cells[i].outcome = optimize(circuit, pauli, cfg, rng);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::clamp(threads, 1, static_cast<int>(cells.size()));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  const std::size_t k = cells.empty() ? 2 : cells.front().outcome.energies.size();
  std::string s = "level,seed,iter,cost" + energy_header(k) + "\n";
  for (const SweepCell& c : cells)
    for (const TracePoint& tp : c.outcome.trace) {
      s += fmt::format("{},{},{},{}", fmt9(c.level), c.seed, tp.iteration, fmt9(tp.cost));
      for (double e : sorted(tp.energies)) s += "," + fmt9(e);
      s += "\n";
    }
  return s;
}

std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SweepCell>& cells, const std::vector<double>& analytic) {
  std::vector<SweepSummaryRow> rows;
  std::vector<int> counts;
  for (const SweepCell& c : cells) {
    if (rows.empty() || rows.back().level != c.level) {
      rows.push_back({c.level, std::vector<double>(analytic.size(), 0.0)});
      counts.push_back(0);
    }
    for (std::size_t k = 0; k < analytic.size() && k < c.outcome.energies.size(); ++k)
      rows.back().mean_abs_error[k] += std::abs(c.outcome.energies[k] - analytic[k]);
    ++counts.back();
  }
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (double& e : rows[r].mean_abs_error) e /= counts[r];
  return rows;
}

std::string sweep_summary_csv(const std::vector<SweepSummaryRow>& rows) {
  const std::size_t k = rows.empty() ? 0 : rows.front().mean_abs_error.size();
  std::string s = "level";
  for (std::size_t i = 0; i < k; ++i) s += fmt::format(",mean_abs_err_E{}", i);
  s += "\n";
  for (const SweepSummaryRow& r : rows) {
    s += fmt9(r.level);
    for (double e : r.mean_abs_error) s += "," + fmt9(e);
    s += "\n";
  }
  return s;
}

double reported_error(double energy, double analytic) {
  const double d = std::abs(energy - analytic);
  return analytic == 0.0 ? d : d / std::abs(analytic) * 100.0;
}

Tables report_tables(const TableInputs& in) {
  check_qubit_count(in.n_qubits, "report_tables");
  Tables t;
  t.gates_csv = "ansatz,family,ry,cnot,total\n";
  t.energies_csv = "ansatz,family,state,energy,analytic,error,error_kind\n";

  struct Row {
    std::string name;
    ModeFamily family;
    Circuit circuit;
  };
  std::vector<Row> rows;
  const int layers = default_hea_layers(in.n_qubits);
  for (ModeFamily f : {ModeFamily::TM, ModeFamily::TE})
    rows.push_back({fmt::format("HEA-{}", layers), f, build_hea(in.n_qubits, layers)});
  if (!in.rl_tm.empty()) rows.push_back({"RL", ModeFamily::TM, load_circuit(in.rl_tm)});
  if (!in.rl_te.empty()) rows.push_back({"RL", ModeFamily::TE, load_circuit(in.rl_te)});

  for (const Row& r : rows) {
    if (r.circuit.n_qubits() != in.n_qubits)
      throw InvalidArgument(fmt::format("{} circuit has {} qubits, expected {}", r.name, r.circuit.n_qubits(), in.n_qubits));
    const GateSummary g = summarize_gates(r.circuit);
    t.gates_csv += fmt::format("{},{},{},{},{}\n", r.name, to_string(r.family), g.ry, g.cnot, g.total);

    const WaveguideOperator op = build_operator(r.family, in.n_qubits);
    const auto ref = reference_spectrum(op, static_cast<int>(in.ssvqe.weights.size()));
    Rng rng(in.seed);
    const SsvqeOutcome o = optimize(r.circuit, op, in.ssvqe, rng);
    for (std::size_t k = 0; k < o.energies.size(); ++k) {
      const double analytic = std::abs(ref[k].value) < 1e-12 ? 0.0 : ref[k].value;
      t.energies_csv += fmt::format("{},{},E{},{},{},{},{}\n", r.name, to_string(r.family), k, fmt9(o.energies[k]),
                                    fmt9(analytic), fmt9(reported_error(o.energies[k], analytic)),
                                    analytic == 0.0 ? "absolute" : "percent");
    }
  }
  return t;
}

}  // namespace wgvqe
