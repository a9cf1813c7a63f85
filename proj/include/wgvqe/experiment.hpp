#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wgvqe/rl.hpp"
#include "wgvqe/ssvqe.hpp"
#include "wgvqe/waveguide.hpp"

namespace wgvqe {

enum class AnsatzKind { Hea, Rl, File };

struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::Hea;
  int layers = 0;  ///< 0 selects default_hea_layers(n)
  std::filesystem::path path;
  RlConfig rl;
};

struct ExperimentConfig {
  ModeFamily family = ModeFamily::TM;
  int n_qubits = 3;
  double dl = 1.0;
  AnsatzSpec ansatz;
  SsvqeConfig ssvqe;
  std::vector<double> noise_levels{0.001, 0.005, 0.01, 0.02};
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out_dir = "out";

  /// Throws InvalidArgument on out-of-range values and IoError when a
  /// referenced circuit file is missing.
  void validate(bool need_seeds) const;
};

/// Parses a TOML document; keys absent from it keep their defaults.
/// Relative circuit paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& file);

Circuit load_circuit(const std::filesystem::path& file);
void save_json(const std::filesystem::path& file, const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& file);
/// Writes text to a file, creating parent directories.
void save_text(const std::filesystem::path& file, const std::string& text);

/// Circuit described by the spec (HEA or file). RL specs are rejected; the
/// search produces its circuit through run_search.
Circuit resolve_circuit(const AnsatzSpec& spec, int n_qubits);

/// `iter,cost,E0,E1,...`; energies per row in ascending order.
std::string trace_csv(const SsvqeOutcome& outcome);
/// {"energies", "state_energies", "params", "iterations", "final_cost",
///  "cost_trace_file", "circuit"}; energies rounded to 9 significant digits.
nlohmann::json outcome_json(const SsvqeOutcome& outcome, const Circuit& circuit, const std::string& trace_file);

/// Writes <stem>.json and <stem>_trace.csv under dir.
void write_outcome(const std::filesystem::path& dir, const std::string& stem, const SsvqeOutcome& outcome,
                   const Circuit& circuit);

/// `episode,best_energy,depth,reward_sum,epsilon,xi`
std::string episode_csv(const std::vector<EpisodeRecord>& episodes);

/// Writes episodes.csv, best_circuit.json, best_outcome.json,
/// best_outcome_trace.csv and search_report.json under dir.
void write_search_report(const std::filesystem::path& dir, const SearchReport& report, const RlConfig& rl,
                         const WaveguideOperator& op);

struct SweepRow {
  double level = 0.0;
  std::uint64_t seed = 0;
  int iter = 0;
  double cost = 0.0;
  std::vector<double> energies;  ///< ascending
};

struct SweepCell {
  double level = 0.0;
  std::uint64_t seed = 0;
  SsvqeOutcome outcome;
};

/// Optimizes `circuit` under depolarizing noise for every (level, seed)
/// cell. Cells run on up to `threads` workers; each starts from the same
/// seed-derived parameters at every level. Results are ordered by
/// (level, seed).
std::vector<SweepCell> noise_sweep(const Circuit& circuit, const PauliSum& pauli, const SsvqeConfig& base,
                                   const std::vector<double>& levels, const std::vector<std::uint64_t>& seeds,
                                   int threads);

/// Tidy `level,seed,iter,cost,E0,E1` rows for every cell's trace.
std::string sweep_csv(const std::vector<SweepCell>& cells);

/// Per level: mean over seeds of |E_k - analytic_k|.
struct SweepSummaryRow {
  double level = 0.0;
  std::vector<double> mean_abs_error;
};
std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SweepCell>& cells, const std::vector<double>& analytic);
std::string sweep_summary_csv(const std::vector<SweepSummaryRow>& rows);

/// Thread budget from WGVQE_THREADS, else the hardware concurrency.
int worker_threads();

/// |E - Ea| / Ea * 100, or |E - Ea| when Ea == 0.
double reported_error(double energy, double analytic);

struct TableInputs {
  int n_qubits = 3;
  std::uint64_t seed = 0;
  SsvqeConfig ssvqe;
  std::filesystem::path rl_tm;  ///< optional RL circuit files
  std::filesystem::path rl_te;
};

struct Tables {
  std::string gates_csv;     ///< ansatz,family,ry,cnot,total
  std::string energies_csv;  ///< ansatz,family,state,energy,analytic,error,error_kind
};

/// Gate-count and energy tables for the HEA baseline (and RL circuits when
/// their files are given), both mode families.
Tables report_tables(const TableInputs& in);

}  // namespace wgvqe
