#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wgvqe/ansatz.hpp"
#include "wgvqe/optim.hpp"
#include "wgvqe/qnetwork.hpp"
#include "wgvqe/rng.hpp"
#include "wgvqe/ssvqe.hpp"
#include "wgvqe/waveguide.hpp"

namespace wgvqe {

/// Vanilla: y = r + gamma max_a' Q(s', a'; target).
/// DoubleQ: y = r + gamma Q(s', argmax_a' Q(s', a'; online); target).
enum class TargetMode { Vanilla, DoubleQ };

std::string to_string(TargetMode m);
TargetMode parse_target_mode(const std::string& s);

struct RlConfig {
  int episodes = 500;
  int max_gates = 0;  ///< 0 selects default_max_gates(n)
  double gamma = 0.99;
  double tau = 0.005;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay = 0.995;
  double lambda = 0.01;
  double bonus = 5.0;
  double delta = 1e-3;
  int inner_opt_steps = 50;
  std::size_t replay_capacity = 5000;
  std::size_t batch_size = 64;
  std::vector<std::size_t> hidden{128, 64};
  double net_learning_rate = 1e-3;
  TargetMode target_mode = TargetMode::DoubleQ;
  bool early_stop = false;
  /// Route the mid-episode energy through the adaptive shot estimator.
  bool adaptive_reward = false;
  int reward_shots = 1000;
  /// Distinct action histories re-optimized at report time.
  int reopt_candidates = 24;
  /// Energies closer than this count as equal when picking the best circuit.
  double energy_tie_tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
  int resolved_max_gates(int n_qubits) const { return max_gates > 0 ? max_gates : default_max_gates(n_qubits); }
};

/// epsilon_start * decay^episode, clamped at epsilon_end.
double epsilon_at(const RlConfig& cfg, int episode);

struct Experience {
  std::vector<double> observation;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_observation;
  bool done = false;
};

/// Fixed-capacity FIFO of transitions; the oldest entry is evicted first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  std::size_t size() const noexcept { return items_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const Experience& at(std::size_t i) const { return items_.at(i); }
  void push(Experience e);
  /// `n` uniform draws with replacement.
  std::vector<Experience> sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Experience> items_;
};

/// -E - lambda * depth, plus bonus when E < xi.
double reward(double energy, int depth, double lambda, double xi, double bonus);

std::vector<double> td_target(std::span<const Experience> batch, double gamma, const QNetwork& online,
                              const QNetwork& target, TargetMode mode);

/// One Adam step on the MSE between Q(s, a; online) and td_target.
/// Returns the loss before the step. Throws DivergenceError if the loss or
/// the updated weights are not finite.
double train_step(QNetwork& online, const QNetwork& target, std::span<const Experience> batch, double gamma,
                  Adam& optimizer, TargetMode mode);

/// target <- tau * online + (1 - tau) * target.
void soft_update(const QNetwork& online, QNetwork& target, double tau);

struct EpisodeRecord {
  int episode = 0;
  double best_energy = 0.0;  ///< lowest weighted energy seen during the episode
  int depth = 0;             ///< gate count when the episode ended
  double reward_sum = 0.0;
  double epsilon = 0.0;
  double xi = 0.0;  ///< threshold in force during the episode
  bool aborted = false;
};

struct GateSummary {
  std::size_t ry = 0;
  std::size_t cnot = 0;
  std::size_t total = 0;
  double ry_ratio = 0.0;
  double cnot_ratio = 0.0;
};

GateSummary summarize_gates(const Circuit& c);

struct SearchReport {
  std::vector<EpisodeRecord> episodes;
  double best_episode_energy = 0.0;  ///< minimum over episode best energies
  Circuit best_circuit;
  SsvqeOutcome best_outcome;  ///< best_circuit re-optimized from its search parameters
  GateSummary gates;
  int candidates_reoptimized = 0;
};

using EpisodeCallback = std::function<void(const EpisodeRecord&)>;

/// DDQN architecture search. Each episode grows a circuit from empty to
/// max_gates, running inner_opt_steps warm-started Adam iterations after
/// every placement. The report's circuit is picked among the best
/// candidates (ranked by E + lambda * depth) after full re-optimization:
/// lowest weighted energy, then fewer gates, then fewer CNOTs.
SearchReport run_search(const WaveguideOperator& op, const RlConfig& rl, const SsvqeConfig& ssvqe,
                        const EpisodeCallback& on_episode = {});

void to_json(nlohmann::json& j, const EpisodeRecord& r);
void to_json(nlohmann::json& j, const GateSummary& g);

}  // namespace wgvqe
