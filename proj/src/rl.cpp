#include "wgvqe/rl.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <tuple>

#include <fmt/format.h>

#include "wgvqe/error.hpp"

namespace wgvqe {

std::string to_string(TargetMode m) { return m == TargetMode::Vanilla ? "vanilla" : "double"; }

TargetMode parse_target_mode(const std::string& s) {
  if (s == "vanilla") return TargetMode::Vanilla;
  if (s == "double") return TargetMode::DoubleQ;
  throw InvalidArgument(fmt::format("unknown target mode '{}' (expected vanilla or double)", s));
}

void RlConfig::validate() const {
  if (episodes < 1) throw InvalidArgument("RlConfig: episodes must be >= 1");
  if (max_gates < 0) throw InvalidArgument("RlConfig: max_gates must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("RlConfig: gamma must lie in (0, 1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw InvalidArgument("RlConfig: tau must lie in (0, 1]");
  for (double e : {epsilon_start, epsilon_end})
    if (!(e >= 0.0 && e <= 1.0)) throw InvalidArgument("RlConfig: epsilon must lie in [0, 1]");
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) throw InvalidArgument("RlConfig: epsilon decay must lie in (0, 1]");
  if (!(lambda >= 0.0)) throw InvalidArgument("RlConfig: lambda must be >= 0");
  if (!std::isfinite(bonus) || !(delta >= 0.0)) throw InvalidArgument("RlConfig: bonus must be finite and delta >= 0");
  if (inner_opt_steps < 0) throw InvalidArgument("RlConfig: inner_opt_steps must be >= 0");
  if (replay_capacity == 0 || batch_size == 0) throw InvalidArgument("RlConfig: replay capacity and batch size must be positive");
  if (hidden.empty() || std::ranges::find(hidden, std::size_t{0}) != hidden.end())
    throw InvalidArgument("RlConfig: hidden sizes must be positive");
  if (!(net_learning_rate > 0.0)) throw InvalidArgument("RlConfig: network learning rate must be positive");
  if (reward_shots < 1) throw InvalidArgument("RlConfig: reward_shots must be >= 1");
  if (reopt_candidates < 1) throw InvalidArgument("RlConfig: reopt_candidates must be >= 1");
  if (!(energy_tie_tol >= 0.0)) throw InvalidArgument("RlConfig: energy_tie_tol must be >= 0");
}

double epsilon_at(const RlConfig& cfg, int episode) {
  return std::max(cfg.epsilon_end, cfg.epsilon_start * std::pow(cfg.epsilon_decay, episode));
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidArgument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Experience e) {
  if (!items_.empty() && (e.observation.size() != items_.front().observation.size() ||
                          e.next_observation.size() != items_.front().observation.size()))
    throw InvalidArgument("ReplayBuffer: observation length differs from stored transitions");
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(e));
}

std::vector<Experience> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (items_.empty()) throw InvalidArgument("ReplayBuffer: cannot sample from an empty buffer");
  std::vector<Experience> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(items_[rng.below(items_.size())]);
  return out;
}

double reward(double energy, int depth, double lambda, double xi, double bonus) {
  double r = -energy - lambda * depth;
  if (energy < xi) r += bonus;
  return r;
}

std::vector<double> td_target(std::span<const Experience> batch, double gamma, const QNetwork& online,
                              const QNetwork& target, TargetMode mode) {
  if (batch.empty()) throw InvalidArgument("td_target: empty batch");
  std::vector<double> y;
  y.reserve(batch.size());
  for (const Experience& e : batch) {
    if (e.done || gamma == 0.0) {
      y.push_back(e.reward);
      continue;
    }
    const auto q_next = target.forward(e.next_observation);
    double bootstrap = 0.0;
    if (mode == TargetMode::Vanilla)
      bootstrap = *std::ranges::max_element(q_next);
    else
      bootstrap = q_next[online.greedy_action(e.next_observation)];
    y.push_back(e.reward + gamma * bootstrap);
  }
  return y;
}

double train_step(QNetwork& online, const QNetwork& target, std::span<const Experience> batch, double gamma,
                  Adam& optimizer, TargetMode mode) {
  const auto y = td_target(batch, gamma, online, target, mode);
  std::vector<std::vector<double>> inputs;
  std::vector<std::size_t> actions;
  inputs.reserve(batch.size());
  for (const Experience& e : batch) {
    inputs.push_back(e.observation);
    actions.push_back(e.action);
  }
  std::vector<double> grad;
  const double loss = online.loss_and_gradient(inputs, actions, y, grad);
  if (!std::isfinite(loss)) throw DivergenceError("train_step: TD loss is not finite");
  optimizer.step(online.params(), grad);
  if (!online.all_finite()) throw DivergenceError("train_step: network weights became non-finite");
  return loss;
}

void soft_update(const QNetwork& online, QNetwork& target, double tau) {
  if (!online.same_shape(target)) throw InvalidArgument("soft_update: network shapes differ");
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("soft_update: tau must lie in [0, 1]");
  const auto src = online.params();
  auto dst = target.params();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = tau * src[i] + (1.0 - tau) * dst[i];
}

GateSummary summarize_gates(const Circuit& c) {
  GateSummary g;
  g.ry = c.count(GateKind::RY);
  g.cnot = c.count(GateKind::CNOT);
  g.total = g.ry + g.cnot;
  if (g.total > 0) {
    g.ry_ratio = static_cast<double>(g.ry) / static_cast<double>(g.total);
    g.cnot_ratio = static_cast<double>(g.cnot) / static_cast<double>(g.total);
  }
  return g;
}

namespace {

struct Candidate {
  double score = 0.0;  // E + lambda * depth at the time it was seen
  double energy = 0.0;
  std::vector<double> params;
};

class EnergyProbe {
 public:
  EnergyProbe(const PauliSum& pauli, const SsvqeConfig& cfg, const RlConfig& rl, Rng rng)
      : pauli_(pauli), cfg_(cfg), rl_(rl), rng_(rng) {
    if (rl.adaptive_reward) plan_ = build_shot_plan(pauli, cfg.weights, cfg.basis);
  }

  double operator()(const Circuit& c, std::span<const double> params) {
    if (plan_) return adaptive_estimate(*plan_, c, params, rl_.reward_shots, rng_, cfg_.noise);
    const auto e = state_energies(c, params, pauli_, cfg_.basis, cfg_.noise);
    double total = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j) total += cfg_.weights[j] * e[j];
    return total;
  }

  std::vector<double> gradient(const Circuit& c, std::span<const double> params) {
    if (!cfg_.noise.active()) return adjoint_gradient(c, params, pauli_, cfg_.weights, cfg_.basis);
    SsvqeConfig exact = cfg_;
    exact.evaluator = Evaluator::exact();
    return parameter_shift_gradient(c, params, pauli_, exact, rng_);
  }

 private:
  const PauliSum& pauli_;
  const SsvqeConfig& cfg_;
  const RlConfig& rl_;
  Rng rng_;
  std::optional<ShotPlan> plan_;
};

double energy_scale(const PauliSum& pauli, std::span<const double> weights) {
  double alpha = 0.0;
  for (const PauliTerm& t : pauli.terms()) alpha += std::abs(t.coeff);
  double w = 0.0;
  for (double x : weights) w += x;
  return alpha * w > 0.0 ? alpha * w : 1.0;
}

}  // namespace

SearchReport run_search(const WaveguideOperator& op, const RlConfig& rl, const SsvqeConfig& ssvqe,
                        const EpisodeCallback& on_episode) {
  rl.validate();
  const int n = op.n_qubits;
  ssvqe.validate(n);
  const ActionCatalog catalog(n);
  const int max_gates = rl.resolved_max_gates(n);
  const auto na = static_cast<std::size_t>(catalog.size());
  const std::size_t obs_len = static_cast<std::size_t>(max_gates) * na + 1;

  const Rng root(rl.seed);
  Rng net_rng = root.split(1);
  Rng act_rng = root.split(2);
  Rng replay_rng = root.split(3);
  EnergyProbe probe(op.pauli, ssvqe, rl, root.split(4));

  QNetwork online(obs_len, rl.hidden, na, net_rng);
  QNetwork target = online;
  Adam net_opt(online.n_params(), AdamOptions{.learning_rate = rl.net_learning_rate});
  ReplayBuffer replay(rl.replay_capacity);
  const double scale = energy_scale(op.pauli, ssvqe.weights);

  const double empty_energy = probe(Circuit(n), {});
  double xi = empty_energy;
  double best_hist = std::numeric_limits<double>::infinity();
  std::map<std::vector<int>, Candidate> candidates;

  SearchReport report;
  for (int ep = 0; ep < rl.episodes; ++ep) {
    EpisodeRecord rec;
    rec.episode = ep;
    rec.epsilon = epsilon_at(rl, ep);
    rec.xi = xi;
    double ep_best = std::numeric_limits<double>::infinity();

    GrowingAnsatz g(n);
    std::vector<double> obs = encode_observation(g.circuit, empty_energy, max_gates, catalog, scale);
    for (int t = 0; t < max_gates; ++t) {
      std::size_t action = 0;
      if (act_rng.uniform() < rec.epsilon)
        action = act_rng.below(na);
      else
        action = online.greedy_action(obs);
      g.apply(catalog, static_cast<int>(action), max_gates);

      if (!g.params.empty() && rl.inner_opt_steps > 0) {
        Adam inner(g.params.size(), AdamOptions{.learning_rate = ssvqe.learning_rate});
        for (int s = 0; s < rl.inner_opt_steps; ++s) inner.step(g.params, probe.gradient(g.circuit, g.params));
      }
      const double energy = probe(g.circuit, g.params);
      const int depth = static_cast<int>(g.circuit.size());
      if (!std::isfinite(energy)) {
        rec.aborted = true;
        break;
      }

      const double r = reward(energy, depth, rl.lambda, xi, rl.bonus);
      const bool done = depth == max_gates || (rl.early_stop && energy < xi);
      auto next_obs = encode_observation(g.circuit, energy, max_gates, catalog, scale);
      replay.push({obs, action, r, next_obs, done});
      rec.reward_sum += r;
      ep_best = std::min(ep_best, energy);

      const double score = energy + rl.lambda * depth;
      auto [it, fresh] = candidates.try_emplace(*g.circuit.history());
      if (fresh || score < it->second.score) it->second = {score, energy, g.params};

      if (replay.size() >= rl.batch_size) {
        const auto batch = replay.sample(rl.batch_size, replay_rng);
        train_step(online, target, batch, rl.gamma, net_opt, rl.target_mode);
        soft_update(online, target, rl.tau);
      }
      obs = std::move(next_obs);
      if (done) break;
    }

    rec.depth = static_cast<int>(g.circuit.size());
    rec.best_energy = ep_best;
    if (std::isfinite(ep_best)) {
      best_hist = std::min(best_hist, ep_best);
      xi = std::min(xi, best_hist + rl.delta);
    }
    report.episodes.push_back(rec);
    if (on_episode) on_episode(rec);
  }
  report.best_episode_energy = best_hist;
  if (candidates.empty()) throw Error("run_search: no episode produced a finite energy");

  // Re-optimization pool: lowest E + lambda * depth, shorter histories first on ties.
  std::vector<std::pair<const std::vector<int>*, const Candidate*>> pool;
  for (const auto& [hist, cand] : candidates) pool.emplace_back(&hist, &cand);
  std::ranges::sort(pool, [](const auto& a, const auto& b) {
    return std::tie(a.second->score, *a.first) < std::tie(b.second->score, *b.first);
  });
  pool.resize(std::min(pool.size(), static_cast<std::size_t>(rl.reopt_candidates)));

  const auto m = static_cast<std::int64_t>(pool.size());
  std::vector<std::optional<SsvqeOutcome>> outcomes(pool.size());
  std::vector<Circuit> circuits(pool.size());
  std::vector<std::exception_ptr> errors(pool.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < m; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      circuits[idx] = circuit_from_history(n, *pool[idx].first, max_gates);
      Rng rng = root.split(1000 + static_cast<std::uint64_t>(k));
      outcomes[idx] = optimize(circuits[idx], op.pauli, ssvqe, rng, pool[idx].second->params);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::size_t best = 0;
  for (std::size_t k = 1; k < pool.size(); ++k) {
    const double ek = outcomes[k]->final_cost;
    const double eb = outcomes[best]->final_cost;
    if (ek < eb - rl.energy_tie_tol) {
      best = k;
    } else if (ek <= eb + rl.energy_tie_tol) {
      const auto sk = std::make_pair(circuits[k].size(), circuits[k].count(GateKind::CNOT));
      const auto sb = std::make_pair(circuits[best].size(), circuits[best].count(GateKind::CNOT));
      if (sk < sb) best = k;
    }
  }
  report.best_circuit = circuits[best];
  report.best_outcome = std::move(*outcomes[best]);
  report.gates = summarize_gates(report.best_circuit);
  report.candidates_reoptimized = static_cast<int>(pool.size());
  return report;
}

void to_json(nlohmann::json& j, const EpisodeRecord& r) {
  j = {{"episode", r.episode}, {"best_energy", r.best_energy}, {"depth", r.depth}, {"reward_sum", r.reward_sum},
       {"epsilon", r.epsilon}, {"xi", r.xi}, {"aborted", r.aborted}};
}

void to_json(nlohmann::json& j, const GateSummary& g) {
  j = {{"ry", g.ry}, {"cnot", g.cnot}, {"total", g.total}, {"ry_ratio", g.ry_ratio}, {"cnot_ratio", g.cnot_ratio}};
}

}  // namespace wgvqe
