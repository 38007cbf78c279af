#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rldwa/net.hpp"
#include "rldwa/rng.hpp"

namespace rldwa {

constexpr int kStateDim = 3;

struct Transition {
  std::array<double, kStateDim> state{};
  double action = 0.0;
  double reward = 0.0;
  std::array<double, kStateDim> next_state{};
  double done = 0.0;  // 1 on terminal transitions
};

/// Fixed-capacity ring of transitions with uniform without-replacement
/// batch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(const Transition& t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return data_[i]; }

  /// Draws min(n, size) distinct transitions.
  std::vector<Transition> sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> data_;
};

struct EpsilonSchedule {
  double eps0 = 1.0;
  double decay = 0.992;
  double eps_min = 0.05;
};

/// max(eps_min, eps0 * decay^episode)
double epsilon_at(const EpsilonSchedule& schedule, long episode);

struct SacConfig {
  double gamma = 0.99;
  double tau = 0.005;
  double lr = 2e-4;
  int batch_size = 256;
  std::size_t buffer_capacity = 100000;
  long warmup_steps = 1000;
  int update_every = 1;
  std::vector<int> hidden{512, 256, 256};
  bool alpha_auto = true;
  double alpha_init = 0.2;
  double target_entropy = -1.0;  // -(action dim)
  EpsilonSchedule epsilon;
  double action_low = -1.0;
  double action_high = 1.0;
  double log_std_min = -20.0;
  double log_std_max = 2.0;
};

struct LossReport {
  double critic1 = 0.0;
  double critic2 = 0.0;
  double actor = 0.0;
  double alpha = 0.0;
  double entropy = 0.0;  // mean of -log pi over the actor batch
};

/// Squashed-Gaussian head math, kept as pure functions so the gradients can
/// be finite-difference checked in isolation.
struct SquashParams {
  double low = -1.0;
  double high = 1.0;
  double log_std_min = -20.0;
  double log_std_max = 2.0;
  double tiny = 1e-6;  // guard inside the tanh correction log
};

struct SquashEval {
  double mean = 0.0;
  double log_std = 0.0;        // after clamping
  bool clamp_active = false;   // log_std_raw fell outside the bounds
  double noise = 0.0;          // the standard-normal draw
  double u = 0.0;              // pre-squash Gaussian sample
  double tanh_u = 0.0;
  double action = 0.0;
  double log_prob = 0.0;
};

struct SquashGrads {
  double da_dmean = 0.0;
  double da_dlogstd = 0.0;   // w.r.t. the raw (pre-clamp) log_std output
  double dlp_dmean = 0.0;
  double dlp_dlogstd = 0.0;  // w.r.t. the raw (pre-clamp) log_std output
};

/// Reparameterized sample a = c + s*tanh(mean + sigma*noise) together with
/// log pi(a|s) = logN(u) - log(1 - tanh(u)^2 + tiny) - log(s).
SquashEval squash_eval(double mean_raw, double log_std_raw, double noise, const SquashParams& p);

/// Exact partials of (action, log_prob) w.r.t. the raw network outputs,
/// holding the noise fixed.
SquashGrads squash_grads(const SquashEval& e, const SquashParams& p);

/// Density evaluation at an external action strictly inside (low, high).
double squash_log_prob(double mean_raw, double log_std_raw, double action, const SquashParams& p);

/// Soft Actor-Critic over a scalar action (the yaw rate), with a
/// tanh-squashed Gaussian actor, twin critics with polyak-averaged targets,
/// and optional entropy temperature auto-tuning.
class SacAgent {
 public:
  SacAgent(const SacConfig& cfg, std::uint64_t seed);

  /// With probability epsilon returns a uniform action in [low, high];
  /// otherwise samples the squashed Gaussian (stochastic) or returns the
  /// squashed mean (deterministic). Always within bounds.
  double act(std::span<const double> state, bool deterministic, double epsilon, Rng& rng) const;

  /// Log density of the squashed policy at an action strictly inside
  /// (low, high).
  double log_prob(std::span<const double> state, double action) const;

  LossReport train_step(std::span<const Transition> batch, Rng& rng);

  double alpha() const { return std::exp(log_alpha_); }
  const SacConfig& config() const { return cfg_; }
  const Mlp& actor() const { return actor_; }

  void save_checkpoint(const std::string& path) const;
  static SacAgent load_checkpoint(const std::string& path);

 private:
  SquashParams squash_params() const;
  SquashEval eval_policy(std::span<const double> state, ForwardCache& cache, double noise) const;
  double critic_forward(const Mlp& critic, std::span<const double> state, double action,
                        ForwardCache& cache) const;

  SacConfig cfg_;
  Mlp actor_;
  Mlp critic1_, critic2_;
  Mlp target1_, target2_;
  double log_alpha_ = 0.0;
  AdamState actor_opt_, critic1_opt_, critic2_opt_, alpha_opt_;

  friend void polyak_update(Mlp&, const Mlp&, double);
};

/// target <- (1 - tau) * target + tau * online, elementwise.
void polyak_update(Mlp& target, const Mlp& online, double tau);

}  // namespace rldwa
