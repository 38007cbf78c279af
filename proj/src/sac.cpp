#include "rldwa/sac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "rldwa/checkpoint.hpp"

namespace rldwa {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5*log(2*pi)
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
  data_.reserve(capacity_);
}

void ReplayBuffer::push(const Transition& t) {
  if (data_.size() < capacity_) {
    data_.push_back(t);
  } else {
    data_[next_] = t;
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (data_.empty()) throw std::runtime_error("ReplayBuffer::sample: buffer is empty");
  std::vector<Transition> out;
  if (n >= data_.size()) {
    out.assign(data_.begin(), data_.end());
    return out;
  }
  // Floyd's algorithm: n distinct indices in [0, size).
  std::unordered_set<std::size_t> chosen;
  out.reserve(n);
  for (std::size_t i = data_.size() - n; i < data_.size(); ++i) {
    const std::size_t j = static_cast<std::size_t>(rng.index(i + 1));
    const std::size_t pick = chosen.insert(j).second ? j : i;
    if (pick != j) chosen.insert(pick);
    out.push_back(data_[pick]);
  }
  return out;
}

double epsilon_at(const EpsilonSchedule& schedule, long episode) {
  if (episode < 0) throw std::invalid_argument("epsilon_at: episode must be >= 0");
  return std::max(schedule.eps_min,
                  schedule.eps0 * std::pow(schedule.decay, static_cast<double>(episode)));
}

SquashEval squash_eval(double mean_raw, double log_std_raw, double noise, const SquashParams& p) {
  SquashEval e;
  e.mean = mean_raw;
  e.log_std = std::clamp(log_std_raw, p.log_std_min, p.log_std_max);
  e.clamp_active = log_std_raw < p.log_std_min || log_std_raw > p.log_std_max;
  e.noise = noise;
  const double sigma = std::exp(e.log_std);
  e.u = e.mean + sigma * noise;
  e.tanh_u = std::tanh(e.u);
  const double center = 0.5 * (p.high + p.low);
  const double scale = 0.5 * (p.high - p.low);
  e.action = center + scale * e.tanh_u;
  e.log_prob = -0.5 * noise * noise - e.log_std - kHalfLog2Pi -
               std::log(1.0 - e.tanh_u * e.tanh_u + p.tiny) - std::log(scale);
  return e;
}

SquashGrads squash_grads(const SquashEval& e, const SquashParams& p) {
  SquashGrads g;
  const double scale = 0.5 * (p.high - p.low);
  const double sigma = std::exp(e.log_std);
  const double sech2 = 1.0 - e.tanh_u * e.tanh_u;
  const double du_dlogstd = sigma * e.noise;  // u = mean + exp(log_std)*noise
  const double dlp_du = 2.0 * e.tanh_u * sech2 / (sech2 + p.tiny);

  g.da_dmean = scale * sech2;
  g.dlp_dmean = dlp_du;
  if (e.clamp_active) {
    g.da_dlogstd = 0.0;
    g.dlp_dlogstd = 0.0;
  } else {
    g.da_dlogstd = scale * sech2 * du_dlogstd;
    g.dlp_dlogstd = dlp_du * du_dlogstd - 1.0;
  }
  return g;
}

double squash_log_prob(double mean_raw, double log_std_raw, double action, const SquashParams& p) {
  if (!(action > p.low && action < p.high))
    throw std::invalid_argument("squash_log_prob: action must lie strictly inside (low, high)");
  const double log_std = std::clamp(log_std_raw, p.log_std_min, p.log_std_max);
  const double sigma = std::exp(log_std);
  const double center = 0.5 * (p.high + p.low);
  const double scale = 0.5 * (p.high - p.low);
  const double t = (action - center) / scale;
  const double u = std::atanh(t);
  const double z = (u - mean_raw) / sigma;
  return -0.5 * z * z - log_std - kHalfLog2Pi - std::log(1.0 - t * t + p.tiny) - std::log(scale);
}

SacAgent::SacAgent(const SacConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  if (!(cfg.action_high > cfg.action_low))
    throw std::invalid_argument("SacAgent: action_high must exceed action_low");
  std::vector<int> actor_dims{kStateDim};
  std::vector<int> critic_dims{kStateDim + 1};
  for (int h : cfg.hidden) {
    actor_dims.push_back(h);
    critic_dims.push_back(h);
  }
  actor_dims.push_back(2);  // mean, log_std
  critic_dims.push_back(1);

  Rng init_rng(seed);
  actor_ = Mlp(actor_dims);
  actor_.init_random(init_rng);
  critic1_ = Mlp(critic_dims);
  critic1_.init_random(init_rng);
  critic2_ = Mlp(critic_dims);
  critic2_.init_random(init_rng);
  target1_ = critic1_;
  target2_ = critic2_;

  log_alpha_ = std::log(cfg.alpha_init);
  actor_opt_.lr = critic1_opt_.lr = critic2_opt_.lr = alpha_opt_.lr = cfg.lr;
}

SquashParams SacAgent::squash_params() const {
  SquashParams p;
  p.low = cfg_.action_low;
  p.high = cfg_.action_high;
  p.log_std_min = cfg_.log_std_min;
  p.log_std_max = cfg_.log_std_max;
  return p;
}

SquashEval SacAgent::eval_policy(std::span<const double> state, ForwardCache& cache,
                                 double noise) const {
  const std::vector<double>& out = actor_.forward(state, cache);
  return squash_eval(out[0], out[1], noise, squash_params());
}

double SacAgent::critic_forward(const Mlp& critic, std::span<const double> state, double action,
                                ForwardCache& cache) const {
  std::array<double, kStateDim + 1> input{};
  for (int i = 0; i < kStateDim; ++i) input[static_cast<std::size_t>(i)] = state[static_cast<std::size_t>(i)];
  input[kStateDim] = action;
  return critic.forward(input, cache)[0];
}

double SacAgent::act(std::span<const double> state, bool deterministic, double epsilon,
                     Rng& rng) const {
  if (state.size() != kStateDim) throw std::invalid_argument("SacAgent::act: state must have length 3");
  for (double s : state)
    if (!std::isfinite(s)) throw std::invalid_argument("SacAgent::act: non-finite state");

  if (epsilon > 0.0 && rng.uniform() < epsilon)
    return rng.uniform(cfg_.action_low, cfg_.action_high);

  ForwardCache cache;
  const SquashEval e = eval_policy(state, cache, deterministic ? 0.0 : rng.gaussian());
  return std::clamp(e.action, cfg_.action_low, cfg_.action_high);
}

double SacAgent::log_prob(std::span<const double> state, double action) const {
  if (state.size() != kStateDim)
    throw std::invalid_argument("SacAgent::log_prob: state must have length 3");
  const std::vector<double> out = actor_.forward(state);
  return squash_log_prob(out[0], out[1], action, squash_params());
}

LossReport SacAgent::train_step(std::span<const Transition> batch, Rng& rng) {
  if (batch.empty()) throw std::invalid_argument("SacAgent::train_step: empty batch");
  const std::size_t n = batch.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double alpha_now = std::exp(log_alpha_);

  // Bootstrapped targets from the target critics and a fresh next action.
  std::vector<double> targets(n);
  {
    ForwardCache pc, c1, c2;
    for (std::size_t i = 0; i < n; ++i) {
      const Transition& tr = batch[i];
      const SquashEval next = eval_policy(tr.next_state, pc, rng.gaussian());
      const double q1 = critic_forward(target1_, tr.next_state, next.action, c1);
      const double q2 = critic_forward(target2_, tr.next_state, next.action, c2);
      const double soft_value = std::min(q1, q2) - alpha_now * next.log_prob;
      targets[i] = tr.reward + cfg_.gamma * (1.0 - tr.done) * soft_value;
    }
  }

  LossReport report;

  // Critic regression toward the targets.
  {
    ForwardCache cache;
    MlpGrads g1 = critic1_.zero_grads();
    MlpGrads g2 = critic2_.zero_grads();
    for (std::size_t i = 0; i < n; ++i) {
      const Transition& tr = batch[i];
      const double q1 = critic_forward(critic1_, tr.state, tr.action, cache);
      const double d1 = q1 - targets[i];
      report.critic1 += d1 * d1 * inv_n;
      const std::array<double, 1> og1{2.0 * d1 * inv_n};
      critic1_.backward(cache, og1, g1);

      const double q2 = critic_forward(critic2_, tr.state, tr.action, cache);
      const double d2 = q2 - targets[i];
      report.critic2 += d2 * d2 * inv_n;
      const std::array<double, 1> og2{2.0 * d2 * inv_n};
      critic2_.backward(cache, og2, g2);
    }
    adam_step(critic1_.param_views(), critic1_.grad_views(g1), critic1_opt_);
    adam_step(critic2_.param_views(), critic2_.grad_views(g2), critic2_opt_);
  }

  // Actor ascends min(Q1,Q2)(s, a_theta) - alpha * log pi.
  double mean_log_prob = 0.0;
  {
    ForwardCache actor_cache, critic_cache;
    MlpGrads actor_grads = actor_.zero_grads();
    MlpGrads scratch = critic1_.zero_grads();  // critic params are not updated here
    std::vector<double> critic_input_grad;
    for (std::size_t i = 0; i < n; ++i) {
      const Transition& tr = batch[i];
      const SquashEval e = eval_policy(tr.state, actor_cache, rng.gaussian());

      const double q1 = critic_forward(critic1_, tr.state, e.action, critic_cache);
      ForwardCache critic2_cache;
      const double q2 = critic_forward(critic2_, tr.state, e.action, critic2_cache);
      const bool use_first = q1 <= q2;
      const double qmin = use_first ? q1 : q2;

      report.actor += (alpha_now * e.log_prob - qmin) * inv_n;
      mean_log_prob += e.log_prob * inv_n;

      const std::array<double, 1> og{1.0};
      scratch.zero();
      if (use_first) {
        critic1_.backward(critic_cache, og, scratch, &critic_input_grad);
      } else {
        critic2_.backward(critic2_cache, og, scratch, &critic_input_grad);
      }
      const double dq_da = critic_input_grad[kStateDim];

      const SquashGrads sg = squash_grads(e, squash_params());
      const std::array<double, 2> actor_og{
          inv_n * (alpha_now * sg.dlp_dmean - dq_da * sg.da_dmean),
          inv_n * (alpha_now * sg.dlp_dlogstd - dq_da * sg.da_dlogstd)};
      actor_.backward(actor_cache, actor_og, actor_grads);
    }
    adam_step(actor_.param_views(), actor_.grad_views(actor_grads), actor_opt_);
  }

  // Temperature update toward the entropy target (auto mode only).
  if (cfg_.alpha_auto) {
    const double grad = -std::exp(log_alpha_) * (mean_log_prob + cfg_.target_entropy);
    std::array<double, 1> param{log_alpha_};
    const std::array<double, 1> g{grad};
    std::vector<std::span<double>> pv{std::span<double>(param)};
    std::vector<std::span<const double>> gv{std::span<const double>(g)};
    adam_step(pv, gv, alpha_opt_);
    log_alpha_ = param[0];
  }

  polyak_update(target1_, critic1_, cfg_.tau);
  polyak_update(target2_, critic2_, cfg_.tau);

  report.alpha = std::exp(log_alpha_);
  report.entropy = -mean_log_prob;
  return report;
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  if (target.layers().size() != online.layers().size())
    throw std::invalid_argument("polyak_update: layer count mismatch");
  for (std::size_t li = 0; li < target.layers().size(); ++li) {
    MlpLayer& t = target.layers()[li];
    const MlpLayer& o = online.layers()[li];
    if (t.W.size() != o.W.size() || t.b.size() != o.b.size())
      throw std::invalid_argument("polyak_update: layer shape mismatch");
    for (std::size_t k = 0; k < t.W.size(); ++k) t.W[k] = (1.0 - tau) * t.W[k] + tau * o.W[k];
    for (std::size_t k = 0; k < t.b.size(); ++k) t.b[k] = (1.0 - tau) * t.b[k] + tau * o.b[k];
  }
}

namespace {

void append_adam_tensors(std::vector<NamedTensor>& out, const std::string& prefix,
                         const AdamState& opt) {
  NamedTensor step;
  step.name = prefix + ".step";
  step.rows = step.cols = 1;
  step.values = {static_cast<double>(opt.step_count)};
  out.push_back(std::move(step));
  for (std::size_t t = 0; t < opt.m.size(); ++t) {
    NamedTensor m;
    m.name = prefix + ".m" + std::to_string(t);
    m.rows = opt.m[t].size();
    m.cols = 1;
    m.values = opt.m[t];
    out.push_back(std::move(m));
    NamedTensor v;
    v.name = prefix + ".v" + std::to_string(t);
    v.rows = opt.v[t].size();
    v.cols = 1;
    v.values = opt.v[t];
    out.push_back(std::move(v));
  }
}

void adam_from_tensors(const std::vector<NamedTensor>& tensors, const std::string& prefix,
                       AdamState& opt) {
  const NamedTensor* step = find_tensor(tensors, prefix + ".step");
  if (!step) return;  // checkpoint without optimizer state: start fresh
  opt.step_count = static_cast<long>(step->values[0]);
  opt.m.clear();
  opt.v.clear();
  for (std::size_t t = 0;; ++t) {
    const NamedTensor* m = find_tensor(tensors, prefix + ".m" + std::to_string(t));
    const NamedTensor* v = find_tensor(tensors, prefix + ".v" + std::to_string(t));
    if (!m || !v) break;
    opt.m.push_back(m->values);
    opt.v.push_back(v->values);
  }
}

}  // namespace

void SacAgent::save_checkpoint(const std::string& path) const {
  std::vector<NamedTensor> tensors;
  append_mlp_tensors(tensors, "actor", actor_);
  append_mlp_tensors(tensors, "critic1", critic1_);
  append_mlp_tensors(tensors, "critic2", critic2_);
  append_mlp_tensors(tensors, "target1", target1_);
  append_mlp_tensors(tensors, "target2", target2_);

  const auto scalar = [&](const std::string& name, double value) {
    NamedTensor t;
    t.name = name;
    t.rows = t.cols = 1;
    t.values = {value};
    tensors.push_back(std::move(t));
  };
  scalar("log_alpha", log_alpha_);
  scalar("meta.action_low", cfg_.action_low);
  scalar("meta.action_high", cfg_.action_high);
  scalar("meta.log_std_min", cfg_.log_std_min);
  scalar("meta.log_std_max", cfg_.log_std_max);
  scalar("meta.gamma", cfg_.gamma);
  scalar("meta.tau", cfg_.tau);
  scalar("meta.lr", cfg_.lr);
  scalar("meta.alpha_auto", cfg_.alpha_auto ? 1.0 : 0.0);
  scalar("meta.target_entropy", cfg_.target_entropy);

  append_adam_tensors(tensors, "opt.actor", actor_opt_);
  append_adam_tensors(tensors, "opt.critic1", critic1_opt_);
  append_adam_tensors(tensors, "opt.critic2", critic2_opt_);
  append_adam_tensors(tensors, "opt.alpha", alpha_opt_);

  write_tensor_file(path, tensors);
}

SacAgent SacAgent::load_checkpoint(const std::string& path) {
  const std::vector<NamedTensor> tensors = read_tensor_file(path);

  Mlp actor = mlp_from_tensors(tensors, "actor");
  if (actor.input_size() != kStateDim || actor.output_size() != 2)
    throw std::runtime_error("checkpoint: actor shape is not state(3) -> 2");

  SacConfig cfg;
  cfg.hidden.clear();
  for (std::size_t i = 0; i + 1 < actor.layers().size(); ++i)
    cfg.hidden.push_back(actor.layers()[i].out);
  cfg.action_low = scalar_from_tensors(tensors, "meta.action_low");
  cfg.action_high = scalar_from_tensors(tensors, "meta.action_high");
  cfg.log_std_min = scalar_from_tensors(tensors, "meta.log_std_min");
  cfg.log_std_max = scalar_from_tensors(tensors, "meta.log_std_max");
  cfg.gamma = scalar_from_tensors(tensors, "meta.gamma");
  cfg.tau = scalar_from_tensors(tensors, "meta.tau");
  cfg.lr = scalar_from_tensors(tensors, "meta.lr");
  cfg.alpha_auto = scalar_from_tensors(tensors, "meta.alpha_auto") != 0.0;
  cfg.target_entropy = scalar_from_tensors(tensors, "meta.target_entropy");

  SacAgent agent(cfg, 0);
  agent.actor_ = std::move(actor);
  agent.critic1_ = mlp_from_tensors(tensors, "critic1");
  agent.critic2_ = mlp_from_tensors(tensors, "critic2");
  agent.target1_ = mlp_from_tensors(tensors, "target1");
  agent.target2_ = mlp_from_tensors(tensors, "target2");
  if (agent.critic1_.input_size() != kStateDim + 1 || agent.critic1_.output_size() != 1)
    throw std::runtime_error("checkpoint: critic shape is not state+action(4) -> 1");
  agent.log_alpha_ = scalar_from_tensors(tensors, "log_alpha");
  adam_from_tensors(tensors, "opt.actor", agent.actor_opt_);
  adam_from_tensors(tensors, "opt.critic1", agent.critic1_opt_);
  adam_from_tensors(tensors, "opt.critic2", agent.critic2_opt_);
  adam_from_tensors(tensors, "opt.alpha", agent.alpha_opt_);
  return agent;
}

}  // namespace rldwa
