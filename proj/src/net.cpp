#include "rldwa/net.hpp"

#include <cmath>
#include <stdexcept>

namespace rldwa {

void MlpGrads::zero() {
  for (auto& l : layers) {
    std::fill(l.W.begin(), l.W.end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  }
}

void MlpGrads::scale(double s) {
  for (auto& l : layers) {
    for (double& w : l.W) w *= s;
    for (double& b : l.b) b *= s;
  }
}

Mlp::Mlp(const std::vector<int>& dims) {
  if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    if (dims[i] <= 0 || dims[i + 1] <= 0) throw std::invalid_argument("Mlp: layer sizes must be positive");
    MlpLayer l;
    l.in = dims[i];
    l.out = dims[i + 1];
    l.W.assign(static_cast<std::size_t>(l.in) * l.out, 0.0);
    l.b.assign(static_cast<std::size_t>(l.out), 0.0);
    layers_.push_back(std::move(l));
  }
}

void Mlp::init_random(Rng& rng) {
  for (auto& l : layers_) {
    const double limit = std::sqrt(6.0 / (l.in + l.out));
    for (double& w : l.W) w = rng.uniform(-limit, limit);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  }
}

std::size_t Mlp::shape_signature() const {
  std::size_t h = 1469598103934665603ull;
  for (const auto& l : layers_) {
    h = (h ^ static_cast<std::size_t>(l.in)) * 1099511628211ull;
    h = (h ^ static_cast<std::size_t>(l.out)) * 1099511628211ull;
  }
  return h;
}

const std::vector<double>& Mlp::forward(std::span<const double> input, ForwardCache& cache) const {
  if (layers_.empty()) throw std::invalid_argument("Mlp::forward: empty network");
  if (static_cast<int>(input.size()) != input_size())
    throw std::invalid_argument("Mlp::forward: input length mismatch");

  cache.inputs.resize(layers_.size());
  cache.pre.resize(layers_.size());
  cache.signature = shape_signature();

  cache.inputs[0].assign(input.begin(), input.end());
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const MlpLayer& l = layers_[li];
    const std::vector<double>& x = cache.inputs[li];
    std::vector<double>& z = cache.pre[li];
    z.assign(static_cast<std::size_t>(l.out), 0.0);
    for (int o = 0; o < l.out; ++o) {
      const double* wrow = l.W.data() + static_cast<std::size_t>(o) * l.in;
      double acc = l.b[static_cast<std::size_t>(o)];
      for (int i = 0; i < l.in; ++i) acc += wrow[i] * x[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(o)] = acc;
    }
    if (li + 1 < layers_.size()) {
      std::vector<double>& nx = cache.inputs[li + 1];
      nx.resize(z.size());
      for (std::size_t k = 0; k < z.size(); ++k) nx[k] = z[k] > 0.0 ? z[k] : 0.0;
    }
  }
  return cache.pre.back();
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  ForwardCache cache;
  return forward(input, cache);
}

void Mlp::backward(const ForwardCache& cache, std::span<const double> output_grad,
                   MlpGrads& grads, std::vector<double>* input_grad) const {
  if (cache.signature != shape_signature() || cache.inputs.size() != layers_.size())
    throw std::invalid_argument("Mlp::backward: cache does not match this network");
  if (static_cast<int>(output_grad.size()) != output_size())
    throw std::invalid_argument("Mlp::backward: output gradient length mismatch");
  if (grads.layers.size() != layers_.size())
    throw std::invalid_argument("Mlp::backward: gradient shape mismatch");

  std::vector<double> delta(output_grad.begin(), output_grad.end());
  std::vector<double> down;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const MlpLayer& l = layers_[li];
    MlpLayer& g = grads.layers[li];
    const std::vector<double>& x = cache.inputs[li];

    for (int o = 0; o < l.out; ++o) {
      const double d = delta[static_cast<std::size_t>(o)];
      g.b[static_cast<std::size_t>(o)] += d;
      double* grow = g.W.data() + static_cast<std::size_t>(o) * l.in;
      for (int i = 0; i < l.in; ++i) grow[i] += d * x[static_cast<std::size_t>(i)];
    }

    down.assign(static_cast<std::size_t>(l.in), 0.0);
    for (int o = 0; o < l.out; ++o) {
      const double d = delta[static_cast<std::size_t>(o)];
      const double* wrow = l.W.data() + static_cast<std::size_t>(o) * l.in;
      for (int i = 0; i < l.in; ++i) down[static_cast<std::size_t>(i)] += d * wrow[i];
    }

    if (li > 0) {
      const std::vector<double>& zprev = cache.pre[li - 1];
      delta.resize(down.size());
      for (std::size_t k = 0; k < down.size(); ++k)
        delta[k] = zprev[k] > 0.0 ? down[k] : 0.0;  // ReLU gate
    }
  }
  if (input_grad) *input_grad = down;
}

MlpGrads Mlp::zero_grads() const {
  MlpGrads g;
  for (const auto& l : layers_) {
    MlpLayer gl;
    gl.in = l.in;
    gl.out = l.out;
    gl.W.assign(l.W.size(), 0.0);
    gl.b.assign(l.b.size(), 0.0);
    g.layers.push_back(std::move(gl));
  }
  return g;
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.W.size() + l.b.size();
  return n;
}

std::size_t param_count(const std::vector<int>& dims) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i)
    n += static_cast<std::size_t>(dims[i + 1]) * dims[i] + dims[i + 1];
  return n;
}

std::vector<std::span<double>> Mlp::param_views() {
  std::vector<std::span<double>> v;
  for (auto& l : layers_) {
    v.emplace_back(l.W);
    v.emplace_back(l.b);
  }
  return v;
}

std::vector<std::span<const double>> Mlp::grad_views(const MlpGrads& grads) const {
  std::vector<std::span<const double>> v;
  for (const auto& l : grads.layers) {
    v.emplace_back(l.W);
    v.emplace_back(l.b);
  }
  return v;
}

void adam_step(std::vector<std::span<double>> params,
               const std::vector<std::span<const double>>& grads, AdamState& state) {
  if (params.size() != grads.size())
    throw std::invalid_argument("adam_step: parameter/gradient tensor count mismatch");
  if (state.m.empty()) {
    state.m.resize(params.size());
    state.v.resize(params.size());
    for (std::size_t t = 0; t < params.size(); ++t) {
      state.m[t].assign(params[t].size(), 0.0);
      state.v[t].assign(params[t].size(), 0.0);
    }
  }
  if (state.m.size() != params.size())
    throw std::invalid_argument("adam_step: optimizer state tensor count mismatch");

  ++state.step_count;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (params[t].size() != grads[t].size() || params[t].size() != state.m[t].size())
      throw std::invalid_argument("adam_step: tensor shape mismatch");
    double* m = state.m[t].data();
    double* v = state.v[t].data();
    double* p = params[t].data();
    const double* g = grads[t].data();
    for (std::size_t k = 0; k < params[t].size(); ++k) {
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
      const double mhat = m[k] / c1;
      const double vhat = v[k] / c2;
      p[k] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

}  // namespace rldwa
