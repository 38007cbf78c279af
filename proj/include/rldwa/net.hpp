#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rldwa/rng.hpp"

namespace rldwa {

/// Dense layer parameters. W is row-major out x in.
struct MlpLayer {
  int in = 0;
  int out = 0;
  std::vector<double> W;
  std::vector<double> b;
};

/// Per-call forward state kept for the backward pass.
struct ForwardCache {
  std::vector<std::vector<double>> inputs;  // activation fed into each layer
  std::vector<std::vector<double>> pre;     // pre-activation of each layer
  std::size_t signature = 0;                // layer-shape hash of the owning net
};

struct MlpGrads {
  std::vector<MlpLayer> layers;

  void zero();
  void scale(double s);
};

/// Multilayer perceptron with ReLU hidden activations and an identity
/// output layer. All math in double precision.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(const std::vector<int>& dims);  // zero-initialized

  /// Glorot-uniform weights, zero biases.
  void init_random(Rng& rng);

  int input_size() const { return layers_.empty() ? 0 : layers_.front().in; }
  int output_size() const { return layers_.empty() ? 0 : layers_.back().out; }
  const std::vector<MlpLayer>& layers() const { return layers_; }
  std::vector<MlpLayer>& layers() { return layers_; }

  std::vector<double> forward(std::span<const double> input) const;

  /// Fast path: fills the caller-owned cache (reused buffers) and returns a
  /// reference to the output activation stored in it.
  const std::vector<double>& forward(std::span<const double> input, ForwardCache& cache) const;

  /// Accumulates exact reverse-mode gradients into `grads` for the scalar
  /// loss whose gradient w.r.t. the network output is `output_grad`.
  /// Optionally also emits the gradient w.r.t. the network input.
  void backward(const ForwardCache& cache, std::span<const double> output_grad,
                MlpGrads& grads, std::vector<double>* input_grad = nullptr) const;

  MlpGrads zero_grads() const;
  std::size_t param_count() const;
  std::size_t shape_signature() const;

  /// Mutable views over all parameter tensors in fixed order
  /// [W0, b0, W1, b1, ...], for the optimizer.
  std::vector<std::span<double>> param_views();
  std::vector<std::span<const double>> grad_views(const MlpGrads& grads) const;

 private:
  std::vector<MlpLayer> layers_;
};

/// Total parameter count for a layer-size list, without building the net.
std::size_t param_count(const std::vector<int>& dims);

struct AdamState {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step_count = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

/// Bias-corrected Adam update applied in place. Moments are lazily sized on
/// first use; afterwards shapes must match.
void adam_step(std::vector<std::span<double>> params,
               const std::vector<std::span<const double>>& grads, AdamState& state);

}  // namespace rldwa
