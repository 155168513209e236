#pragma once

#include <vector>

#include <Eigen/Core>

#include "core/rng.hpp"

namespace cohort::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Fully-connected net, tanh hidden activations. The final layer is linear
// unless `output_tanh` is set (used for the shared trunk). Batched: inputs
// and activations are row-per-sample matrices.
struct Mlp {
  std::vector<Matrix> w;  // w[l] is out x in
  std::vector<Vector> b;
  bool output_tanh = false;

  static Mlp make(const std::vector<int>& sizes, Rng& rng,
                  bool output_tanh = false);

  int input_width() const { return static_cast<int>(w.front().cols()); }
  int output_width() const { return static_cast<int>(w.back().rows()); }
  int layer_count() const { return static_cast<int>(w.size()); }
  void validate_shapes() const;
  bool all_finite() const;
};

// Activations recorded by forward; sufficient for an exact backward pass.
struct MlpCache {
  Matrix input;            // B x in
  std::vector<Matrix> post;  // per layer, B x width, after activation
};

// Gradients with the same shapes as the parameters. Accumulating: backward
// adds into it, so zero it between batches.
struct MlpGrads {
  std::vector<Matrix> w;
  std::vector<Vector> b;

  static MlpGrads zeros_like(const Mlp& m);
  void set_zero();
  void scale(double s);
  bool all_finite() const;
};

Matrix mlp_forward(const Mlp& m, const Matrix& x, MlpCache* cache = nullptr);

// dy is dL/d(output), B x out. Returns dL/d(input) and accumulates parameter
// gradients. The cache must come from a forward over the same input.
Matrix mlp_backward(const Mlp& m, const MlpCache& cache, const Matrix& dy,
                    MlpGrads& grads);

// ---------------------------------------------------------------------------
// Adam

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<Matrix> mw, vw;
  std::vector<Vector> mb, vb;
  long step = 0;

  static AdamState zeros_like(const Mlp& m);
};

// Standard bias-corrected Adam update. Non-finite gradients skip the update
// and return false so the caller can log a diagnostic.
bool adam_step(Mlp& m, const MlpGrads& grads, AdamState& state,
               const AdamConfig& cfg);

}  // namespace cohort::nn
