#include "nn/mlp.hpp"

#include <cmath>

#include "core/error.hpp"

namespace cohort::nn {

Mlp Mlp::make(const std::vector<int>& sizes, Rng& rng, bool output_tanh) {
  if (sizes.size() < 2) throw_runtime("Mlp::make: need at least two sizes");
  Mlp m;
  m.output_tanh = output_tanh;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    int in = sizes[l];
    int out = sizes[l + 1];
    double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    Matrix w(out, in);
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c) w(r, c) = rng.uniform(-limit, limit);
    m.w.push_back(std::move(w));
    m.b.push_back(Vector::Zero(out));
  }
  return m;
}

void Mlp::validate_shapes() const {
  if (w.size() != b.size()) throw_runtime("Mlp: weight/bias count mismatch");
  for (std::size_t l = 0; l < w.size(); ++l) {
    if (w[l].rows() != b[l].size())
      throw_runtime("Mlp: bias width mismatch");
    if (l > 0 && w[l].cols() != w[l - 1].rows())
      throw_runtime("Mlp: layer shapes do not chain");
  }
}

bool Mlp::all_finite() const {
  for (const auto& m : w)
    if (!m.allFinite()) return false;
  for (const auto& v : b)
    if (!v.allFinite()) return false;
  return true;
}

MlpGrads MlpGrads::zeros_like(const Mlp& m) {
  MlpGrads g;
  for (const auto& w : m.w) g.w.push_back(Matrix::Zero(w.rows(), w.cols()));
  for (const auto& b : m.b) g.b.push_back(Vector::Zero(b.size()));
  return g;
}

void MlpGrads::set_zero() {
  for (auto& m : w) m.setZero();
  for (auto& v : b) v.setZero();
}

void MlpGrads::scale(double s) {
  for (auto& m : w) m *= s;
  for (auto& v : b) v *= s;
}

bool MlpGrads::all_finite() const {
  for (const auto& m : w)
    if (!m.allFinite()) return false;
  for (const auto& v : b)
    if (!v.allFinite()) return false;
  return true;
}

Matrix mlp_forward(const Mlp& m, const Matrix& x, MlpCache* cache) {
  if (x.cols() != m.input_width())
    throw_runtime("mlp_forward: input width mismatch");
  if (cache) {
    cache->input = x;
    cache->post.clear();
  }
  Matrix cur = x;
  for (int l = 0; l < m.layer_count(); ++l) {
    Matrix pre = (cur * m.w[l].transpose()).rowwise() + m.b[l].transpose();
    bool tanh_layer = (l + 1 < m.layer_count()) || m.output_tanh;
    cur = tanh_layer ? pre.array().tanh().matrix() : pre;
    if (cache) cache->post.push_back(cur);
  }
  return cur;
}

Matrix mlp_backward(const Mlp& m, const MlpCache& cache, const Matrix& dy,
                    MlpGrads& grads) {
  if (cache.post.size() != m.w.size())
    throw_runtime("mlp_backward: cache does not match net");
  if (dy.rows() != cache.input.rows() || dy.cols() != m.output_width())
    throw_runtime("mlp_backward: gradient shape mismatch");

  Matrix delta = dy;
  for (int l = m.layer_count() - 1; l >= 0; --l) {
    bool tanh_layer = (l + 1 < m.layer_count()) || m.output_tanh;
    if (tanh_layer) {
      // d tanh(z)/dz = 1 - tanh(z)^2, with tanh(z) cached in post.
      delta = delta.array() * (1.0 - cache.post[l].array().square());
    }
    const Matrix& below = l == 0 ? cache.input : cache.post[l - 1];
    grads.w[l] += delta.transpose() * below;
    grads.b[l] += delta.colwise().sum().transpose();
    if (l > 0) delta = delta * m.w[l];
  }
  return delta * m.w[0];
}

AdamState AdamState::zeros_like(const Mlp& m) {
  AdamState s;
  for (const auto& w : m.w) {
    s.mw.push_back(Matrix::Zero(w.rows(), w.cols()));
    s.vw.push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  for (const auto& b : m.b) {
    s.mb.push_back(Vector::Zero(b.size()));
    s.vb.push_back(Vector::Zero(b.size()));
  }
  return s;
}

bool adam_step(Mlp& m, const MlpGrads& grads, AdamState& state,
               const AdamConfig& cfg) {
  if (!grads.all_finite()) return false;
  state.step += 1;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < m.w.size(); ++l) {
    state.mw[l] = cfg.beta1 * state.mw[l] + (1.0 - cfg.beta1) * grads.w[l];
    state.vw[l] = cfg.beta2 * state.vw[l].array().matrix() +
                  (1.0 - cfg.beta2) * grads.w[l].array().square().matrix();
    Matrix mhat = state.mw[l] / bc1;
    Matrix vhat = state.vw[l] / bc2;
    m.w[l] -=
        (cfg.lr * mhat.array() / (vhat.array().sqrt() + cfg.eps)).matrix();

    state.mb[l] = cfg.beta1 * state.mb[l] + (1.0 - cfg.beta1) * grads.b[l];
    state.vb[l] = cfg.beta2 * state.vb[l].array().matrix() +
                  (1.0 - cfg.beta2) * grads.b[l].array().square().matrix();
    Vector mbh = state.mb[l] / bc1;
    Vector vbh = state.vb[l] / bc2;
    m.b[l] -=
        (cfg.lr * mbh.array() / (vbh.array().sqrt() + cfg.eps)).matrix();
  }
  return true;
}

}  // namespace cohort::nn
