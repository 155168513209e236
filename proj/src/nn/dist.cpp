#include "nn/dist.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace cohort::nn {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

void check_mask(const Vector& logits, const std::vector<bool>& mask) {
  if (static_cast<int>(mask.size()) != logits.size())
    throw_runtime("masked categorical: mask width mismatch");
  for (bool m : mask)
    if (m) return;
  throw_runtime("masked categorical: all slots masked");
}

}  // namespace

Vector masked_softmax(const Vector& logits, const std::vector<bool>& mask) {
  check_mask(logits, mask);
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < logits.size(); ++i)
    if (mask[i]) mx = std::max(mx, logits[i]);
  Vector probs = Vector::Zero(logits.size());
  double z = 0.0;
  for (int i = 0; i < logits.size(); ++i) {
    if (!mask[i]) continue;
    probs[i] = std::exp(logits[i] - mx);
    z += probs[i];
  }
  probs /= z;
  return probs;
}

double masked_log_prob(const Vector& logits, const std::vector<bool>& mask,
                       int a) {
  check_mask(logits, mask);
  if (a < 0 || a >= logits.size() || !mask[a])
    throw_runtime("masked categorical: log_prob of a masked action");
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < logits.size(); ++i)
    if (mask[i]) mx = std::max(mx, logits[i]);
  double z = 0.0;
  for (int i = 0; i < logits.size(); ++i)
    if (mask[i]) z += std::exp(logits[i] - mx);
  return logits[a] - mx - std::log(z);
}

double masked_entropy(const Vector& logits, const std::vector<bool>& mask) {
  Vector p = masked_softmax(logits, mask);
  double h = 0.0;
  for (int i = 0; i < p.size(); ++i)
    if (mask[i] && p[i] > 0.0) h -= p[i] * std::log(p[i]);
  return h;
}

int masked_sample(const Vector& logits, const std::vector<bool>& mask,
                  Rng& rng) {
  Vector p = masked_softmax(logits, mask);
  double u = rng.uniform(0.0, 1.0);
  double acc = 0.0;
  int last = -1;
  for (int i = 0; i < p.size(); ++i) {
    if (!mask[i]) continue;
    acc += p[i];
    last = i;
    if (u <= acc) return i;
  }
  return last;
}

int masked_argmax(const Vector& logits, const std::vector<bool>& mask) {
  check_mask(logits, mask);
  int best = -1;
  for (int i = 0; i < logits.size(); ++i) {
    if (!mask[i]) continue;
    if (best < 0 || logits[i] > logits[best]) best = i;
  }
  return best;
}

Vector masked_nll_grad(const Vector& logits, const std::vector<bool>& mask,
                       int a) {
  Vector g = masked_softmax(logits, mask);
  if (a < 0 || a >= logits.size() || !mask[a])
    throw_runtime("masked categorical: gradient of a masked action");
  g[a] -= 1.0;
  return g;  // masked entries stay exactly 0
}

Vector masked_neg_entropy_grad(const Vector& logits,
                               const std::vector<bool>& mask) {
  // H = -sum p log p; dH/dlogit_i = -p_i * (log p_i + H).
  Vector p = masked_softmax(logits, mask);
  double h = 0.0;
  for (int i = 0; i < p.size(); ++i)
    if (mask[i] && p[i] > 0.0) h -= p[i] * std::log(p[i]);
  Vector g = Vector::Zero(p.size());
  for (int i = 0; i < p.size(); ++i)
    if (mask[i] && p[i] > 0.0) g[i] = p[i] * (std::log(p[i]) + h);
  return g;
}

// ---------------------------------------------------------------------------

BoundedGaussian make_bounded_gaussian(double mean, double log_sd,
                                      const core::BidBounds& bounds) {
  if (!std::isfinite(mean) || !std::isfinite(log_sd))
    throw_runtime("bounded gaussian: non-finite parameters");
  if (!(bounds.lo < bounds.hi) || !std::isfinite(bounds.lo) ||
      !std::isfinite(bounds.hi))
    throw_runtime("bounded gaussian: invalid bounds");
  return BoundedGaussian{mean, log_sd, bounds};
}

double BoundedGaussian::squash(double u) const {
  return bounds.lo + (bounds.hi - bounds.lo) * 0.5 * (std::tanh(u) + 1.0);
}

double BoundedGaussian::unsquash(double value) const {
  double span = bounds.hi - bounds.lo;
  double y = 2.0 * (value - bounds.lo) / span - 1.0;
  // Keep atanh finite when the value sits exactly on a bound.
  y = std::clamp(y, -1.0 + 1e-12, 1.0 - 1e-12);
  return std::atanh(y);
}

BoundedGaussian::Sample BoundedGaussian::sample(Rng& rng) const {
  double u = mean + std::exp(log_sd) * rng.normal(0.0, 1.0);
  return Sample{squash(u), u};
}

double BoundedGaussian::log_prob_pre_squash(double u) const {
  double sd = std::exp(log_sd);
  double z = (u - mean) / sd;
  double base = -0.5 * z * z - log_sd - 0.5 * kLog2Pi;
  // |da/du| = span/2 * (1 - tanh(u)^2); the stable form of log(1 - tanh^2 u)
  // is 2*(log 2 - |u| - log1p(exp(-2|u|))).
  double au = std::abs(u);
  double log_sech2 = 2.0 * (std::log(2.0) - au - std::log1p(std::exp(-2.0 * au)));
  double jac = std::log((bounds.hi - bounds.lo) * 0.5) + log_sech2;
  return base - jac;
}

double BoundedGaussian::base_entropy() const {
  return 0.5 * (1.0 + kLog2Pi) + log_sd;
}

BoundedGaussian::ParamGrad BoundedGaussian::log_prob_grad(double u) const {
  double sd = std::exp(log_sd);
  double z = (u - mean) / sd;
  return ParamGrad{z / sd, z * z - 1.0};
}

}  // namespace cohort::nn
