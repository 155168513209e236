#pragma once

#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"
#include "nn/mlp.hpp"

namespace cohort::nn {

// ---------------------------------------------------------------------------
// Masked categorical. Masked-out slots carry probability exactly zero, not a
// large-negative-logit approximation.

// Probabilities over the unmasked slots; masked entries are exactly 0.
Vector masked_softmax(const Vector& logits, const std::vector<bool>& mask);

// log pi(a); a must be unmasked.
double masked_log_prob(const Vector& logits, const std::vector<bool>& mask,
                       int a);

double masked_entropy(const Vector& logits, const std::vector<bool>& mask);

int masked_sample(const Vector& logits, const std::vector<bool>& mask,
                  Rng& rng);

int masked_argmax(const Vector& logits, const std::vector<bool>& mask);

// d(-log pi(a))/d(logits) = probs - onehot(a); masked entries are exactly 0.
Vector masked_nll_grad(const Vector& logits, const std::vector<bool>& mask,
                       int a);

// d(-entropy)/d(logits).
Vector masked_neg_entropy_grad(const Vector& logits,
                               const std::vector<bool>& mask);

// ---------------------------------------------------------------------------
// Bounded continuous head: Gaussian in an unbounded pre-squash space, pushed
// through tanh onto [lo, hi]. log_prob carries the change-of-variables term,
// so PPO ratios on stored samples stay exact.

struct BoundedGaussian {
  double mean = 0.0;    // pre-squash mean
  double log_sd = 0.0;  // pre-squash log std-dev
  core::BidBounds bounds;

  // Draws (value in [lo,hi], pre-squash u).
  struct Sample {
    double value = 0.0;
    double pre_squash = 0.0;
  };
  Sample sample(Rng& rng) const;

  double squash(double u) const;
  double unsquash(double value) const;  // clamps away from the exact bounds

  double log_prob_pre_squash(double u) const;
  double log_prob(double value) const { return log_prob_pre_squash(unsquash(value)); }

  // Entropy of the pre-squash Gaussian; used for the exploration bonus.
  double base_entropy() const;

  // Gradients of log_prob_pre_squash(u) w.r.t. (mean, log_sd), u held fixed.
  struct ParamGrad {
    double d_mean = 0.0;
    double d_log_sd = 0.0;
  };
  ParamGrad log_prob_grad(double u) const;
};

BoundedGaussian make_bounded_gaussian(double mean, double log_sd,
                                      const core::BidBounds& bounds);

}  // namespace cohort::nn
