#pragma once

#include <vector>

#include "core/types.hpp"
#include "nn/dist.hpp"
#include "nn/mlp.hpp"

namespace cohort::nn {

// Shared multi-head actor: one tanh trunk feeding four linear heads.
//   mode:     {local, offload, accept}
//   target:   roster slots, masked by availability
//   capacity: {accept-1, accept-2, accept-4}
//   bid:      (pre-squash mean, log sd) for the bounded continuous bid
struct ActorNet {
  Mlp trunk;
  Mlp mode_head;
  Mlp target_head;
  Mlp capacity_head;
  Mlp bid_head;
  core::BidBounds bounds;

  static ActorNet make(int obs_width, int roster_size,
                       const core::BidBounds& bounds, Rng& rng,
                       const std::vector<int>& trunk_hidden = {64, 64});

  int obs_width() const { return trunk.input_width(); }
  int roster_size() const { return target_head.output_width(); }
  BoundedGaussian bid_dist(double mean_raw, double log_sd_raw) const;
};

struct ActorCache {
  MlpCache trunk, mode, target, capacity, bid;
};

struct ActorOut {
  Matrix mode_logits;      // B x 3
  Matrix target_logits;    // B x roster
  Matrix capacity_logits;  // B x 3
  Matrix bid_mean;         // B x 1
  Matrix bid_log_sd;       // B x 1, clamped to a sane range
};

ActorOut actor_forward(const ActorNet& net, const Matrix& x,
                       ActorCache* cache = nullptr);

struct ActorGrads {
  MlpGrads trunk, mode, target, capacity, bid;

  static ActorGrads zeros_like(const ActorNet& net);
  void set_zero();
  void scale(double s);
};

// Head-space gradients (dL/dlogits etc). Zero matrices mean "head untouched".
struct ActorHeadGrads {
  Matrix mode;      // B x 3
  Matrix target;    // B x roster
  Matrix capacity;  // B x 3
  Matrix bid;       // B x 2 (d mean, d log_sd)

  static ActorHeadGrads zeros(int batch, int roster);
};

void actor_backward(const ActorNet& net, const ActorCache& cache,
                    const ActorHeadGrads& dheads, ActorGrads& grads);

struct ActorAdam {
  AdamState trunk, mode, target, capacity, bid;

  static ActorAdam zeros_like(const ActorNet& net);
};

// Applies Adam to every sub-net; false if any update was skipped.
bool actor_adam_step(ActorNet& net, const ActorGrads& grads, ActorAdam& state,
                     const AdamConfig& cfg);

// log-sd output is clamped into this range before use.
inline constexpr double kMinLogSd = -5.0;
inline constexpr double kMaxLogSd = 2.0;
double clamp_log_sd(double raw);

}  // namespace cohort::nn
