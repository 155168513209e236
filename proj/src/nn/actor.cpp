#include "nn/actor.hpp"

#include <cmath>

#include "core/error.hpp"

namespace cohort::nn {

double clamp_log_sd(double raw) {
  // Smooth squash so gradients stay exact everywhere.
  return kMinLogSd + (kMaxLogSd - kMinLogSd) * 0.5 * (std::tanh(raw) + 1.0);
}

namespace {
double clamp_log_sd_deriv(double raw) {
  double t = std::tanh(raw);
  return (kMaxLogSd - kMinLogSd) * 0.5 * (1.0 - t * t);
}
}  // namespace

ActorNet ActorNet::make(int obs_width, int roster_size,
                        const core::BidBounds& bounds, Rng& rng,
                        const std::vector<int>& trunk_hidden) {
  std::vector<int> trunk_sizes{obs_width};
  trunk_sizes.insert(trunk_sizes.end(), trunk_hidden.begin(),
                     trunk_hidden.end());
  int feat = trunk_sizes.back();
  ActorNet net;
  net.trunk = Mlp::make(trunk_sizes, rng, /*output_tanh=*/true);
  net.mode_head = Mlp::make({feat, core::kModeCount}, rng);
  net.target_head = Mlp::make({feat, roster_size}, rng);
  net.capacity_head = Mlp::make({feat, core::kCapacityCount}, rng);
  net.bid_head = Mlp::make({feat, 2}, rng);
  net.bounds = bounds;
  return net;
}

BoundedGaussian ActorNet::bid_dist(double mean_raw, double log_sd_raw) const {
  return make_bounded_gaussian(mean_raw, clamp_log_sd(log_sd_raw), bounds);
}

ActorOut actor_forward(const ActorNet& net, const Matrix& x,
                       ActorCache* cache) {
  Matrix feat = mlp_forward(net.trunk, x, cache ? &cache->trunk : nullptr);
  ActorOut out;
  out.mode_logits = mlp_forward(net.mode_head, feat, cache ? &cache->mode : nullptr);
  out.target_logits =
      mlp_forward(net.target_head, feat, cache ? &cache->target : nullptr);
  out.capacity_logits =
      mlp_forward(net.capacity_head, feat, cache ? &cache->capacity : nullptr);
  Matrix bid_raw = mlp_forward(net.bid_head, feat, cache ? &cache->bid : nullptr);
  out.bid_mean = bid_raw.col(0);
  out.bid_log_sd = bid_raw.col(1).unaryExpr([](double v) { return clamp_log_sd(v); });
  return out;
}

ActorGrads ActorGrads::zeros_like(const ActorNet& net) {
  return ActorGrads{MlpGrads::zeros_like(net.trunk),
                    MlpGrads::zeros_like(net.mode_head),
                    MlpGrads::zeros_like(net.target_head),
                    MlpGrads::zeros_like(net.capacity_head),
                    MlpGrads::zeros_like(net.bid_head)};
}

void ActorGrads::set_zero() {
  trunk.set_zero();
  mode.set_zero();
  target.set_zero();
  capacity.set_zero();
  bid.set_zero();
}

void ActorGrads::scale(double s) {
  trunk.scale(s);
  mode.scale(s);
  target.scale(s);
  capacity.scale(s);
  bid.scale(s);
}

ActorHeadGrads ActorHeadGrads::zeros(int batch, int roster) {
  return ActorHeadGrads{Matrix::Zero(batch, core::kModeCount),
                        Matrix::Zero(batch, roster),
                        Matrix::Zero(batch, core::kCapacityCount),
                        Matrix::Zero(batch, 2)};
}

void actor_backward(const ActorNet& net, const ActorCache& cache,
                    const ActorHeadGrads& dheads, ActorGrads& grads) {
  long batch = cache.trunk.input.rows();
  Matrix dfeat = Matrix::Zero(batch, net.trunk.output_width());
  dfeat += mlp_backward(net.mode_head, cache.mode, dheads.mode, grads.mode);
  dfeat +=
      mlp_backward(net.target_head, cache.target, dheads.target, grads.target);
  dfeat += mlp_backward(net.capacity_head, cache.capacity, dheads.capacity,
                        grads.capacity);
  // Chain the smooth log-sd squash back onto the raw head output.
  Matrix dbid_raw = dheads.bid;
  const Matrix& bid_raw_out = cache.bid.post.back();
  for (long r = 0; r < batch; ++r)
    dbid_raw(r, 1) *= clamp_log_sd_deriv(bid_raw_out(r, 1));
  dfeat += mlp_backward(net.bid_head, cache.bid, dbid_raw, grads.bid);
  mlp_backward(net.trunk, cache.trunk, dfeat, grads.trunk);
}

ActorAdam ActorAdam::zeros_like(const ActorNet& net) {
  return ActorAdam{AdamState::zeros_like(net.trunk),
                   AdamState::zeros_like(net.mode_head),
                   AdamState::zeros_like(net.target_head),
                   AdamState::zeros_like(net.capacity_head),
                   AdamState::zeros_like(net.bid_head)};
}

bool actor_adam_step(ActorNet& net, const ActorGrads& grads, ActorAdam& state,
                     const AdamConfig& cfg) {
  bool ok = true;
  ok &= adam_step(net.trunk, grads.trunk, state.trunk, cfg);
  ok &= adam_step(net.mode_head, grads.mode, state.mode, cfg);
  ok &= adam_step(net.target_head, grads.target, state.target, cfg);
  ok &= adam_step(net.capacity_head, grads.capacity, state.capacity, cfg);
  ok &= adam_step(net.bid_head, grads.bid, state.bid, cfg);
  return ok;
}

}  // namespace cohort::nn
