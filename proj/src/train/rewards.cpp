#include "train/rewards.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace cohort::train {

double shaped_reward(const core::StageOutcome& outcome, double fps_window,
                     const core::RewardWeights& w) {
  double miss = outcome.deadline_miss ? 1.0 : 0.0;
  double slack_s = std::max(0.0, outcome.slack_ms) / 1000.0;
  return fps_window - w.lambda_deadline * miss -
         w.lambda_energy * outcome.energy_j + w.w_slack * slack_s -
         w.w_rtt * outcome.rtt_ms / 1000.0 - w.w_proc * outcome.proc_ms / 1000.0 -
         w.w_xfer * outcome.xfer_ms / 1000.0;
}

void DualVariables::validate() const {
  for (double l : lambda_energy)
    if (l < 0.0) throw_runtime("dual variables must be non-negative");
  if (lambda_deadline < 0.0)
    throw_runtime("dual variables must be non-negative");
  if (dual_lr <= 0.0) throw_runtime("dual learning rate must be positive");
}

double penalized_reward(double reward, const std::vector<double>& power_w,
                        bool deadline_miss, const DualVariables& duals) {
  double r = reward;
  std::size_t n = std::min(power_w.size(), duals.lambda_energy.size());
  for (std::size_t i = 0; i < n; ++i)
    r -= duals.lambda_energy[i] * power_w[i];
  if (deadline_miss) r -= duals.lambda_deadline;
  return r;
}

void dual_update(DualVariables& duals,
                 const std::vector<double>& measured_power_w,
                 double measured_miss_rate) {
  duals.validate();
  std::size_t n = std::min({measured_power_w.size(),
                            duals.lambda_energy.size(),
                            duals.power_limit_w.size()});
  for (std::size_t i = 0; i < n; ++i) {
    double next = duals.lambda_energy[i] +
                  duals.dual_lr * (measured_power_w[i] - duals.power_limit_w[i]);
    duals.lambda_energy[i] = std::max(0.0, next);
  }
  double next = duals.lambda_deadline +
                duals.dual_lr * (measured_miss_rate - duals.miss_rate_limit);
  duals.lambda_deadline = std::max(0.0, next);
}

}  // namespace cohort::train
