#pragma once

#include <vector>

#include "core/types.hpp"

namespace cohort::train {

// Shaped team reward for one executed stage. Time terms enter in seconds.
//   r = fps - lambda_D * miss - lambda_E * energy
//       + w_slack * slack+  - w_rtt * rtt - w_proc * proc - w_xfer * xfer
double shaped_reward(const core::StageOutcome& outcome, double fps_window,
                     const core::RewardWeights& weights);

// Lagrangian multipliers for the power and deadline-miss constraints.
struct DualVariables {
  std::vector<double> lambda_energy;  // one per roster slot
  double lambda_deadline = 0.0;
  std::vector<double> power_limit_w;  // per roster slot
  double miss_rate_limit = 0.2;
  double dual_lr = 0.01;

  void validate() const;
};

// r' = r - sum_i lambda_E,i * P_i - lambda_D * miss
double penalized_reward(double reward, const std::vector<double>& power_w,
                        bool deadline_miss, const DualVariables& duals);

// Projected sub-gradient ascent: lambda <- max(0, lambda + lr*(meas - limit)).
void dual_update(DualVariables& duals,
                 const std::vector<double>& measured_power_w,
                 double measured_miss_rate);

}  // namespace cohort::train
