#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace cohort::run {

using core::json;

// Per-stage-kind cost model standing in for the real VLM modules.
struct StageCost {
  double gflops = 0.0;
  double tensor_bytes = 0.0;
};

// Workload published by every host: an ordered stage pipeline with its QoS
// contract. Arrival rate defaults to goal_fps.
struct ChainTemplate {
  std::string name;
  std::vector<core::StageKind> stages;
  double goal_fps = 2.0;
  double latency_budget_ms = 1800.0;
  double arrival_fps = 0.0;  // 0 = goal_fps
};

struct LinkSpec {
  double base_rtt_ms = 15.0;
  double jitter_sd_ms = 3.0;
  double bandwidth_bytes_per_ms = 100000.0;  // ~100 MB/s
  double rssi_dbm = -55.0;
  bool up = true;
};

struct LinkOverride {
  int a = 0;
  int b = 0;
  LinkSpec link;
};

struct RosterEvent {
  enum class Type { join, leave };
  Type type = Type::leave;
  int robot_id = 0;
  double t_ms = 0.0;
};

struct SimParams {
  double queue_contention = 0.25;   // proc slowdown per queued stage
  double proc_noise_log_sd = 0.1;   // lognormal sd; 0 disables
  double bid_window_ms = 200.0;
  int max_inflight_chains = 8;      // per-host back-pressure cap
  double fps_window_s = 5.0;
  double temp_tau_s = 60.0;
};

struct TrainingHyperparams {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double ppo_clip = 0.2;
  double lr = 3e-4;
  double awr_beta = 1.0;
  double entropy_coeff = 0.01;
  int epochs_per_update = 2;
  int batch_chains = 32;
  int minibatch = 256;
  int bc_epochs = 200;
  double bc_target_agreement = 0.97;
  int critic_epochs = 60;
  int awr_epochs = 60;
  int ppo_updates = 50;
  double val_fraction = 0.2;

  void validate() const;
};

struct GaParams {
  int population_size = 24;
  int generations = 40;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;
  int elitism_count = 2;
  int fitness_window = 1;  // chains optimized per planning call
  double planning_ms = 50.0;

  void validate() const;
};

struct DualLimits {
  double power_fraction = 0.8;  // limit = fraction * busy_power per robot
  double miss_rate = 0.2;
  double dual_lr = 0.01;
};

// The experiment contract: everything an end-to-end run needs, in one file.
struct ScenarioConfig {
  std::string name = "default3";
  std::vector<core::RobotProfile> roster;
  LinkSpec default_link;
  std::vector<LinkOverride> link_overrides;
  std::vector<ChainTemplate> workloads;
  std::map<core::StageKind, StageCost> stage_costs;
  core::RewardWeights reward_weights;
  core::FeatureScales scales;
  core::BidBounds bid_bounds;
  TrainingHyperparams training;
  GaParams ga;
  DualLimits dual_limits;
  SimParams sim;
  double horizon_s = 60.0;
  std::uint64_t seed = 1;
  std::vector<RosterEvent> events;

  void validate() const;
  const core::RobotProfile* find_robot(int robot_id) const;
  LinkSpec link_between(int a, int b) const;
  // Stage contexts for a template: deadlines split across the latency budget
  // proportionally to nominal FLOPs.
  std::vector<core::StageContext> stage_contexts(const ChainTemplate& t) const;
  double stage_gflops(core::StageKind kind) const;

  json to_json() const;
  static ScenarioConfig from_json(const json& j);
};

// Canonical experiment setups.
//   default3:  3 hosts, 6-stage chains
//   executor4: default3 + 1 executor-only node
//   failure2:  default3 with the Spot analog offline from t=0
//   extratask: default3 with a 7th heavy detection stage per chain
ScenarioConfig make_scenario(const std::string& template_name);

ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

// FNV-1a of the canonical config serialization; stamped into reports.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace cohort::run
