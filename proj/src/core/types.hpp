#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/error.hpp"

namespace cohort::core {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Robots

struct RobotProfile {
  int robot_id = 0;
  std::string name;
  double compute_gflops = 0.0;     // effective GFLOP/s
  double gpu_mem_mb = 0.0;
  double battery_capacity_wh = 0.0;
  double idle_power_w = 0.0;
  double busy_power_w = 0.0;
  bool is_host = true;             // publishes workloads vs executor-only

  void validate() const;
};

// Remaining runtime in seconds at the current draw.
double battery_horizon_s(double soc, double capacity_wh, double power_w,
                         double idle_power_w);

// ---------------------------------------------------------------------------
// Telemetry

struct ResourceTelemetry {
  double battery_horizon = 0.0;  // s
  double soc = 0.0;              // [0,1]
  double power = 0.0;            // W
  double temp = 0.0;             // degC
  double cpu = 0.0;              // [0,1]
  double gpu = 0.0;              // [0,1]
  double ram = 0.0;              // [0,1]
  double queue = 0.0;            // pending stage count
};

struct NetworkTelemetry {
  double rssi_dbm = 0.0;
  std::map<int, double> rtt_ms;  // per peer; absent key = unreachable
};

// ---------------------------------------------------------------------------
// Stages and chains

enum class StageKind : int {
  samA = 0,
  samB = 1,
  samC = 2,
  clipA = 3,
  clipB = 4,
  clipC = 5,
  extra = 6,
};
inline constexpr int kStageKindCount = 7;

const char* stage_kind_name(StageKind k);
StageKind stage_kind_from_name(const std::string& name);
bool is_sam_stage(StageKind k);

struct StageContext {
  StageKind kind = StageKind::samA;
  double deadline_ms = 0.0;
  double tensor_bytes = 0.0;  // payload if offloaded
};

struct ChainSpec {
  int chain_id = 0;
  int host_id = 0;
  std::vector<StageContext> stages;
  double goal_fps = 0.0;
  double latency_budget_ms = 0.0;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Normalization

// normalized = (raw - offset) * gain; gain maps the expected range onto
// roughly [-1, 1]. Inverse is exact, so normalize/denormalize round-trips.
struct FeatureScale {
  double offset = 0.0;
  double gain = 1.0;

  double normalize(double raw) const { return (raw - offset) * gain; }
  double denormalize(double norm) const { return norm / gain + offset; }
};

// Fixed per-feature scales recorded in the scenario config; shared verbatim
// between offline collection and online training.
struct FeatureScales {
  FeatureScale battery_horizon{43200.0, 2.0 / 86400.0};
  FeatureScale soc{0.5, 2.0};
  FeatureScale power{200.0, 2.0 / 400.0};
  FeatureScale temp{55.0, 2.0 / 70.0};
  FeatureScale cpu{0.5, 2.0};
  FeatureScale gpu{0.5, 2.0};
  FeatureScale ram{0.5, 2.0};
  FeatureScale queue{8.0, 2.0 / 16.0};
  FeatureScale rssi{-60.0, 2.0 / 60.0};
  FeatureScale rtt{200.0, 2.0 / 400.0};
  FeatureScale deadline_ms{1000.0, 2.0 / 2000.0};
  FeatureScale tensor_bytes{2097152.0, 2.0 / 4194304.0};
};

json scales_to_json(const FeatureScales& s);
FeatureScales scales_from_json(const json& j);

// ---------------------------------------------------------------------------
// Observations

struct ObsNetworkSummary {
  double rssi = 0.0;      // normalized own RSSI
  double rtt_min = 0.0;   // normalized min RTT over reachable peers
  double rtt_mean = 0.0;  // normalized mean RTT over reachable peers
};

// One robot's local view at a stage decision. All continuous fields hold
// normalized values; `features()` lays them out in a fixed order:
//   [8 telemetry][3 network][7 stage one-hot][deadline, tensor][roster one-hot]
struct Observation {
  ResourceTelemetry telemetry;
  ObsNetworkSummary network;
  StageContext context;  // deadline_ms/tensor_bytes normalized, kind kept
  int roster_slot = 0;
  int roster_size = 0;

  std::vector<double> features() const;
  json to_json() const;
  static Observation from_json(const json& j);
};

inline constexpr int kObsFixedWidth = 8 + 3 + kStageKindCount + 2;
inline int observation_width(int roster_size) {
  return kObsFixedWidth + roster_size;
}

Observation build_observation(const ResourceTelemetry& telemetry,
                              const NetworkTelemetry& network,
                              const StageContext& context, int roster_slot,
                              int roster_size, const FeatureScales& scales);

// ---------------------------------------------------------------------------
// Auction-facing values

struct AvailabilityMask {
  std::vector<bool> available;

  int count() const;
  bool any() const { return count() > 0; }
};

struct BidBounds {
  double lo = 0.0;
  double hi = 400.0;
};

// Clamp a raw bid into [lo, hi]. NaN is rejected.
double clip_bid(double raw, const BidBounds& bounds);

// ---------------------------------------------------------------------------
// Rewards

struct RewardWeights {
  double lambda_deadline = 5.0;  // penalty per deadline miss
  double lambda_energy = 0.001;  // penalty per joule
  double w_slack = 0.5;
  double w_rtt = 0.2;
  double w_proc = 0.2;
  double w_xfer = 0.2;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Transitions

// Measured signals of one executed stage.
struct StageOutcome {
  double proc_ms = 0.0;
  double xfer_ms = 0.0;
  double rtt_ms = 0.0;       // RTT sample to the executor (0 when local)
  double slack_ms = 0.0;     // max(0, deadline - (proc+xfer))
  double energy_j = 0.0;
  bool deadline_miss = false;
};

// One stage decision plus its observed outcome; the unit every training
// phase consumes. Vectors are indexed by roster slot.
struct TransitionRecord {
  int t = 0;  // stage index within the chain
  int chain_id = 0;
  int robot_id = 0;  // tag: the chain's host
  StageKind stage_kind = StageKind::samA;
  std::vector<Observation> observations;  // masked-out slots zero-filled
  std::vector<bool> mask;
  std::vector<double> bids;
  std::vector<int> modes;       // -1 = unsupervised slot
  std::vector<int> targets;     // -1 = unsupervised slot
  std::vector<int> capacities;  // -1 = unsupervised slot
  int winner_id = 0;
  double reward = 0.0;
  double penalized_reward = 0.0;
  double fps_window = 0.0;
  double slack_ms = 0.0;
  double rtt_ms = 0.0;
  double proc_ms = 0.0;
  double xfer_ms = 0.0;
  double energy_j = 0.0;
  bool deadline_miss = false;
  bool done = false;

  json to_json() const;
  static TransitionRecord from_json(const json& j);
};

// Discrete head catalogs shared by the heuristic labels and the actor.
enum Mode : int { kModeLocal = 0, kModeOffload = 1, kModeAccept = 2 };
inline constexpr int kModeCount = 3;
// Capacity head: how many concurrent stages this robot is willing to take.
enum Capacity : int { kCapacityOne = 0, kCapacityTwo = 1, kCapacityFour = 2 };
inline constexpr int kCapacityCount = 3;

}  // namespace cohort::core
