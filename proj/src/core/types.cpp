#include "core/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cohort::core {

void RobotProfile::validate() const {
  if (compute_gflops <= 0.0)
    throw_config("robot '" + name + "': compute_throughput must be > 0");
  if (battery_capacity_wh <= 0.0)
    throw_config("robot '" + name + "': battery_capacity must be > 0");
  if (idle_power_w < 0.0 || busy_power_w < idle_power_w)
    throw_config("robot '" + name + "': need busy_power >= idle_power >= 0");
}

double battery_horizon_s(double soc, double capacity_wh, double power_w,
                         double idle_power_w) {
  double draw = std::max(power_w, idle_power_w);
  if (draw <= 0.0) return 0.0;
  return soc * capacity_wh * 3600.0 / draw;
}

namespace {
constexpr const char* kStageNames[kStageKindCount] = {
    "samA", "samB", "samC", "clipA", "clipB", "clipC", "extra"};
}

const char* stage_kind_name(StageKind k) {
  int i = static_cast<int>(k);
  if (i < 0 || i >= kStageKindCount) throw_runtime("invalid stage kind");
  return kStageNames[i];
}

StageKind stage_kind_from_name(const std::string& name) {
  for (int i = 0; i < kStageKindCount; ++i)
    if (name == kStageNames[i]) return static_cast<StageKind>(i);
  throw_config("unknown stage_kind '" + name + "'");
}

bool is_sam_stage(StageKind k) {
  return k == StageKind::samA || k == StageKind::samB || k == StageKind::samC;
}

void ChainSpec::validate() const {
  if (stages.empty()) throw_config("chain must have at least one stage");
  if (goal_fps <= 0.0) throw_config("chain goal_fps must be > 0");
  if (latency_budget_ms <= 0.0)
    throw_config("chain latency_budget_ms must be > 0");
  double sum = 0.0;
  for (const auto& s : stages) {
    if (s.deadline_ms <= 0.0) throw_config("stage deadline_ms must be > 0");
    if (s.tensor_bytes < 0.0) throw_config("stage tensor_bytes must be >= 0");
    sum += s.deadline_ms;
  }
  if (sum > latency_budget_ms * (1.0 + 1e-9))
    throw_config("stage deadlines exceed the chain latency budget");
}

void RewardWeights::validate() const {
  if (lambda_deadline < 0 || lambda_energy < 0 || w_slack < 0 || w_rtt < 0 ||
      w_proc < 0 || w_xfer < 0)
    throw_config("reward weights must be non-negative");
}

std::vector<double> Observation::features() const {
  std::vector<double> f;
  f.reserve(observation_width(roster_size));
  f.push_back(telemetry.battery_horizon);
  f.push_back(telemetry.soc);
  f.push_back(telemetry.power);
  f.push_back(telemetry.temp);
  f.push_back(telemetry.cpu);
  f.push_back(telemetry.gpu);
  f.push_back(telemetry.ram);
  f.push_back(telemetry.queue);
  f.push_back(network.rssi);
  f.push_back(network.rtt_min);
  f.push_back(network.rtt_mean);
  for (int i = 0; i < kStageKindCount; ++i)
    f.push_back(i == static_cast<int>(context.kind) ? 1.0 : 0.0);
  f.push_back(context.deadline_ms);
  f.push_back(context.tensor_bytes);
  for (int i = 0; i < roster_size; ++i)
    f.push_back(i == roster_slot ? 1.0 : 0.0);
  return f;
}

json Observation::to_json() const {
  json embed = json::array();
  for (int i = 0; i < roster_size; ++i) embed.push_back(i == roster_slot ? 1 : 0);
  return json{
      {"telemetry",
       {{"battery_horizon", telemetry.battery_horizon},
        {"soc", telemetry.soc},
        {"power", telemetry.power},
        {"temp", telemetry.temp},
        {"cpu", telemetry.cpu},
        {"gpu", telemetry.gpu},
        {"ram", telemetry.ram},
        {"queue", telemetry.queue}}},
      {"network",
       {{"rssi", network.rssi},
        {"rtt_min", network.rtt_min},
        {"rtt_mean", network.rtt_mean}}},
      {"context",
       {{"stage_kind", stage_kind_name(context.kind)},
        {"deadline_ms", context.deadline_ms},
        {"tensor_bytes", context.tensor_bytes}}},
      {"robot_embed", embed}};
}

Observation Observation::from_json(const json& j) {
  Observation o;
  const auto& t = j.at("telemetry");
  o.telemetry.battery_horizon = t.at("battery_horizon").get<double>();
  o.telemetry.soc = t.at("soc").get<double>();
  o.telemetry.power = t.at("power").get<double>();
  o.telemetry.temp = t.at("temp").get<double>();
  o.telemetry.cpu = t.at("cpu").get<double>();
  o.telemetry.gpu = t.at("gpu").get<double>();
  o.telemetry.ram = t.at("ram").get<double>();
  o.telemetry.queue = t.at("queue").get<double>();
  const auto& n = j.at("network");
  o.network.rssi = n.at("rssi").get<double>();
  o.network.rtt_min = n.at("rtt_min").get<double>();
  o.network.rtt_mean = n.at("rtt_mean").get<double>();
  const auto& c = j.at("context");
  o.context.kind = stage_kind_from_name(c.at("stage_kind").get<std::string>());
  o.context.deadline_ms = c.at("deadline_ms").get<double>();
  o.context.tensor_bytes = c.at("tensor_bytes").get<double>();
  const auto& embed = j.at("robot_embed");
  o.roster_size = static_cast<int>(embed.size());
  o.roster_slot = 0;
  for (int i = 0; i < o.roster_size; ++i)
    if (embed[i].get<int>() != 0) o.roster_slot = i;
  return o;
}

Observation build_observation(const ResourceTelemetry& telemetry,
                              const NetworkTelemetry& network,
                              const StageContext& context, int roster_slot,
                              int roster_size, const FeatureScales& scales) {
  int kind = static_cast<int>(context.kind);
  if (kind < 0 || kind >= kStageKindCount)
    throw_runtime("build_observation: unknown stage_kind");
  if (roster_slot < 0 || roster_slot >= roster_size)
    throw_runtime("build_observation: roster_slot out of range");

  Observation o;
  o.telemetry.battery_horizon =
      scales.battery_horizon.normalize(telemetry.battery_horizon);
  o.telemetry.soc = scales.soc.normalize(telemetry.soc);
  o.telemetry.power = scales.power.normalize(telemetry.power);
  o.telemetry.temp = scales.temp.normalize(telemetry.temp);
  o.telemetry.cpu = scales.cpu.normalize(telemetry.cpu);
  o.telemetry.gpu = scales.gpu.normalize(telemetry.gpu);
  o.telemetry.ram = scales.ram.normalize(telemetry.ram);
  o.telemetry.queue = scales.queue.normalize(telemetry.queue);

  double rtt_min = 0.0;
  double rtt_mean = 0.0;
  if (!network.rtt_ms.empty()) {
    rtt_min = std::numeric_limits<double>::infinity();
    for (const auto& [peer, rtt] : network.rtt_ms) {
      rtt_min = std::min(rtt_min, rtt);
      rtt_mean += rtt;
    }
    rtt_mean /= static_cast<double>(network.rtt_ms.size());
  }
  o.network.rssi = scales.rssi.normalize(network.rssi_dbm);
  o.network.rtt_min = scales.rtt.normalize(rtt_min);
  o.network.rtt_mean = scales.rtt.normalize(rtt_mean);

  o.context.kind = context.kind;
  o.context.deadline_ms = scales.deadline_ms.normalize(context.deadline_ms);
  o.context.tensor_bytes = scales.tensor_bytes.normalize(context.tensor_bytes);
  o.roster_slot = roster_slot;
  o.roster_size = roster_size;
  return o;
}

namespace {
json scale_to_json(const FeatureScale& s) {
  return json{{"offset", s.offset}, {"gain", s.gain}};
}
FeatureScale scale_from_json(const json& j) {
  return FeatureScale{j.at("offset").get<double>(), j.at("gain").get<double>()};
}
}  // namespace

json scales_to_json(const FeatureScales& s) {
  return json{{"battery_horizon", scale_to_json(s.battery_horizon)},
              {"soc", scale_to_json(s.soc)},
              {"power", scale_to_json(s.power)},
              {"temp", scale_to_json(s.temp)},
              {"cpu", scale_to_json(s.cpu)},
              {"gpu", scale_to_json(s.gpu)},
              {"ram", scale_to_json(s.ram)},
              {"queue", scale_to_json(s.queue)},
              {"rssi", scale_to_json(s.rssi)},
              {"rtt", scale_to_json(s.rtt)},
              {"deadline_ms", scale_to_json(s.deadline_ms)},
              {"tensor_bytes", scale_to_json(s.tensor_bytes)}};
}

FeatureScales scales_from_json(const json& j) {
  FeatureScales s;
  s.battery_horizon = scale_from_json(j.at("battery_horizon"));
  s.soc = scale_from_json(j.at("soc"));
  s.power = scale_from_json(j.at("power"));
  s.temp = scale_from_json(j.at("temp"));
  s.cpu = scale_from_json(j.at("cpu"));
  s.gpu = scale_from_json(j.at("gpu"));
  s.ram = scale_from_json(j.at("ram"));
  s.queue = scale_from_json(j.at("queue"));
  s.rssi = scale_from_json(j.at("rssi"));
  s.rtt = scale_from_json(j.at("rtt"));
  s.deadline_ms = scale_from_json(j.at("deadline_ms"));
  s.tensor_bytes = scale_from_json(j.at("tensor_bytes"));
  return s;
}

int AvailabilityMask::count() const {
  return static_cast<int>(std::count(available.begin(), available.end(), true));
}

double clip_bid(double raw, const BidBounds& bounds) {
  if (std::isnan(raw)) throw_runtime("clip_bid: NaN bid");
  return std::clamp(raw, bounds.lo, bounds.hi);
}

json TransitionRecord::to_json() const {
  json obs = json::array();
  for (const auto& o : observations) obs.push_back(o.to_json());
  json m = json::array();
  for (bool b : mask) m.push_back(b);
  return json{{"t", t},
              {"chain_id", chain_id},
              {"robot_id", robot_id},
              {"stage_kind", stage_kind_name(stage_kind)},
              {"observations", obs},
              {"mask", m},
              {"bids", bids},
              {"modes", modes},
              {"targets", targets},
              {"capacities", capacities},
              {"winner_id", winner_id},
              {"reward", reward},
              {"penalized_reward", penalized_reward},
              {"fps_window", fps_window},
              {"slack_ms", slack_ms},
              {"rtt_ms", rtt_ms},
              {"proc_ms", proc_ms},
              {"xfer_ms", xfer_ms},
              {"energy_J", energy_j},
              {"deadline_miss", deadline_miss},
              {"done", done}};
}

TransitionRecord TransitionRecord::from_json(const json& j) {
  TransitionRecord r;
  r.t = j.at("t").get<int>();
  r.chain_id = j.at("chain_id").get<int>();
  r.robot_id = j.at("robot_id").get<int>();
  r.stage_kind = stage_kind_from_name(j.at("stage_kind").get<std::string>());
  for (const auto& o : j.at("observations"))
    r.observations.push_back(Observation::from_json(o));
  for (const auto& b : j.at("mask")) r.mask.push_back(b.get<bool>());
  r.bids = j.at("bids").get<std::vector<double>>();
  r.modes = j.at("modes").get<std::vector<int>>();
  r.targets = j.at("targets").get<std::vector<int>>();
  r.capacities = j.at("capacities").get<std::vector<int>>();
  r.winner_id = j.at("winner_id").get<int>();
  r.reward = j.at("reward").get<double>();
  r.penalized_reward = j.at("penalized_reward").get<double>();
  r.fps_window = j.at("fps_window").get<double>();
  r.slack_ms = j.at("slack_ms").get<double>();
  r.rtt_ms = j.at("rtt_ms").get<double>();
  r.proc_ms = j.at("proc_ms").get<double>();
  r.xfer_ms = j.at("xfer_ms").get<double>();
  r.energy_j = j.at("energy_J").get<double>();
  r.deadline_miss = j.at("deadline_miss").get<bool>();
  r.done = j.at("done").get<bool>();
  return r;
}

}  // namespace cohort::core
