#include "run/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "core/error.hpp"

namespace cohort::run {

using core::StageKind;

void TrainingHyperparams::validate() const {
  if (gamma <= 0.0 || gamma >= 1.0) throw_config("gamma must be in (0,1)");
  if (gae_lambda < 0.0 || gae_lambda > 1.0)
    throw_config("gae_lambda must be in [0,1]");
  if (ppo_clip <= 0.0) throw_config("ppo_clip must be > 0");
  if (awr_beta <= 0.0) throw_config("awr_beta must be > 0");
  if (lr <= 0.0) throw_config("lr must be > 0");
  if (batch_chains < 1) throw_config("batch_chains must be >= 1");
  if (val_fraction < 0.0 || val_fraction >= 1.0)
    throw_config("val_fraction must be in [0,1)");
}

void GaParams::validate() const {
  if (population_size < 2) throw_config("ga population_size must be >= 2");
  if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 ||
      mutation_rate > 1.0)
    throw_config("ga rates must be in [0,1]");
  if (elitism_count < 0 || elitism_count >= population_size)
    throw_config("ga elitism_count must be in [0, population)");
}

void ScenarioConfig::validate() const {
  if (roster.empty()) throw_config("roster must be non-empty");
  if (horizon_s <= 0.0) throw_config("horizon_s must be > 0");
  std::set<int> ids;
  bool any_host = false;
  for (const auto& r : roster) {
    r.validate();
    if (!ids.insert(r.robot_id).second)
      throw_config("duplicate robot_id in roster");
    any_host |= r.is_host;
  }
  for (int i = 0; i < static_cast<int>(roster.size()); ++i)
    if (roster[i].robot_id != i)
      throw_config("roster robot_ids must be contiguous slots 0..N-1");
  if (!any_host) throw_config("at least one roster robot must be a host");
  if (workloads.empty()) throw_config("at least one chain template required");
  for (const auto& w : workloads) {
    if (w.stages.empty()) throw_config("chain template has no stages");
    if (w.goal_fps <= 0.0) throw_config("chain goal_fps must be > 0");
    if (w.latency_budget_ms <= 0.0)
      throw_config("chain latency_budget_ms must be > 0");
    for (auto k : w.stages)
      if (!stage_costs.count(k))
        throw_config(std::string("no stage cost for '") +
                     core::stage_kind_name(k) + "'");
  }
  for (const auto& [kind, cost] : stage_costs)
    if (cost.gflops <= 0.0 || cost.tensor_bytes < 0.0)
      throw_config("stage costs must have gflops > 0 and tensor_bytes >= 0");
  for (const auto& e : events)
    if (!find_robot(e.robot_id)) throw_config("event references unknown robot");
  for (const auto& o : link_overrides)
    if (!find_robot(o.a) || !find_robot(o.b))
      throw_config("link override references unknown robot");
  if (!(bid_bounds.lo < bid_bounds.hi)) throw_config("invalid bid bounds");
  reward_weights.validate();
  training.validate();
  ga.validate();
  if (sim.bid_window_ms <= 0.0) throw_config("bid_window_ms must be > 0");
  if (sim.max_inflight_chains < 1)
    throw_config("max_inflight_chains must be >= 1");
}

const core::RobotProfile* ScenarioConfig::find_robot(int robot_id) const {
  for (const auto& r : roster)
    if (r.robot_id == robot_id) return &r;
  return nullptr;
}

LinkSpec ScenarioConfig::link_between(int a, int b) const {
  for (const auto& o : link_overrides)
    if ((o.a == a && o.b == b) || (o.a == b && o.b == a)) return o.link;
  return default_link;
}

double ScenarioConfig::stage_gflops(StageKind kind) const {
  auto it = stage_costs.find(kind);
  if (it == stage_costs.end()) throw_config("missing stage cost");
  return it->second.gflops;
}

std::vector<core::StageContext> ScenarioConfig::stage_contexts(
    const ChainTemplate& t) const {
  double total = 0.0;
  for (auto k : t.stages) total += stage_gflops(k);
  std::vector<core::StageContext> out;
  out.reserve(t.stages.size());
  for (auto k : t.stages) {
    core::StageContext s;
    s.kind = k;
    s.deadline_ms = t.latency_budget_ms * stage_gflops(k) / total;
    s.tensor_bytes = stage_costs.at(k).tensor_bytes;
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON round trip

namespace {

json robot_to_json(const core::RobotProfile& r) {
  return json{{"robot_id", r.robot_id},
              {"name", r.name},
              {"compute_gflops", r.compute_gflops},
              {"gpu_mem_mb", r.gpu_mem_mb},
              {"battery_capacity_wh", r.battery_capacity_wh},
              {"idle_power_w", r.idle_power_w},
              {"busy_power_w", r.busy_power_w},
              {"is_host", r.is_host}};
}

core::RobotProfile robot_from_json(const json& j) {
  core::RobotProfile r;
  r.robot_id = j.at("robot_id").get<int>();
  r.name = j.at("name").get<std::string>();
  r.compute_gflops = j.at("compute_gflops").get<double>();
  r.gpu_mem_mb = j.at("gpu_mem_mb").get<double>();
  r.battery_capacity_wh = j.at("battery_capacity_wh").get<double>();
  r.idle_power_w = j.at("idle_power_w").get<double>();
  r.busy_power_w = j.at("busy_power_w").get<double>();
  r.is_host = j.at("is_host").get<bool>();
  return r;
}

json link_to_json(const LinkSpec& l) {
  return json{{"base_rtt_ms", l.base_rtt_ms},
              {"jitter_sd_ms", l.jitter_sd_ms},
              {"bandwidth_bytes_per_ms", l.bandwidth_bytes_per_ms},
              {"rssi_dbm", l.rssi_dbm},
              {"up", l.up}};
}

LinkSpec link_from_json(const json& j) {
  LinkSpec l;
  l.base_rtt_ms = j.at("base_rtt_ms").get<double>();
  l.jitter_sd_ms = j.at("jitter_sd_ms").get<double>();
  l.bandwidth_bytes_per_ms = j.at("bandwidth_bytes_per_ms").get<double>();
  l.rssi_dbm = j.at("rssi_dbm").get<double>();
  l.up = j.at("up").get<bool>();
  return l;
}

}  // namespace

json ScenarioConfig::to_json() const {
  json roster_j = json::array();
  for (const auto& r : roster) roster_j.push_back(robot_to_json(r));

  json overrides = json::array();
  for (const auto& o : link_overrides)
    overrides.push_back(json{{"a", o.a}, {"b", o.b}, {"link", link_to_json(o.link)}});

  json workloads_j = json::array();
  for (const auto& w : workloads) {
    json stages = json::array();
    for (auto k : w.stages) stages.push_back(core::stage_kind_name(k));
    workloads_j.push_back(json{{"name", w.name},
                               {"stages", stages},
                               {"goal_fps", w.goal_fps},
                               {"latency_budget_ms", w.latency_budget_ms},
                               {"arrival_fps", w.arrival_fps}});
  }

  json costs = json::object();
  for (const auto& [kind, cost] : stage_costs)
    costs[core::stage_kind_name(kind)] =
        json{{"gflops", cost.gflops}, {"tensor_bytes", cost.tensor_bytes}};

  json events_j = json::array();
  for (const auto& e : events)
    events_j.push_back(
        json{{"type", e.type == RosterEvent::Type::join ? "join" : "leave"},
             {"robot_id", e.robot_id},
             {"t_ms", e.t_ms}});

  return json{
      {"name", name},
      {"roster", roster_j},
      {"links", {{"default", link_to_json(default_link)}, {"overrides", overrides}}},
      {"workloads", workloads_j},
      {"stage_costs", costs},
      {"reward_weights",
       {{"lambda_deadline", reward_weights.lambda_deadline},
        {"lambda_energy", reward_weights.lambda_energy},
        {"w_slack", reward_weights.w_slack},
        {"w_rtt", reward_weights.w_rtt},
        {"w_proc", reward_weights.w_proc},
        {"w_xfer", reward_weights.w_xfer}}},
      {"feature_scales", core::scales_to_json(scales)},
      {"bid_bounds", {{"lo", bid_bounds.lo}, {"hi", bid_bounds.hi}}},
      {"training",
       {{"gamma", training.gamma},
        {"gae_lambda", training.gae_lambda},
        {"ppo_clip", training.ppo_clip},
        {"lr", training.lr},
        {"awr_beta", training.awr_beta},
        {"entropy_coeff", training.entropy_coeff},
        {"epochs_per_update", training.epochs_per_update},
        {"batch_chains", training.batch_chains},
        {"minibatch", training.minibatch},
        {"bc_epochs", training.bc_epochs},
        {"bc_target_agreement", training.bc_target_agreement},
        {"critic_epochs", training.critic_epochs},
        {"awr_epochs", training.awr_epochs},
        {"ppo_updates", training.ppo_updates},
        {"val_fraction", training.val_fraction}}},
      {"ga",
       {{"population_size", ga.population_size},
        {"generations", ga.generations},
        {"crossover_rate", ga.crossover_rate},
        {"mutation_rate", ga.mutation_rate},
        {"elitism_count", ga.elitism_count},
        {"fitness_window", ga.fitness_window},
        {"planning_ms", ga.planning_ms}}},
      {"dual_limits",
       {{"power_fraction", dual_limits.power_fraction},
        {"miss_rate", dual_limits.miss_rate},
        {"dual_lr", dual_limits.dual_lr}}},
      {"sim",
       {{"queue_contention", sim.queue_contention},
        {"proc_noise_log_sd", sim.proc_noise_log_sd},
        {"bid_window_ms", sim.bid_window_ms},
        {"max_inflight_chains", sim.max_inflight_chains},
        {"fps_window_s", sim.fps_window_s},
        {"temp_tau_s", sim.temp_tau_s}}},
      {"horizon_s", horizon_s},
      {"seed", seed},
      {"events", events_j}};
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  ScenarioConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    for (const auto& r : j.at("roster")) c.roster.push_back(robot_from_json(r));
    c.default_link = link_from_json(j.at("links").at("default"));
    for (const auto& o : j.at("links").at("overrides"))
      c.link_overrides.push_back(LinkOverride{o.at("a").get<int>(),
                                              o.at("b").get<int>(),
                                              link_from_json(o.at("link"))});
    for (const auto& w : j.at("workloads")) {
      ChainTemplate t;
      t.name = w.at("name").get<std::string>();
      for (const auto& s : w.at("stages"))
        t.stages.push_back(core::stage_kind_from_name(s.get<std::string>()));
      t.goal_fps = w.at("goal_fps").get<double>();
      t.latency_budget_ms = w.at("latency_budget_ms").get<double>();
      t.arrival_fps = w.value("arrival_fps", 0.0);
      c.workloads.push_back(std::move(t));
    }
    for (const auto& [key, cost] : j.at("stage_costs").items())
      c.stage_costs[core::stage_kind_from_name(key)] =
          StageCost{cost.at("gflops").get<double>(),
                    cost.at("tensor_bytes").get<double>()};
    const auto& rw = j.at("reward_weights");
    c.reward_weights.lambda_deadline = rw.at("lambda_deadline").get<double>();
    c.reward_weights.lambda_energy = rw.at("lambda_energy").get<double>();
    c.reward_weights.w_slack = rw.at("w_slack").get<double>();
    c.reward_weights.w_rtt = rw.at("w_rtt").get<double>();
    c.reward_weights.w_proc = rw.at("w_proc").get<double>();
    c.reward_weights.w_xfer = rw.at("w_xfer").get<double>();
    c.scales = core::scales_from_json(j.at("feature_scales"));
    c.bid_bounds.lo = j.at("bid_bounds").at("lo").get<double>();
    c.bid_bounds.hi = j.at("bid_bounds").at("hi").get<double>();
    const auto& tr = j.at("training");
    c.training.gamma = tr.at("gamma").get<double>();
    c.training.gae_lambda = tr.at("gae_lambda").get<double>();
    c.training.ppo_clip = tr.at("ppo_clip").get<double>();
    c.training.lr = tr.at("lr").get<double>();
    c.training.awr_beta = tr.at("awr_beta").get<double>();
    c.training.entropy_coeff = tr.at("entropy_coeff").get<double>();
    c.training.epochs_per_update = tr.at("epochs_per_update").get<int>();
    c.training.batch_chains = tr.at("batch_chains").get<int>();
    c.training.minibatch = tr.at("minibatch").get<int>();
    c.training.bc_epochs = tr.at("bc_epochs").get<int>();
    c.training.bc_target_agreement = tr.at("bc_target_agreement").get<double>();
    c.training.critic_epochs = tr.at("critic_epochs").get<int>();
    c.training.awr_epochs = tr.at("awr_epochs").get<int>();
    c.training.ppo_updates = tr.at("ppo_updates").get<int>();
    c.training.val_fraction = tr.at("val_fraction").get<double>();
    const auto& gj = j.at("ga");
    c.ga.population_size = gj.at("population_size").get<int>();
    c.ga.generations = gj.at("generations").get<int>();
    c.ga.crossover_rate = gj.at("crossover_rate").get<double>();
    c.ga.mutation_rate = gj.at("mutation_rate").get<double>();
    c.ga.elitism_count = gj.at("elitism_count").get<int>();
    c.ga.fitness_window = gj.at("fitness_window").get<int>();
    c.ga.planning_ms = gj.at("planning_ms").get<double>();
    const auto& dl = j.at("dual_limits");
    c.dual_limits.power_fraction = dl.at("power_fraction").get<double>();
    c.dual_limits.miss_rate = dl.at("miss_rate").get<double>();
    c.dual_limits.dual_lr = dl.at("dual_lr").get<double>();
    const auto& sp = j.at("sim");
    c.sim.queue_contention = sp.at("queue_contention").get<double>();
    c.sim.proc_noise_log_sd = sp.at("proc_noise_log_sd").get<double>();
    c.sim.bid_window_ms = sp.at("bid_window_ms").get<double>();
    c.sim.max_inflight_chains = sp.at("max_inflight_chains").get<int>();
    c.sim.fps_window_s = sp.at("fps_window_s").get<double>();
    c.sim.temp_tau_s = sp.at("temp_tau_s").get<double>();
    c.horizon_s = j.at("horizon_s").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("events")) {
      RosterEvent ev;
      ev.type = e.at("type").get<std::string>() == "join"
                    ? RosterEvent::Type::join
                    : RosterEvent::Type::leave;
      ev.robot_id = e.at("robot_id").get<int>();
      ev.t_ms = e.at("t_ms").get<double>();
      c.events.push_back(ev);
    }
  } catch (const core::json::exception& e) {
    throw_config(std::string("config parse error: ") + e.what());
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Templates

namespace {

std::map<StageKind, StageCost> default_stage_costs() {
  // SAM stages are ~4x heavier than CLIP stages in aggregate.
  return {{StageKind::samA, {120.0, 1048576.0}},
          {StageKind::samB, {180.0, 1048576.0}},
          {StageKind::samC, {100.0, 1048576.0}},
          {StageKind::clipA, {25.0, 1048576.0}},
          {StageKind::clipB, {45.0, 1048576.0}},
          {StageKind::clipC, {30.0, 1048576.0}},
          {StageKind::extra, {120.0, 1048576.0}}};
}

core::RobotProfile make_profile(int id, const std::string& name, double gflops,
                                double mem_mb, double cap_wh, double idle_w,
                                double busy_w, bool host) {
  core::RobotProfile p;
  p.robot_id = id;
  p.name = name;
  p.compute_gflops = gflops;
  p.gpu_mem_mb = mem_mb;
  p.battery_capacity_wh = cap_wh;
  p.idle_power_w = idle_w;
  p.busy_power_w = busy_w;
  p.is_host = host;
  return p;
}

ScenarioConfig base_scenario() {
  ScenarioConfig c;
  c.roster = {
      make_profile(0, "husky", 2400.0, 24000.0, 980.0, 60.0, 180.0, true),
      make_profile(1, "jackal", 700.0, 4000.0, 270.0, 25.0, 80.0, true),
      make_profile(2, "spot", 500.0, 16000.0, 605.0, 150.0, 350.0, true),
  };
  ChainTemplate frame;
  frame.name = "frame";
  frame.stages = {StageKind::samA, StageKind::samB, StageKind::samC,
                  StageKind::clipA, StageKind::clipB, StageKind::clipC};
  frame.goal_fps = 2.0;
  frame.latency_budget_ms = 1800.0;
  c.workloads = {frame};
  c.stage_costs = default_stage_costs();
  c.horizon_s = 60.0;
  c.seed = 1;
  return c;
}

}  // namespace

ScenarioConfig make_scenario(const std::string& template_name) {
  ScenarioConfig c = base_scenario();
  if (template_name == "default3") {
    c.name = "default3";
  } else if (template_name == "executor4") {
    c.name = "executor4";
    c.roster.push_back(
        make_profile(3, "linux_executor", 1500.0, 8000.0, 99.0, 20.0, 110.0,
                     false));
  } else if (template_name == "failure2") {
    c.name = "failure2";
    c.events.push_back(RosterEvent{RosterEvent::Type::leave, 2, 0.0});
  } else if (template_name == "extratask") {
    c.name = "extratask";
    for (auto& w : c.workloads) w.stages.push_back(StageKind::extra);
  } else {
    throw_config("unknown scenario template '" + template_name + "'");
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_missing("config not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw_config(std::string("config is not valid JSON: ") + e.what());
  }
  return ScenarioConfig::from_json(j);
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_runtime("cannot write config: " + path);
  out << cfg.to_json().dump(2) << "\n";
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::string bytes = cfg.to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace cohort::run
