#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include "auction/auction.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"
#include "metrics/metrics.hpp"
#include "run/scenario.hpp"
#include "train/rewards.hpp"

namespace cohort::sim {

// ---------------------------------------------------------------------------
// Events

enum class EventKind : int {
  chain_arrival = 0,
  stage_start = 1,
  stage_done = 2,
  transfer_done = 3,
  device_join = 4,
  device_leave = 5,
};

struct SimEvent {
  double time_ms = 0.0;
  EventKind kind = EventKind::chain_arrival;
  int robot_id = 0;
  long seq = 0;  // insertion order, the final tie-breaker
  int chain_idx = -1;
  int stage_idx = -1;
  int template_idx = -1;
};

// ---------------------------------------------------------------------------
// Scheduling interface

// Everything a scheduler may look at when deciding one stage. Candidate
// observations are already normalized; rtt_to_host_ms carries the raw sample.
struct StageDecisionInputs {
  double now_ms = 0.0;
  int chain_idx = 0;
  int chain_id = 0;
  int host = 0;
  int stage_idx = 0;
  int stage_count = 0;
  core::StageContext stage;  // raw values
  std::vector<auction::BidderContext> candidates;
  const run::ScenarioConfig* config = nullptr;
  const std::vector<int>* plan = nullptr;  // chain pre-assignment, if any
};

struct StageDecision {
  int winner = -1;  // -1 = auction failed, world falls back to the host
  bool emit_record = false;
  core::AvailabilityMask mask;
  std::vector<double> bids;
  std::vector<int> modes;
  std::vector<int> targets;
  std::vector<int> capacities;
  // Policy rollout extras, parallel to bids (empty otherwise).
  std::vector<double> bid_pre_squash;
  std::vector<double> bid_log_prob;
};

// Snapshot handed to per-chain planners (the GA baseline).
struct PlanInputs {
  double now_ms = 0.0;
  int host = 0;
  std::vector<core::StageContext> stages;
  struct RobotSnap {
    bool online = false;
    int queue_len = 0;
    double compute_gflops = 0.0;
    double busy_power_w = 0.0;
    double rtt_to_host_ms = 0.0;  // expected (no jitter)
    double bandwidth_bytes_per_ms = 0.0;
  };
  std::vector<RobotSnap> robots;
  const run::ScenarioConfig* config = nullptr;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual const char* name() const = 0;
  // Called once per chain arrival; a non-empty result fixes the per-stage
  // executors up front. The returned delay is charged before stage 0.
  virtual std::vector<int> plan_chain(const PlanInputs&) { return {}; }
  virtual double plan_delay_ms() const { return 0.0; }
  virtual StageDecision decide(const StageDecisionInputs& in) = 0;
};

// ---------------------------------------------------------------------------
// Robot state

struct StageTask {
  int chain_idx = -1;
  int stage_idx = -1;
  double xfer_ms = 0.0;
  double rtt_ms = 0.0;
};

struct RobotState {
  core::RobotProfile profile;
  std::deque<StageTask> waiting;
  std::optional<StageTask> current;
  double current_start_ms = 0.0;
  double current_proc_ms = 0.0;
  double soc = 1.0;
  double cum_energy_j = 0.0;
  double idle_energy_j = 0.0;
  double stage_energy_j = 0.0;
  double temp_c = 35.0;
  double busy_until_ms = 0.0;
  bool online = true;
  double last_settle_ms = 0.0;
  // time-weighted accounting
  double busy_ms_total = 0.0;
  double online_ms_total = 0.0;
  double cpu_util_ms = 0.0;  // integral of utilization over time
  double gpu_util_ms = 0.0;

  int queue_len() const {
    return static_cast<int>(waiting.size()) + (current ? 1 : 0);
  }
};

// Per-record rollout extras for on-policy training.
struct RolloutExtra {
  std::vector<double> bid_pre_squash;
  std::vector<double> bid_log_prob;
};

// ---------------------------------------------------------------------------
// Cost model primitives (pure; exposed for tests and the GA fitness).

double expected_proc_ms(double stage_gflops, double compute_gflops,
                        int queue_len, double contention);
double expected_transfer_ms(double payload_bytes, double bandwidth_bytes_per_ms,
                            double rtt_ms);

// ---------------------------------------------------------------------------
// The world

class World {
 public:
  World(const run::ScenarioConfig& cfg, std::uint64_t seed, Scheduler& sched);

  // Record handling: stream flushes chain-complete trajectories as JSONL;
  // keep=true retains them (plus extras) for take_records().
  void set_record_sink(std::ostream* out) { record_sink_ = out; }
  void set_keep_records(bool keep) { keep_records_ = keep; }
  // Penalized rewards use these duals at emission time (nullptr = zero duals).
  void set_duals(const train::DualVariables* duals) { duals_ = duals; }

  // Processes events with time <= t_ms.
  void run_until_time(double t_ms);
  // Processes events until n more chains flush (complete or fail); returns
  // the number actually flushed (the event queue can run dry).
  long run_until_chains(long n);
  // Settles all accounting at the current clock. Call once, at the end.
  void finalize();

  double now_ms() const { return clock_ms_; }
  long chains_flushed() const { return chains_flushed_; }
  long records_emitted() const { return records_emitted_; }

  std::vector<core::TransitionRecord> take_records();
  std::vector<RolloutExtra> take_extras();

  metrics::RunResult result() const;

  // Sampled per call; throws if the robot is offline.
  double sample_proc_time(int robot_id, const core::StageContext& stage);
  // Throws if the link is down.
  double sample_transfer_time(double payload_bytes, const run::LinkSpec& link,
                              double rtt_sample_ms) const;

  const RobotState& robot(int id) const { return robots_.at(id); }
  int roster_size() const { return static_cast<int>(robots_.size()); }
  const run::ScenarioConfig& config() const { return cfg_; }

 private:
  struct ChainRun {
    int chain_id = 0;
    int host = 0;
    int template_idx = 0;
    std::vector<core::StageContext> stages;
    double goal_fps = 0.0;
    double latency_budget_ms = 0.0;
    int next_stage = 0;
    double start_ms = 0.0;
    bool failed = false;
    bool flushed = false;
    double energy_j = 0.0;
    int offloaded = 0;
    // Decision made at stage start, completed at stage done.
    struct PendingStage {
      bool active = false;
      StageDecision decision;
      std::vector<core::Observation> observations;
      double rtt_to_winner_ms = 0.0;
      double xfer_ms = 0.0;
      double decide_ms = 0.0;
    };
    PendingStage pending;
    std::vector<core::TransitionRecord> records;
    std::vector<RolloutExtra> extras;
  };

  struct Stream {
    int host = 0;
    int template_idx = 0;
    double period_ms = 0.0;
    metrics::FpsWindow fps;
    long completions = 0;
    Stream(int h, int t, double p, double window_s)
        : host(h), template_idx(t), period_ms(p), fps(window_s) {}
  };

  void schedule(SimEvent ev);
  bool step();  // processes one event; false when queue empty
  void handle_arrival(const SimEvent& ev);
  void handle_stage_start(const SimEvent& ev);
  void handle_stage_done(const SimEvent& ev);
  void handle_transfer_done(const SimEvent& ev);
  void handle_join(const SimEvent& ev);
  void handle_leave(const SimEvent& ev);

  void settle_all(double t_ms);
  void settle_idle(RobotState& r, double t_ms);
  void accrue_energy(RobotState& r, double joules, bool busy_lump);
  core::ResourceTelemetry telemetry_for(const RobotState& r) const;
  std::vector<auction::BidderContext> build_candidates(int host);
  void enqueue_stage(int robot_id, ChainRun& chain, int stage_idx);
  void try_start(int robot_id);
  void fail_chain(ChainRun& chain, double t_ms);
  void complete_stage_failure(ChainRun& chain, double partial_proc_ms,
                              double partial_energy_j);
  void emit_record(ChainRun& chain, const core::StageOutcome& outcome,
                   bool done);
  void flush_chain(ChainRun& chain);
  void finish_chain(ChainRun& chain);
  Stream& stream_for(int host, int template_idx);
  int inflight_for_host(int host) const;

  run::ScenarioConfig cfg_;
  Scheduler& sched_;
  Rng rng_;
  double clock_ms_ = 0.0;
  double horizon_ms_ = 0.0;
  long seq_ = 0;
  bool finalized_ = false;

  struct EventOrder {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.time_ms != b.time_ms) return a.time_ms > b.time_ms;
      if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
      if (a.robot_id != b.robot_id) return a.robot_id > b.robot_id;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> events_;

  std::vector<RobotState> robots_;
  std::vector<ChainRun> chains_;
  std::vector<Stream> streams_;
  std::vector<metrics::ChainRecord> chain_records_;
  std::vector<core::TransitionRecord> kept_records_;
  std::vector<RolloutExtra> kept_extras_;
  std::ostream* record_sink_ = nullptr;
  bool keep_records_ = false;
  const train::DualVariables* duals_ = nullptr;
  long chains_flushed_ = 0;
  long records_emitted_ = 0;
  long chains_dropped_ = 0;
  long deadline_misses_ = 0;
  long stages_total_ = 0;
  int next_chain_id_ = 0;
};

}  // namespace cohort::sim
