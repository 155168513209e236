#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace cohort::metrics {

enum class PipelineKind { clip_dominant, sam_dominant, whole_chain };
const char* pipeline_kind_name(PipelineKind k);
PipelineKind classify_pipeline(const std::vector<core::StageKind>& stages);

struct ChainRecord {
  int chain_id = 0;
  int host = 0;
  PipelineKind pipeline = PipelineKind::whole_chain;
  double start_ms = 0.0;
  double end_ms = 0.0;
  double latency_ms = 0.0;
  double goal_fps = 0.0;
  double latency_budget_ms = 0.0;
  double fps_at_completion = 0.0;
  bool met_deadline = false;
  bool met_fps_window = false;
  bool failed = false;  // aborted by executor/host loss
  double energy_j = 0.0;
  int stage_count = 0;
  int offloaded_stage_count = 0;
};

struct SuccessCriteria {
  double clip_goal_fps = 4.0;
  double sam_goal_fps = 2.0;
  double latency_budget_ms = 1800.0;
};

// Completions in a trailing window divided by the window length; zero before
// the first completion.
class FpsWindow {
 public:
  explicit FpsWindow(double window_s) : window_ms_(window_s * 1000.0) {}

  void add_completion(double t_ms);
  double fps_at(double t_ms) const;

 private:
  double window_ms_;
  std::vector<double> completions_;  // ascending
};

// Fraction of chains meeting both the FPS goal and the latency budget.
double success_rate(const std::vector<ChainRecord>& chains);
// Same, restricted to one host.
double success_rate_for_host(const std::vector<ChainRecord>& chains, int host);

// Offloaded stages / total stages, per hosting robot.
std::map<int, double> offload_rate(const std::vector<ChainRecord>& chains);

struct RobotUsage {
  int robot_id = 0;
  std::string name;
  double cpu_mean = 0.0;        // time-weighted fraction
  double gpu_mean = 0.0;        // time-weighted fraction
  double energy_wh = 0.0;
  double soc_start = 1.0;
  double soc_end = 1.0;
  double soc_drop_pct = 0.0;
  double busy_ms = 0.0;
  double online_ms = 0.0;
};

struct RunResult {
  std::string scenario;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string scheduler;
  double horizon_ms = 0.0;
  std::vector<ChainRecord> chains;
  std::vector<RobotUsage> robots;
  long records_emitted = 0;
  long chains_dropped = 0;  // arrivals skipped by back-pressure
  long deadline_misses = 0;
  long stages_total = 0;
};

// Serialization: per-chain CSV, per-robot CSV (Table-style columns) and a
// JSON manifest. Output bytes depend only on the result contents.
std::string chains_csv(const RunResult& run);
std::string robots_csv(const RunResult& run);
core::json run_manifest(const RunResult& run);

void write_report(const RunResult& run, const std::string& out_dir,
                  const std::string& stem);

// Deterministic float formatting shared by every CSV writer.
std::string fmt_double(double v);

}  // namespace cohort::metrics
