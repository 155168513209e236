#include "metrics/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace cohort::metrics {

const char* pipeline_kind_name(PipelineKind k) {
  switch (k) {
    case PipelineKind::clip_dominant: return "clip";
    case PipelineKind::sam_dominant: return "sam";
    case PipelineKind::whole_chain: return "chain";
  }
  return "chain";
}

PipelineKind classify_pipeline(const std::vector<core::StageKind>& stages) {
  int sam = 0, clip = 0;
  for (auto k : stages) {
    if (core::is_sam_stage(k)) ++sam;
    else if (k != core::StageKind::extra) ++clip;
  }
  if (sam > clip) return PipelineKind::sam_dominant;
  if (clip > sam) return PipelineKind::clip_dominant;
  return PipelineKind::whole_chain;
}

void FpsWindow::add_completion(double t_ms) {
  if (!completions_.empty() && t_ms < completions_.back())
    throw_runtime("FpsWindow: completions must be added in time order");
  completions_.push_back(t_ms);
}

double FpsWindow::fps_at(double t_ms) const {
  if (completions_.empty() || t_ms < completions_.front()) return 0.0;
  auto lo = std::upper_bound(completions_.begin(), completions_.end(),
                             t_ms - window_ms_);
  auto hi = std::upper_bound(completions_.begin(), completions_.end(), t_ms);
  return static_cast<double>(hi - lo) / (window_ms_ / 1000.0);
}

double success_rate(const std::vector<ChainRecord>& chains) {
  if (chains.empty()) throw_runtime("success_rate: no chains");
  long ok = 0;
  for (const auto& c : chains)
    if (!c.failed && c.met_deadline && c.met_fps_window) ++ok;
  return static_cast<double>(ok) / static_cast<double>(chains.size());
}

double success_rate_for_host(const std::vector<ChainRecord>& chains,
                             int host) {
  std::vector<ChainRecord> filtered;
  for (const auto& c : chains)
    if (c.host == host) filtered.push_back(c);
  if (filtered.empty()) return 0.0;
  return success_rate(filtered);
}

std::map<int, double> offload_rate(const std::vector<ChainRecord>& chains) {
  std::map<int, long> total, offloaded;
  for (const auto& c : chains) {
    total[c.host] += c.stage_count;
    offloaded[c.host] += c.offloaded_stage_count;
  }
  std::map<int, double> out;
  for (const auto& [host, n] : total)
    out[host] = n > 0 ? static_cast<double>(offloaded[host]) /
                            static_cast<double>(n)
                      : 0.0;
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf);
}

std::string chains_csv(const RunResult& run) {
  std::ostringstream out;
  out << "chain_id,host,latency_ms,met_deadline,met_fps_window,energy_J\n";
  for (const auto& c : run.chains) {
    out << c.chain_id << ',' << c.host << ',' << fmt_double(c.latency_ms) << ','
        << (c.met_deadline ? 1 : 0) << ',' << (c.met_fps_window ? 1 : 0) << ','
        << fmt_double(c.energy_j) << '\n';
  }
  return out.str();
}

std::string robots_csv(const RunResult& run) {
  std::ostringstream out;
  out << "robot,name,cpu_pct,gpu_pct,energy_Wh,soc_drop_pct,offload_rate,"
         "success_rate\n";
  auto rates = offload_rate(run.chains);
  for (const auto& r : run.robots) {
    double orate = rates.count(r.robot_id) ? rates.at(r.robot_id) : 0.0;
    double success = success_rate_for_host(run.chains, r.robot_id);
    out << r.robot_id << ',' << r.name << ',' << fmt_double(r.cpu_mean * 100.0)
        << ',' << fmt_double(r.gpu_mean * 100.0) << ','
        << fmt_double(r.energy_wh) << ',' << fmt_double(r.soc_drop_pct) << ','
        << fmt_double(orate) << ',' << fmt_double(success) << '\n';
  }
  return out.str();
}

core::json run_manifest(const RunResult& run) {
  double total_energy_j = 0.0;
  for (const auto& c : run.chains) total_energy_j += c.energy_j;
  long successes = 0;
  for (const auto& c : run.chains)
    if (!c.failed && c.met_deadline && c.met_fps_window) ++successes;
  return core::json{{"scenario", run.scenario},
                    {"config_hash", run.config_hash},
                    {"seed", run.seed},
                    {"scheduler", run.scheduler},
                    {"version", "cohort-0.1.0"},
                    {"horizon_ms", run.horizon_ms},
                    {"chains_completed", run.chains.size()},
                    {"chains_dropped", run.chains_dropped},
                    {"chains_succeeded", successes},
                    {"records_emitted", run.records_emitted},
                    {"deadline_misses", run.deadline_misses},
                    {"stages_total", run.stages_total},
                    {"chain_energy_J_total", total_energy_j}};
}

void write_report(const RunResult& run, const std::string& out_dir,
                  const std::string& stem) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(fs::path(out_dir) / name);
    if (!f) throw_runtime("cannot write report file: " + name);
    f << body;
  };
  write(stem + "_chains.csv", chains_csv(run));
  write(stem + "_robots.csv", robots_csv(run));
  write(stem + "_run.json", run_manifest(run).dump(2) + "\n");
}

}  // namespace cohort::metrics
