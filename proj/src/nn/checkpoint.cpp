#include "nn/checkpoint.hpp"

#include <fstream>

#include "core/error.hpp"

namespace cohort::nn {

using core::json;

json mlp_to_json(const Mlp& m) {
  json layers = json::array();
  for (std::size_t l = 0; l < m.w.size(); ++l) {
    std::vector<double> w(m.w[l].size());
    // row-major
    for (long r = 0; r < m.w[l].rows(); ++r)
      for (long c = 0; c < m.w[l].cols(); ++c)
        w[static_cast<std::size_t>(r * m.w[l].cols() + c)] = m.w[l](r, c);
    std::vector<double> b(m.b[l].data(), m.b[l].data() + m.b[l].size());
    layers.push_back(json{{"rows", m.w[l].rows()},
                          {"cols", m.w[l].cols()},
                          {"w", w},
                          {"b", b}});
  }
  return json{{"output_tanh", m.output_tanh}, {"layers", layers}};
}

Mlp mlp_from_json(const json& j) {
  Mlp m;
  m.output_tanh = j.at("output_tanh").get<bool>();
  for (const auto& layer : j.at("layers")) {
    long rows = layer.at("rows").get<long>();
    long cols = layer.at("cols").get<long>();
    auto w = layer.at("w").get<std::vector<double>>();
    auto b = layer.at("b").get<std::vector<double>>();
    if (static_cast<long>(w.size()) != rows * cols ||
        static_cast<long>(b.size()) != rows)
      throw_runtime("checkpoint: layer size mismatch");
    Matrix wm(rows, cols);
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c)
        wm(r, c) = w[static_cast<std::size_t>(r * cols + c)];
    m.w.push_back(std::move(wm));
    m.b.push_back(Eigen::Map<Vector>(b.data(), rows));
  }
  m.validate_shapes();
  return m;
}

json checkpoint_to_json(const Checkpoint& c) {
  return json{{"format", kCheckpointFormat},
              {"version", kCheckpointVersion},
              {"phase", c.phase},
              {"roster_size", c.roster_size},
              {"obs_width", c.obs_width},
              {"bid_bounds", {{"lo", c.bounds.lo}, {"hi", c.bounds.hi}}},
              {"scales", core::scales_to_json(c.scales)},
              {"actor",
               {{"trunk", mlp_to_json(c.actor.trunk)},
                {"mode_head", mlp_to_json(c.actor.mode_head)},
                {"target_head", mlp_to_json(c.actor.target_head)},
                {"capacity_head", mlp_to_json(c.actor.capacity_head)},
                {"bid_head", mlp_to_json(c.actor.bid_head)}}},
              {"critic", mlp_to_json(c.critic)}};
}

Checkpoint checkpoint_from_json(const json& j) {
  if (j.value("format", "") != kCheckpointFormat)
    throw_runtime("checkpoint: unrecognized format header");
  if (j.value("version", -1) != kCheckpointVersion)
    throw_runtime("checkpoint: unsupported version");
  Checkpoint c;
  c.phase = j.at("phase").get<std::string>();
  c.roster_size = j.at("roster_size").get<int>();
  c.obs_width = j.at("obs_width").get<int>();
  c.bounds.lo = j.at("bid_bounds").at("lo").get<double>();
  c.bounds.hi = j.at("bid_bounds").at("hi").get<double>();
  c.scales = core::scales_from_json(j.at("scales"));
  const auto& a = j.at("actor");
  c.actor.trunk = mlp_from_json(a.at("trunk"));
  c.actor.mode_head = mlp_from_json(a.at("mode_head"));
  c.actor.target_head = mlp_from_json(a.at("target_head"));
  c.actor.capacity_head = mlp_from_json(a.at("capacity_head"));
  c.actor.bid_head = mlp_from_json(a.at("bid_head"));
  c.actor.bounds = c.bounds;
  c.critic = mlp_from_json(j.at("critic"));
  return c;
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_runtime("cannot write checkpoint: " + path);
  out << checkpoint_to_json(c).dump() << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_missing("checkpoint not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw_runtime("checkpoint parse error: " + std::string(e.what()));
  }
  return checkpoint_from_json(j);
}

}  // namespace cohort::nn
