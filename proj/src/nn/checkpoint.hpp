#pragma once

#include <string>

#include "core/types.hpp"
#include "nn/actor.hpp"
#include "nn/mlp.hpp"

namespace cohort::nn {

// Self-contained parameter snapshot: actor, centralized critic, and the
// feature scales the observations were normalized with.
struct Checkpoint {
  std::string phase;  // "A", "B" or "C"
  int roster_size = 0;
  int obs_width = 0;
  core::BidBounds bounds;
  core::FeatureScales scales;
  ActorNet actor;
  Mlp critic;
};

inline constexpr const char* kCheckpointFormat = "cohort-checkpoint";
inline constexpr int kCheckpointVersion = 1;

core::json mlp_to_json(const Mlp& m);
Mlp mlp_from_json(const core::json& j);

core::json checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const core::json& j);

void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace cohort::nn
