#pragma once

#include <functional>
#include <set>
#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace cohort::auction {

using core::AvailabilityMask;
using core::BidBounds;
using core::Observation;
using core::StageContext;

struct BidSet {
  std::vector<double> bids;  // per roster slot; only masked-in entries matter
  AvailabilityMask mask;
  StageContext stage;
};

struct AuctionOutcome {
  int winner_id = -1;
  double winning_bid = 0.0;
  std::set<int> responded;
};

// Inputs the auction needs per candidate robot: whether it is online and its
// sampled round-trip latency back to the host (0 for the host itself).
struct BidderContext {
  bool online = false;
  double rtt_to_host_ms = 0.0;
  Observation observation;
};

using BidderFn = std::function<double(int slot, const BidderContext&)>;

// Solicits bids from all roster slots; robots whose response latency exceeds
// the bid window, and offline robots, are masked out. Throws when nobody can
// respond (callers fall back to local execution on the host).
BidSet collect_bids(const std::vector<BidderContext>& candidates,
                    const StageContext& stage, const BidderFn& bidder,
                    double bid_window_ms, const BidBounds& bounds);

// Deterministic rule: lowest bid among masked-in slots wins, ties broken by
// lowest robot id.
AuctionOutcome select_winner(const BidSet& bid_set);

// Hand-crafted cost heuristic used for offline data collection. Lower bid =
// more willing executor. Works on raw (denormalized) telemetry values.
struct HeuristicCoeffs {
  double k_queue = 50.0;
  double k_soc = 100.0;
  double k_rtt = 0.5;
  double k_gpu = 80.0;
  double k_cpu = 40.0;
};

double heuristic_bid(const Observation& obs, const core::FeatureScales& scales,
                     double rtt_to_host_ms, const BidBounds& bounds,
                     const HeuristicCoeffs& coeffs = {});

// Rule-based capacity label: how many concurrent stages this robot would
// accept given its current queue depth.
int heuristic_capacity(double queue_len);

}  // namespace cohort::auction
