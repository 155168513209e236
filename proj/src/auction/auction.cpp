#include "auction/auction.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace cohort::auction {

BidSet collect_bids(const std::vector<BidderContext>& candidates,
                    const StageContext& stage, const BidderFn& bidder,
                    double bid_window_ms, const BidBounds& bounds) {
  int n = static_cast<int>(candidates.size());
  if (n == 0) throw_runtime("collect_bids: empty roster");

  BidSet set;
  set.stage = stage;
  set.bids.assign(n, 0.0);
  set.mask.available.assign(n, false);

  for (int slot = 0; slot < n; ++slot) {
    const auto& c = candidates[slot];
    if (!c.online) continue;
    if (c.rtt_to_host_ms > bid_window_ms) continue;  // late response
    set.mask.available[slot] = true;
    set.bids[slot] = core::clip_bid(bidder(slot, c), bounds);
  }
  if (!set.mask.any()) throw_runtime("auction_failed: all robots masked");
  return set;
}

AuctionOutcome select_winner(const BidSet& bid_set) {
  AuctionOutcome out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bid_set.bids.size(); ++i) {
    if (!bid_set.mask.available[i]) continue;
    out.responded.insert(static_cast<int>(i));
    // Strict < keeps the lowest slot on ties.
    if (bid_set.bids[i] < best) {
      best = bid_set.bids[i];
      out.winner_id = static_cast<int>(i);
      out.winning_bid = bid_set.bids[i];
    }
  }
  if (out.winner_id < 0) throw_runtime("auction_failed: no masked-in bids");
  return out;
}

double heuristic_bid(const Observation& obs, const core::FeatureScales& scales,
                     double rtt_to_host_ms, const BidBounds& bounds,
                     const HeuristicCoeffs& coeffs) {
  double queue = scales.queue.denormalize(obs.telemetry.queue);
  double soc = scales.soc.denormalize(obs.telemetry.soc);
  double gpu = scales.gpu.denormalize(obs.telemetry.gpu);
  double cpu = scales.cpu.denormalize(obs.telemetry.cpu);
  double raw = coeffs.k_queue * queue + coeffs.k_soc * (1.0 - soc) +
               coeffs.k_rtt * rtt_to_host_ms + coeffs.k_gpu * gpu +
               coeffs.k_cpu * cpu;
  return core::clip_bid(raw, bounds);
}

int heuristic_capacity(double queue_len) {
  if (queue_len <= 0.0) return core::kCapacityFour;
  if (queue_len <= 2.0) return core::kCapacityTwo;
  return core::kCapacityOne;
}

}  // namespace cohort::auction
