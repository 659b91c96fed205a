#pragma once

#include <array>
#include <vector>

#include "swplan/lattice.hpp"
#include "swplan/swp.hpp"

namespace swplan {

/// One raw sensor reading attributed to a waypoint and a cost layer.
/// Units: amps for current, dimensionless fraction for obstacle, radians
/// for slope.
struct CostObservation {
  NodeId node;
  CostLayer layer = CostLayer::Current;
  double raw = 0.0;
};

/// Raw readings collected while traversing one segment of a planned path.
/// raw_by_layer is indexed by CostLayer (current, obstacle, slope).
struct SegmentObservation {
  NodeId from;
  NodeId to;
  std::array<double, 3> raw_by_layer{};
  bool success = true;
};

/// Execution trace of one planned path: observations follow the path
/// order; at most one segment failed, and it is the last one recorded.
struct TraversalRecord {
  std::vector<SegmentObservation> segments;
  bool reached_goal = false;
};

/// Clamp a raw reading to the calibration bounds and map it onto the
/// integer delay range {1..10} (round-half-up).
int normalize_cost(double raw, const NormalizationParams& params);

/// Move every delay into `node` toward the observed cost m, scaled by the
/// eligibility e and learning rate delta:
///   D <- D + delta * e * (m - D)
/// A convex step, so delays never leave [1,10].
void eprop_update(DelayField& layer, NodeId node, int m, double e,
                  double delta);

/// Pin every delay into `node` at the maximum (10) — the waypoint proved
/// unreachable and future plans should avoid it.
void mark_intraversable(DelayField& layer, NodeId node);

/// Apply one traversal's observations to the layer set. Each successfully
/// visited node updates the three sensed layers with the eligibility the
/// planning wave froze for it; a failed node is marked intraversable
/// instead. The record must be a prefix of the path planned by `wave`.
void apply_traversal_update(CostLayerSet& layers, const TraversalRecord& record,
                            const WaveResult& wave, double delta);

/// Mean squared difference over all directed edges of two fields on the
/// same grid.
double costmap_mse(const DelayField& field, const DelayField& reference);

}  // namespace swplan
