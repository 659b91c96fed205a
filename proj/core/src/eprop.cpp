#include "swplan/eprop.hpp"

#include <algorithm>
#include <cmath>

namespace swplan {

int normalize_cost(double raw, const NormalizationParams& params) {
  if (!std::isfinite(raw)) throw InputError("raw cost must be finite");
  if (!(params.upper > params.lower))
    throw InputError("normalization upper bound must exceed lower bound");
  const double clamped = std::clamp(raw, params.lower, params.upper);
  return round_half_up(1.0 + 9.0 * (clamped - params.lower) /
                                 (params.upper - params.lower));
}

void eprop_update(DelayField& layer, NodeId node, int m, double e,
                  double delta) {
  layer.grid().require_node(node, "updated node");
  if (m < 1 || m > 10) throw InputError("observed cost m outside [1,10]");
  if (!(e >= 0.0 && e <= 1.0)) throw InputError("eligibility outside [0,1]");
  if (!(delta > 0.0 && delta <= 1.0))
    throw InputError("learning rate outside (0,1]");
  for (Direction d : all_directions()) {
    if (!layer.has_edge(node, d)) continue;
    const double old = layer.at(node, d);
    layer.set(node, d, old + delta * e * (m - old));
  }
}

void mark_intraversable(DelayField& layer, NodeId node) {
  layer.grid().require_node(node, "marked node");
  for (Direction d : all_directions())
    if (layer.has_edge(node, d)) layer.set(node, d, kMaxDelay);
}

void apply_traversal_update(CostLayerSet& layers, const TraversalRecord& record,
                            const WaveResult& wave, double delta) {
  if (record.segments.empty()) return;

  // The record must follow the planned path from its start.
  const Path planned = extract_path(wave);
  if (record.segments.size() > planned.size() - 1)
    throw InputError("traversal record longer than the planned path");
  for (std::size_t k = 0; k < record.segments.size(); ++k) {
    if (record.segments[k].from != planned[k] ||
        record.segments[k].to != planned[k + 1])
      throw InputError("traversal record is not a prefix of the planned path");
  }

  for (const SegmentObservation& seg : record.segments) {
    if (!seg.success) {
      mark_intraversable(layers.layer(CostLayer::Intraversable), seg.to);
      break;  // nothing after the failure point was visited
    }
    auto e = wave.eligibility(seg.to);
    if (!e)
      throw std::logic_error("visited node missing from the wave's spike set");
    for (CostLayer l : kSensedLayers) {
      const auto& params = layers.params(l);
      if (!params)
        throw InputError("layer '" + std::string(layer_name(l)) +
                         "' has no normalization params; calibrate first");
      const int m = normalize_cost(seg.raw_by_layer[static_cast<int>(l)],
                                   *params);
      eprop_update(layers.layer(l), seg.to, m, *e, delta);
    }
  }
}

double costmap_mse(const DelayField& field, const DelayField& reference) {
  if (field.grid() != reference.grid())
    throw InputError("costmap_mse requires fields on the same grid");
  double sum = 0.0;
  std::size_t n = 0;
  field.for_each_edge([&](NodeId target, Direction d, double v) {
    const double diff = v - reference.at(target, d);
    sum += diff * diff;
    ++n;
  });
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace swplan
