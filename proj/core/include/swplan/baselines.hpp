#pragma once

#include <cstdint>

#include "swplan/lattice.hpp"
#include "swplan/swp.hpp"

namespace swplan {

/// Per-edge weight used by the graph planners: the quantized delay into
/// the successor node, optionally plus one (the +1 matches the spiking
/// wave's one-step integration latency per hop).
enum class WeightMode { D, DPlus1 };

struct DijkstraResult {
  int total_weight = 0;
  Path path;
};

/// Exact shortest path; the reference optimum every other planner is
/// measured against. Deterministic: neighbor relaxation in Direction
/// order, queue ties popped by node index.
DijkstraResult dijkstra(const QuantizedDelayField& delays, NodeId start,
                        NodeId goal, WeightMode mode);
DijkstraResult dijkstra(const DelayField& delays, NodeId start, NodeId goal,
                        WeightMode mode);

/// A* over delay-weighted edges with the straight-line distance (in cell
/// units) as heuristic. The heuristic can overestimate remaining delay
/// cost, so the first goal expansion may be suboptimal; that behavior is
/// intentional and kept.
Path astar_euclidean(const QuantizedDelayField& delays, NodeId start,
                     NodeId goal);
Path astar_euclidean(const DelayField& delays, NodeId start, NodeId goal);

struct RrtParams {
  int iterations = 2000;
  double rewire_radius = 2.0;  // cells
  double goal_bias = 0.1;
  std::uint64_t seed = 0;
};

/// Grid-constrained RRT*: tree growth steps one lattice edge toward each
/// sample, parent choice and rewiring minimize accumulated quantized delay
/// within rewire_radius. Fully deterministic given the seed.
Path rrt_star(const QuantizedDelayField& delays, NodeId start, NodeId goal,
              const RrtParams& params);
Path rrt_star(const DelayField& delays, NodeId start, NodeId goal,
              const RrtParams& params);

/// Cost-blind greedy walk: always step to the neighbor strictly closest
/// (Euclidean) to the goal. Throws UnreachableError when trapped.
Path naive_path(const GridSpec& grid, NodeId start, NodeId goal);

struct PathMetrics {
  int hops = 0;
  double length_m = 0.0;
  /// Sum over edges of the quantized combined delay into each successive
  /// node; the cross-planner comparison metric.
  double normalized_cost = 0.0;
  double cost_current = 0.0;
  double cost_obstacle = 0.0;
  double cost_slope = 0.0;
};

/// Map-based accounting for one path: geometric length plus quantized
/// delay sums on the combined field and on each sensed layer.
PathMetrics path_metrics(const DelayField& combined, const CostLayerSet& layers,
                         const Path& path, double spacing_m);

/// Pre-quantized variant for tight evaluation loops.
struct QuantizedLayerView {
  const QuantizedDelayField* combined;
  const QuantizedDelayField* current;
  const QuantizedDelayField* obstacle;
  const QuantizedDelayField* slope;
};
PathMetrics path_metrics(const QuantizedLayerView& view, const Path& path,
                         double spacing_m);

}  // namespace swplan
