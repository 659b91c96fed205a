#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "swplan/lattice.hpp"

namespace swplan {

using Path = std::vector<NodeId>;

inline constexpr double kDefaultBeta = -10.0;
inline constexpr double kDefaultTau = 25.0;

/// Discrete-time spiking lattice. Each node is a simplified
/// integrate-and-fire neuron; each directed edge carries an integer
/// countdown that postpones input delivery by the edge's delay.
///
/// Per step t -> t+1:
///   * countdowns reset to D on edges whose source spiked at t, others
///     decrement toward 0; an edge delivers input when its countdown read
///     1 at time t,
///   * v(t+1) = u(t) + I(t+1),
///   * a node spikes when v >= 1 and it has not spiked this episode,
///   * u is set to beta on the node's spike and recovers by +1 per step
///     toward 0.
///
/// A node spikes at most once per episode; the first delivery that causes
/// the spike defines the parent (ties broken by Direction order).
class Network {
 public:
  explicit Network(const QuantizedDelayField& delays,
                   double beta = kDefaultBeta);

  /// Force a spike at `node` at time t=0 (v=1). Call once, before stepping.
  void inject(NodeId node);

  /// Advance from time t to t+1. Returns the nodes spiking at t+1 in
  /// ascending node-index order.
  std::vector<NodeId> step(int t);

  double v(NodeId n) const { return v_[grid().index(n)]; }
  double u(NodeId n) const { return u_[grid().index(n)]; }
  int countdown(NodeId target, Direction d) const;
  std::optional<int> spike_time(NodeId n) const;
  std::optional<NodeId> parent(NodeId n) const;

  /// True when no countdown is live and no spike occurred in the last
  /// step; the wave can never produce another spike.
  bool extinguished() const { return active_.empty() && last_spikes_ == 0; }

  const GridSpec& grid() const { return delays_->grid(); }

 private:
  struct ActiveEdge {
    std::int32_t target;  // node index
    std::int16_t dir;
    std::int16_t countdown;
  };

  const QuantizedDelayField* delays_;
  double beta_;
  std::vector<double> v_;
  std::vector<double> u_;
  std::vector<std::int32_t> spike_time_;  // -1 until first spike
  std::vector<std::int32_t> parent_;      // node index, -1 if none
  std::vector<ActiveEdge> active_;
  std::vector<std::int32_t> spiked_nodes_;  // in spike order
  int last_spikes_ = 1;  // injection counts as activity
  bool injected_ = false;
};

/// Outcome of one wave propagation: first-spike times, spike parents and
/// the eligibility trace frozen at the moment the goal spiked.
class WaveResult {
 public:
  WaveResult(GridSpec grid, NodeId start, NodeId goal, int goal_arrival,
             double tau, std::vector<std::int32_t> spike_times,
             std::vector<std::int32_t> parents);

  const GridSpec& grid() const { return grid_; }
  NodeId start() const { return start_; }
  NodeId goal() const { return goal_; }
  int goal_arrival() const { return goal_arrival_; }
  double tau() const { return tau_; }

  std::optional<int> spike_time(NodeId n) const;
  std::optional<NodeId> parent(NodeId n) const;
  /// (1 - 1/tau)^(goal_arrival - spike_time), present for every spiked node.
  std::optional<double> eligibility(NodeId n) const;

  /// Spiked nodes in ascending node-index order.
  std::vector<NodeId> spiked_nodes() const;

  /// Debug dump: one `row,col,spike_time,eligibility` line per spiked node.
  void write_raster(std::ostream& os) const;

 private:
  GridSpec grid_;
  NodeId start_;
  NodeId goal_;
  int goal_arrival_;
  double tau_;
  std::vector<std::int32_t> spike_times_;
  std::vector<std::int32_t> parents_;
};

struct PropagateOptions {
  int max_steps = 0;  // 0: node_count * 11 (worst per-hop latency is D+1)
  double tau = kDefaultTau;
  double beta = kDefaultBeta;
};

/// Run a wave from start until the goal spikes. Throws UnreachableError if
/// the wave extinguishes or the step budget runs out first.
WaveResult propagate(const QuantizedDelayField& delays, NodeId start,
                     NodeId goal, PropagateOptions opts = {});
WaveResult propagate(const DelayField& delays, NodeId start, NodeId goal,
                     PropagateOptions opts = {});

/// Follow spike parents from the goal back to the start. Throws
/// std::logic_error on a broken or cyclic parent chain (bug guard).
Path extract_path(const WaveResult& wave);

}  // namespace swplan
