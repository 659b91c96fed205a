#include "swplan/swp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

#include "swplan/text_util.hpp"

namespace swplan {

Network::Network(const QuantizedDelayField& delays, double beta)
    : delays_(&delays), beta_(beta) {
  const int n = grid().cell_count();
  v_.assign(n, 0.0);
  u_.assign(n, 0.0);
  spike_time_.assign(n, -1);
  parent_.assign(n, -1);
}

void Network::inject(NodeId node) {
  grid().require_node(node, "start node");
  if (injected_) throw InputError("network already has an injected spike");
  injected_ = true;
  const int idx = grid().index(node);
  v_[idx] = 1.0;
  u_[idx] = beta_;  // spike at t=0
  spike_time_[idx] = 0;
  spiked_nodes_.push_back(idx);
  last_spikes_ = 1;
}

int Network::countdown(NodeId target, Direction d) const {
  const int idx = grid().index(target);
  for (const ActiveEdge& e : active_)
    if (e.target == idx && e.dir == static_cast<int>(d)) return e.countdown;
  return 0;
}

std::optional<int> Network::spike_time(NodeId n) const {
  const int t = spike_time_[grid().index(n)];
  if (t < 0) return std::nullopt;
  return t;
}

std::optional<NodeId> Network::parent(NodeId n) const {
  const int p = parent_[grid().index(n)];
  if (p < 0) return std::nullopt;
  return grid().node(p);
}

std::vector<NodeId> Network::step(int t) {
  const GridSpec& g = grid();

  // Deliver input from countdowns that read 1 at time t, then decrement.
  // delivered_dirs collects, per target, a bitmask of delivering directions
  // so the parent tie-break follows the Direction enumeration order.
  struct Delivery {
    std::int32_t target;
    std::uint8_t dirs;
    std::uint8_t count;
  };
  std::vector<Delivery> deliveries;
  std::size_t keep = 0;
  for (ActiveEdge& e : active_) {
    if (e.countdown == 1) {
      bool found = false;
      for (Delivery& d : deliveries) {
        if (d.target == e.target) {
          d.dirs |= static_cast<std::uint8_t>(1u << e.dir);
          ++d.count;
          found = true;
          break;
        }
      }
      if (!found)
        deliveries.push_back(
            {e.target, static_cast<std::uint8_t>(1u << e.dir), 1});
    }
    if (--e.countdown > 0) active_[keep++] = e;
  }
  active_.resize(keep);

  // Countdown reset: edges whose source spiked at t start their delay now.
  // These were reset after the delivery scan, so a delay of 1 delivers on
  // the next step, giving every hop a latency of D+1.
  for (std::int32_t src : spiked_nodes_) {
    if (spike_time_[src] != t) continue;
    NodeId source = g.node(src);
    for (Direction d : all_directions()) {
      Offset o = direction_offset(d);
      NodeId target{source.row + o.drow, source.col + o.dcol};
      if (!g.traversable(target)) continue;
      const int tgt = g.index(target);
      const int dir = static_cast<int>(opposite(d));  // as seen from target
      const int delay = delays_->at(tgt, dir);
      if (delay > 0)
        active_.push_back({tgt, static_cast<std::int16_t>(dir),
                           static_cast<std::int16_t>(delay)});
    }
  }

  // Recovery: beta on the node's own spike at t, else +1 toward 0.
  for (std::int32_t idx : spiked_nodes_)
    u_[idx] = spike_time_[idx] == t ? beta_ : std::min(u_[idx] + 1.0, 0.0);

  // Membrane update and new spikes at t+1.
  std::vector<NodeId> fired;
  for (const Delivery& d : deliveries) {
    v_[d.target] = u_[d.target] + d.count;
    if (v_[d.target] >= 1.0 && spike_time_[d.target] < 0) {
      spike_time_[d.target] = t + 1;
      parent_[d.target] = -1;
      // First delivering direction in enumeration order names the parent.
      for (int dir = 0; dir < kDirectionCount; ++dir) {
        if (d.dirs & (1u << dir)) {
          Offset o = direction_offset(static_cast<Direction>(dir));
          NodeId tgt_node = g.node(d.target);
          parent_[d.target] =
              g.index({tgt_node.row + o.drow, tgt_node.col + o.dcol});
          break;
        }
      }
      spiked_nodes_.push_back(d.target);
      fired.push_back(g.node(d.target));
      u_[d.target] = beta_;
    }
  }
  // Spiked nodes with no delivery this step: v follows u alone.
  for (std::int32_t idx : spiked_nodes_) {
    if (spike_time_[idx] <= t) {
      bool delivered = false;
      for (const Delivery& d : deliveries)
        if (d.target == idx) { delivered = true; break; }
      if (!delivered) v_[idx] = u_[idx];
    }
  }

  last_spikes_ = static_cast<int>(fired.size());
  std::sort(fired.begin(), fired.end());
  return fired;
}

WaveResult::WaveResult(GridSpec grid, NodeId start, NodeId goal,
                       int goal_arrival, double tau,
                       std::vector<std::int32_t> spike_times,
                       std::vector<std::int32_t> parents)
    : grid_(std::move(grid)), start_(start), goal_(goal),
      goal_arrival_(goal_arrival), tau_(tau),
      spike_times_(std::move(spike_times)), parents_(std::move(parents)) {}

std::optional<int> WaveResult::spike_time(NodeId n) const {
  if (!grid_.traversable(n)) return std::nullopt;
  const int t = spike_times_[grid_.index(n)];
  if (t < 0) return std::nullopt;
  return t;
}

std::optional<NodeId> WaveResult::parent(NodeId n) const {
  if (!grid_.traversable(n)) return std::nullopt;
  const int p = parents_[grid_.index(n)];
  if (p < 0) return std::nullopt;
  return grid_.node(p);
}

std::optional<double> WaveResult::eligibility(NodeId n) const {
  auto t = spike_time(n);
  if (!t) return std::nullopt;
  return std::pow(1.0 - 1.0 / tau_, goal_arrival_ - *t);
}

std::vector<NodeId> WaveResult::spiked_nodes() const {
  std::vector<NodeId> out;
  for (int idx = 0; idx < grid_.cell_count(); ++idx)
    if (spike_times_[idx] >= 0) out.push_back(grid_.node(idx));
  return out;
}

void WaveResult::write_raster(std::ostream& os) const {
  os << "row,col,spike_time,eligibility\n";
  for (NodeId n : spiked_nodes()) {
    os << n.row << ',' << n.col << ',' << *spike_time(n) << ','
       << fmt_double(*eligibility(n)) << '\n';
  }
}

WaveResult propagate(const QuantizedDelayField& delays, NodeId start,
                     NodeId goal, PropagateOptions opts) {
  const GridSpec& grid = delays.grid();
  grid.require_node(start, "start node");
  grid.require_node(goal, "goal node");
  if (start == goal) throw InputError("start and goal must differ");
  if (!(opts.tau > 1.0)) throw InputError("tau must exceed 1");

  int max_steps = opts.max_steps;
  if (max_steps <= 0) max_steps = grid.traversable_count() * 11;

  Network net(delays, opts.beta);
  net.inject(start);

  const int goal_idx = grid.index(goal);
  for (int t = 0; t < max_steps; ++t) {
    std::vector<NodeId> fired = net.step(t);
    bool goal_spiked = false;
    for (NodeId n : fired)
      if (grid.index(n) == goal_idx) goal_spiked = true;
    if (goal_spiked) {
      std::vector<std::int32_t> times(grid.cell_count());
      std::vector<std::int32_t> parents(grid.cell_count());
      for (int idx = 0; idx < grid.cell_count(); ++idx) {
        NodeId n = grid.node(idx);
        auto st = grid.traversable(n) ? net.spike_time(n) : std::nullopt;
        times[idx] = st ? *st : -1;
        auto p = grid.traversable(n) ? net.parent(n) : std::nullopt;
        parents[idx] = p ? grid.index(*p) : -1;
      }
      return WaveResult(grid, start, goal, t + 1, opts.tau, std::move(times),
                        std::move(parents));
    }
    if (net.extinguished())
      throw UnreachableError("wave extinguished before reaching the goal");
  }
  throw UnreachableError("goal not reached within the step budget");
}

WaveResult propagate(const DelayField& delays, NodeId start, NodeId goal,
                     PropagateOptions opts) {
  QuantizedDelayField q(delays);
  return propagate(q, start, goal, opts);
}

Path extract_path(const WaveResult& wave) {
  if (!wave.spike_time(wave.goal()))
    throw std::logic_error("wave result does not contain the goal");
  Path path;
  std::unordered_set<int> seen;
  NodeId n = wave.goal();
  while (true) {
    if (!seen.insert(wave.grid().index(n)).second)
      throw std::logic_error("cycle in spike parent chain");
    path.push_back(n);
    if (n == wave.start()) break;
    auto p = wave.parent(n);
    if (!p) throw std::logic_error("broken spike parent chain");
    n = *p;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace swplan
