#include "swplan/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "swplan/rng.hpp"

namespace swplan {

namespace {

constexpr int kNoNode = -1;

struct EdgeTo {
  int target;  // node index
  int weight;
};

// Successor edges of `from` in Direction order. The weight of moving to a
// neighbor is the delay into that neighbor from `from`.
template <typename F>
void for_each_successor(const QuantizedDelayField& delays, int from,
                        WeightMode mode, F&& fn) {
  const GridSpec& g = delays.grid();
  NodeId n = g.node(from);
  for (Direction d : all_directions()) {
    Offset o = direction_offset(d);
    NodeId succ{n.row + o.drow, n.col + o.dcol};
    if (!g.traversable(succ)) continue;
    const int tgt = g.index(succ);
    int w = delays.at(tgt, static_cast<int>(opposite(d)));
    if (mode == WeightMode::DPlus1) w += 1;
    fn(EdgeTo{tgt, w});
  }
}

Path trace_parents(const GridSpec& g, const std::vector<int>& parent,
                   int start_idx, int goal_idx) {
  Path path;
  for (int idx = goal_idx; idx != kNoNode; idx = parent[idx]) {
    path.push_back(g.node(idx));
    if (idx == start_idx) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

DijkstraResult dijkstra(const QuantizedDelayField& delays, NodeId start,
                        NodeId goal, WeightMode mode) {
  const GridSpec& g = delays.grid();
  g.require_node(start, "start node");
  g.require_node(goal, "goal node");

  const int n = g.cell_count();
  std::vector<int> dist(n, std::numeric_limits<int>::max());
  std::vector<int> parent(n, kNoNode);
  std::vector<char> done(n, 0);

  using QueueEntry = std::pair<int, int>;  // (dist, node index)
  std::priority_queue<QueueEntry, std::vector<QueueEntry>,
                      std::greater<QueueEntry>>
      open;

  const int start_idx = g.index(start);
  const int goal_idx = g.index(goal);
  dist[start_idx] = 0;
  open.push({0, start_idx});

  while (!open.empty()) {
    auto [du, u] = open.top();
    open.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == goal_idx)
      return {du, trace_parents(g, parent, start_idx, goal_idx)};
    for_each_successor(delays, u, mode, [&](EdgeTo e) {
      if (done[e.target]) return;
      const int nd = du + e.weight;
      if (nd < dist[e.target]) {
        dist[e.target] = nd;
        parent[e.target] = u;
        open.push({nd, e.target});
      }
    });
  }
  throw UnreachableError("no path between the given nodes");
}

DijkstraResult dijkstra(const DelayField& delays, NodeId start, NodeId goal,
                        WeightMode mode) {
  QuantizedDelayField q(delays);
  return dijkstra(q, start, goal, mode);
}

Path astar_euclidean(const QuantizedDelayField& delays, NodeId start,
                     NodeId goal) {
  const GridSpec& g = delays.grid();
  g.require_node(start, "start node");
  g.require_node(goal, "goal node");

  const int n = g.cell_count();
  std::vector<int> gscore(n, std::numeric_limits<int>::max());
  std::vector<int> parent(n, kNoNode);
  std::vector<char> closed(n, 0);

  // The heuristic is the straight-line distance in cell units.
  auto h = [&](int idx) { return euclid_cells(g.node(idx), goal); };

  using QueueEntry = std::pair<double, int>;  // (f, node index)
  std::priority_queue<QueueEntry, std::vector<QueueEntry>,
                      std::greater<QueueEntry>>
      open;

  const int start_idx = g.index(start);
  const int goal_idx = g.index(goal);
  gscore[start_idx] = 0;
  open.push({h(start_idx), start_idx});

  while (!open.empty()) {
    auto [f, u] = open.top();
    open.pop();
    if (closed[u]) continue;
    closed[u] = 1;
    // First goal expansion wins, even if a cheaper route is still open.
    if (u == goal_idx) return trace_parents(g, parent, start_idx, goal_idx);
    for_each_successor(delays, u, WeightMode::D, [&](EdgeTo e) {
      if (closed[e.target]) return;
      const int ng = gscore[u] + e.weight;
      if (ng < gscore[e.target]) {
        gscore[e.target] = ng;
        parent[e.target] = u;
        open.push({ng + h(e.target), e.target});
      }
    });
  }
  throw UnreachableError("no path between the given nodes");
}

Path astar_euclidean(const DelayField& delays, NodeId start, NodeId goal) {
  QuantizedDelayField q(delays);
  return astar_euclidean(q, start, goal);
}

namespace {

// Tree bookkeeping for the grid-constrained RRT*.
struct RrtTree {
  const QuantizedDelayField* delays;
  const GridSpec* grid;
  std::vector<int> cells;          // tree order -> node index
  std::vector<int> parent;         // tree order -> tree order (or -1)
  std::vector<int> cost;           // accumulated quantized delay from root
  std::vector<int> tree_index;     // node index -> tree order (or -1)
  std::vector<std::vector<int>> children;

  explicit RrtTree(const QuantizedDelayField& d, int root_cell)
      : delays(&d), grid(&d.grid()), tree_index(grid->cell_count(), kNoNode) {
    add(root_cell, kNoNode, 0);
  }

  int add(int cell, int parent_order, int c) {
    const int order = static_cast<int>(cells.size());
    cells.push_back(cell);
    parent.push_back(parent_order);
    cost.push_back(c);
    children.emplace_back();
    tree_index[cell] = order;
    if (parent_order != kNoNode) children[parent_order].push_back(order);
    return order;
  }

  int edge_weight(int from_cell, int to_cell) const {
    NodeId a = grid->node(from_cell);
    NodeId b = grid->node(to_cell);
    for (Direction d : all_directions()) {
      Offset o = direction_offset(d);
      if (b.row + o.drow == a.row && b.col + o.dcol == a.col)
        return delays->at(to_cell, static_cast<int>(d));
    }
    return -1;  // not lattice-adjacent
  }

  void reparent(int order, int new_parent, int new_cost) {
    const int old_parent = parent[order];
    if (old_parent != kNoNode) {
      auto& sib = children[old_parent];
      sib.erase(std::find(sib.begin(), sib.end(), order));
    }
    parent[order] = new_parent;
    children[new_parent].push_back(order);
    const int delta = new_cost - cost[order];
    // Push the improvement down the subtree.
    std::vector<int> stack{order};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      cost[cur] += delta;
      for (int ch : children[cur]) stack.push_back(ch);
    }
  }
};

}  // namespace

Path rrt_star(const QuantizedDelayField& delays, NodeId start, NodeId goal,
              const RrtParams& params) {
  const GridSpec& g = delays.grid();
  g.require_node(start, "start node");
  g.require_node(goal, "goal node");
  if (params.iterations <= 0) throw InputError("iterations must be positive");
  if (!(params.rewire_radius >= 1.0))
    throw InputError("rewire radius must be at least 1 cell");
  if (!(params.goal_bias >= 0.0 && params.goal_bias <= 1.0))
    throw InputError("goal bias must lie in [0,1]");

  std::vector<int> traversable_cells;
  for (int idx = 0; idx < g.cell_count(); ++idx)
    if (g.traversable(g.node(idx))) traversable_cells.push_back(idx);

  Rng rng = make_rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(
      0, traversable_cells.size() - 1);

  const int start_idx = g.index(start);
  const int goal_idx = g.index(goal);
  RrtTree tree(delays, start_idx);

  for (int it = 0; it < params.iterations; ++it) {
    const int sample =
        unit(rng) < params.goal_bias ? goal_idx : traversable_cells[pick(rng)];
    NodeId sample_node = g.node(sample);

    // Nearest tree node (Euclidean in cells; ties to the earliest insertion).
    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tree.cells.size(); ++i) {
      double dist = euclid_cells(g.node(tree.cells[i]), sample_node);
      if (dist < best) {
        best = dist;
        nearest = static_cast<int>(i);
      }
    }
    if (tree.cells[nearest] == sample) continue;

    // One lattice step from the nearest node toward the sample.
    NodeId from = g.node(tree.cells[nearest]);
    int new_cell = kNoNode;
    double step_best = std::numeric_limits<double>::infinity();
    for (Direction d : all_directions()) {
      Offset o = direction_offset(d);
      NodeId cand{from.row + o.drow, from.col + o.dcol};
      if (!g.traversable(cand)) continue;
      double dist = euclid_cells(cand, sample_node);
      if (dist < step_best) {
        step_best = dist;
        new_cell = g.index(cand);
      }
    }
    if (new_cell == kNoNode) continue;

    // Neighborhood: tree nodes lattice-adjacent to the new cell and within
    // the rewire radius.
    NodeId new_node = g.node(new_cell);
    std::vector<std::pair<int, int>> near;  // (tree order, edge weight)
    for (Direction d : all_directions()) {
      Offset o = direction_offset(d);
      NodeId cand{new_node.row + o.drow, new_node.col + o.dcol};
      if (!g.traversable(cand)) continue;
      if (euclid_cells(cand, new_node) > params.rewire_radius) continue;
      const int order = tree.tree_index[g.index(cand)];
      if (order == kNoNode) continue;
      near.emplace_back(order, delays.at(new_cell, static_cast<int>(d)));
    }
    if (near.empty()) continue;

    // Choose the cheapest parent among the neighborhood.
    int best_parent = kNoNode;
    int best_cost = std::numeric_limits<int>::max();
    for (auto [order, w] : near) {
      const int c = tree.cost[order] + w;
      if (c < best_cost) {
        best_cost = c;
        best_parent = order;
      }
    }

    int new_order = tree.tree_index[new_cell];
    if (new_order == kNoNode) {
      new_order = tree.add(new_cell, best_parent, best_cost);
    } else if (best_cost < tree.cost[new_order]) {
      tree.reparent(new_order, best_parent, best_cost);
    }

    // Rewire the neighborhood through the new node where that is cheaper.
    for (auto [order, _] : near) {
      if (order == tree.parent[new_order]) continue;
      const int w_back = tree.edge_weight(new_cell, tree.cells[order]);
      if (w_back < 0) continue;
      const int c = tree.cost[new_order] + w_back;
      if (c < tree.cost[order]) tree.reparent(order, new_order, c);
    }
  }

  const int goal_order = tree.tree_index[goal_idx];
  if (goal_order == kNoNode)
    throw UnreachableError("rrt* did not reach the goal within its budget");

  Path path;
  for (int order = goal_order; order != kNoNode; order = tree.parent[order])
    path.push_back(g.node(tree.cells[order]));
  std::reverse(path.begin(), path.end());
  return path;
}

Path rrt_star(const DelayField& delays, NodeId start, NodeId goal,
              const RrtParams& params) {
  QuantizedDelayField q(delays);
  return rrt_star(q, start, goal, params);
}

Path naive_path(const GridSpec& grid, NodeId start, NodeId goal) {
  grid.require_node(start, "start node");
  grid.require_node(goal, "goal node");

  Path path{start};
  NodeId cur = start;
  while (cur != goal) {
    NodeId next = cur;
    double best = euclid_cells(cur, goal);
    for (Direction d : all_directions()) {
      Offset o = direction_offset(d);
      NodeId cand{cur.row + o.drow, cur.col + o.dcol};
      if (!grid.traversable(cand)) continue;
      const double dist = euclid_cells(cand, goal);
      if (dist < best) {
        best = dist;
        next = cand;
      }
    }
    if (next == cur)
      throw UnreachableError("greedy walk trapped: no neighbor closer to goal");
    path.push_back(next);
    cur = next;
  }
  return path;
}

namespace {

int delay_into(const QuantizedDelayField& q, NodeId from, NodeId to) {
  const GridSpec& g = q.grid();
  for (Direction d : all_directions()) {
    Offset o = direction_offset(d);
    if (to.row + o.drow == from.row && to.col + o.dcol == from.col)
      return q.at(g.index(to), static_cast<int>(d));
  }
  throw InputError("path contains non-adjacent consecutive nodes");
}

}  // namespace

PathMetrics path_metrics(const QuantizedLayerView& view, const Path& path,
                         double spacing_m) {
  if (path.size() < 2) throw InputError("path needs at least two nodes");
  const GridSpec& g = view.combined->grid();
  for (NodeId n : path) g.require_node(n, "path node");

  PathMetrics m;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    NodeId a = path[i];
    NodeId b = path[i + 1];
    const bool ordinal =
        a.row != b.row && a.col != b.col;  // both axes change on a diagonal
    if (chebyshev(a, b) != 1)
      throw InputError("path contains non-adjacent consecutive nodes");
    m.hops += 1;
    m.length_m += ordinal ? spacing_m * std::numbers::sqrt2 : spacing_m;
    m.normalized_cost += delay_into(*view.combined, a, b);
    m.cost_current += delay_into(*view.current, a, b);
    m.cost_obstacle += delay_into(*view.obstacle, a, b);
    m.cost_slope += delay_into(*view.slope, a, b);
  }
  return m;
}

PathMetrics path_metrics(const DelayField& combined, const CostLayerSet& layers,
                         const Path& path, double spacing_m) {
  QuantizedDelayField qc(combined);
  QuantizedDelayField qcur(layers.layer(CostLayer::Current));
  QuantizedDelayField qobs(layers.layer(CostLayer::Obstacle));
  QuantizedDelayField qslo(layers.layer(CostLayer::Slope));
  return path_metrics(QuantizedLayerView{&qc, &qcur, &qobs, &qslo}, path,
                      spacing_m);
}

}  // namespace swplan
