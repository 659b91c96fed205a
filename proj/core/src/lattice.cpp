#include "swplan/lattice.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace swplan {

std::string_view direction_name(Direction d) {
  constexpr std::array<std::string_view, kDirectionCount> kNames{
      "E", "NE", "N", "NW", "W", "SW", "S", "SE"};
  return kNames[static_cast<int>(d)];
}

GridSpec::GridSpec(int width, int height, double spacing_m,
                   std::vector<std::uint8_t> traversable)
    : width_(width), height_(height), spacing_m_(spacing_m),
      traversable_(std::move(traversable)) {
  if (width_ < 2 || height_ < 2)
    throw InputError("grid must be at least 2x2");
  if (!(spacing_m_ > 0.0))
    throw InputError("grid spacing must be positive");
  if (traversable_.empty()) {
    traversable_.assign(static_cast<std::size_t>(cell_count()), 1);
  } else if (traversable_.size() != static_cast<std::size_t>(cell_count())) {
    throw InputError("traversable mask size does not match grid dimensions");
  }
  traversable_count_ = 0;
  for (std::uint8_t c : traversable_) {
    if (c != 0 && c != 1) throw InputError("traversable mask must be 0/1");
    traversable_count_ += c;
  }
  if (traversable_count_ == 0)
    throw InputError("grid needs at least one traversable cell");
}

void GridSpec::require_node(NodeId n, std::string_view what) const {
  if (!in_bounds(n))
    throw InputError(std::string(what) + " is out of bounds");
  if (!traversable_[index(n)])
    throw InputError(std::string(what) + " is not a traversable cell");
}

int chebyshev(NodeId a, NodeId b) {
  return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

double euclid_cells(NodeId a, NodeId b) {
  return std::hypot(static_cast<double>(a.row - b.row),
                    static_cast<double>(a.col - b.col));
}

std::vector<std::pair<Direction, NodeId>> neighbors(const GridSpec& grid,
                                                    NodeId node) {
  if (!grid.in_bounds(node)) throw InputError("node is out of bounds");
  std::vector<std::pair<Direction, NodeId>> out;
  out.reserve(kDirectionCount);
  for (Direction d : all_directions()) {
    Offset o = direction_offset(d);
    NodeId n{node.row + o.drow, node.col + o.dcol};
    if (grid.traversable(n)) out.emplace_back(d, n);
  }
  return out;
}

int quantize_delay(double value) {
  if (!(value >= kMinDelay && value <= kMaxDelay))
    throw InputError("delay outside [1,10] cannot be quantized");
  return round_half_up(value);
}

DelayField::DelayField(GridSpec grid, double initial)
    : grid_(std::move(grid)),
      values_(static_cast<std::size_t>(grid_.cell_count()) * kDirectionCount,
              initial),
      edge_count_(0) {
  if (!(initial >= kMinDelay && initial <= kMaxDelay))
    throw InputError("initial delay outside [1,10]");
  for (int idx = 0; idx < grid_.cell_count(); ++idx) {
    NodeId n = grid_.node(idx);
    if (!grid_.traversable(n)) continue;
    for (Direction d : all_directions())
      if (has_edge(n, d)) ++edge_count_;
  }
}

bool DelayField::has_edge(NodeId target, Direction toward_source) const {
  if (!grid_.traversable(target)) return false;
  Offset o = direction_offset(toward_source);
  return grid_.traversable({target.row + o.drow, target.col + o.dcol});
}

double DelayField::at(NodeId target, Direction toward_source) const {
  if (!has_edge(target, toward_source))
    throw InputError("no edge at requested (node, direction)");
  return values_[slot(grid_.index(target), toward_source)];
}

void DelayField::set(NodeId target, Direction toward_source, double delay) {
  if (!has_edge(target, toward_source))
    throw InputError("no edge at requested (node, direction)");
  if (!(delay >= kMinDelay && delay <= kMaxDelay))
    throw InputError("delay outside [1,10]");
  values_[slot(grid_.index(target), toward_source)] = delay;
}

QuantizedDelayField::QuantizedDelayField(const DelayField& field)
    : grid_(&field.grid()),
      values_(static_cast<std::size_t>(grid_->cell_count()) * kDirectionCount,
              0) {
  field.for_each_edge([&](NodeId target, Direction d, double v) {
    values_[slot(grid_->index(target), static_cast<int>(d))] =
        static_cast<std::int8_t>(quantize_delay(v));
  });
}

std::string_view layer_name(CostLayer layer) {
  constexpr std::array<std::string_view, kLayerCount> kNames{
      "current", "obstacle", "slope", "intraversable"};
  return kNames[static_cast<int>(layer)];
}

std::optional<CostLayer> layer_from_name(std::string_view name) {
  for (CostLayer l : kAllLayers)
    if (layer_name(l) == name) return l;
  return std::nullopt;
}

CostLayerSet::CostLayerSet(const GridSpec& grid)
    : current_(grid), obstacle_(grid), slope_(grid), intraversable_(grid) {}

DelayField& CostLayerSet::layer(CostLayer l) {
  switch (l) {
    case CostLayer::Current: return current_;
    case CostLayer::Obstacle: return obstacle_;
    case CostLayer::Slope: return slope_;
    case CostLayer::Intraversable: return intraversable_;
  }
  throw InputError("unknown cost layer");
}

const DelayField& CostLayerSet::layer(CostLayer l) const {
  return const_cast<CostLayerSet*>(this)->layer(l);
}

const std::optional<NormalizationParams>& CostLayerSet::params(
    CostLayer l) const {
  if (l == CostLayer::Intraversable)
    throw InputError("the intraversable layer has no normalization params");
  return sensed_params_[static_cast<int>(l)];
}

void CostLayerSet::set_params(CostLayer l, NormalizationParams p) {
  if (l == CostLayer::Intraversable)
    throw InputError("the intraversable layer has no normalization params");
  if (!(p.upper > p.lower))
    throw InputError("normalization upper bound must exceed lower bound");
  sensed_params_[static_cast<int>(l)] = p;
}

DelayField combine_layers(const CostLayerSet& layers,
                          const std::vector<CostLayer>& selection) {
  if (selection.empty())
    throw InputError("combine_layers needs a non-empty layer selection");
  std::array<bool, kLayerCount> selected{};
  for (CostLayer l : selection) selected[static_cast<int>(l)] = true;

  const GridSpec& grid = layers.grid();
  DelayField out(grid);

  // Per-edge sums of the selected layers, in canonical edge order.
  std::vector<double> sums;
  sums.reserve(out.edge_count());
  double s_min = std::numeric_limits<double>::infinity();
  double s_max = -std::numeric_limits<double>::infinity();
  out.for_each_edge([&](NodeId target, Direction d, double) {
    double s = 0.0;
    for (CostLayer l : kAllLayers)
      if (selected[static_cast<int>(l)]) s += layers.layer(l).at(target, d);
    sums.push_back(s);
    s_min = std::min(s_min, s);
    s_max = std::max(s_max, s);
  });

  // Uniform sums collapse to the cheapest map rather than inflating it.
  if (s_max == s_min) return out;  // freshly constructed: all 1s

  std::size_t k = 0;
  const double span = s_max - s_min;
  for (int idx = 0; idx < grid.cell_count(); ++idx) {
    NodeId target = grid.node(idx);
    if (!grid.traversable(target)) continue;
    for (Direction d : all_directions()) {
      if (!out.has_edge(target, d)) continue;
      double v = 1.0 + 9.0 * (sums[k++] - s_min) / span;
      out.set(target, d, std::clamp(v, kMinDelay, kMaxDelay));
    }
  }
  return out;
}

}  // namespace swplan
