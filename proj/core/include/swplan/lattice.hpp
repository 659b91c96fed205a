#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "swplan/errors.hpp"

namespace swplan {

// ---------------------------------------------------------------------------
// Directions
// ---------------------------------------------------------------------------

/// The eight lattice directions in their fixed enumeration order. This order
/// is load-bearing: it defines deterministic tie-breaking in every planner
/// and the record order of the costmap file format.
enum class Direction : int { E = 0, NE, N, NW, W, SW, S, SE };

inline constexpr int kDirectionCount = 8;

struct Offset {
  int drow = 0;
  int dcol = 0;
};

constexpr Offset direction_offset(Direction d) {
  constexpr std::array<Offset, kDirectionCount> kOffsets{{
      {0, 1},    // E
      {-1, 1},   // NE
      {-1, 0},   // N
      {-1, -1},  // NW
      {0, -1},   // W
      {1, -1},   // SW
      {1, 0},    // S
      {1, 1},    // SE
  }};
  return kOffsets[static_cast<int>(d)];
}

constexpr Direction opposite(Direction d) {
  return static_cast<Direction>((static_cast<int>(d) + 4) % kDirectionCount);
}

/// Ordinal (diagonal) directions have odd enum index.
constexpr bool is_ordinal(Direction d) { return static_cast<int>(d) % 2 == 1; }

std::string_view direction_name(Direction d);

constexpr std::array<Direction, kDirectionCount> all_directions() {
  return {Direction::E,  Direction::NE, Direction::N, Direction::NW,
          Direction::W,  Direction::SW, Direction::S, Direction::SE};
}

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

struct NodeId {
  int row = 0;
  int col = 0;
  auto operator<=>(const NodeId&) const = default;
};

/// Waypoint lattice: dimensions, physical spacing and the traversability
/// mask. Masked-out cells have no nodes and no edges.
class GridSpec {
 public:
  /// An empty mask means every cell is traversable.
  GridSpec(int width, int height, double spacing_m,
           std::vector<std::uint8_t> traversable = {});

  int width() const { return width_; }
  int height() const { return height_; }
  double spacing_m() const { return spacing_m_; }
  int cell_count() const { return width_ * height_; }
  int traversable_count() const { return traversable_count_; }

  bool in_bounds(NodeId n) const {
    return n.row >= 0 && n.row < height_ && n.col >= 0 && n.col < width_;
  }
  bool traversable(NodeId n) const {
    return in_bounds(n) && traversable_[index(n)] != 0;
  }
  int index(NodeId n) const { return n.row * width_ + n.col; }
  NodeId node(int index) const { return {index / width_, index % width_}; }

  const std::vector<std::uint8_t>& traversable_mask() const {
    return traversable_;
  }

  /// Throws InputError unless the node is an in-bounds traversable cell.
  void require_node(NodeId n, std::string_view what) const;

  bool operator==(const GridSpec&) const = default;

 private:
  int width_;
  int height_;
  double spacing_m_;
  std::vector<std::uint8_t> traversable_;
  int traversable_count_;
};

int chebyshev(NodeId a, NodeId b);
double euclid_cells(NodeId a, NodeId b);

/// All adjacent in-bounds traversable cells of `node`, in the fixed
/// Direction enumeration order. The node itself must be in bounds.
std::vector<std::pair<Direction, NodeId>> neighbors(const GridSpec& grid,
                                                    NodeId node);

// ---------------------------------------------------------------------------
// Delay fields
// ---------------------------------------------------------------------------

inline constexpr double kMinDelay = 1.0;
inline constexpr double kMaxDelay = 10.0;

/// Round-half-up, the integer rounding rule used everywhere in this project.
inline int round_half_up(double v) {
  return static_cast<int>(std::floor(v + 0.5));
}

/// Map a continuous delay in [1,10] to the integer countdown used during
/// wave propagation. Throws InputError outside the valid range.
int quantize_delay(double value);

/// One continuous delay value per directed edge. The value stored at
/// (target, d) is the delay on the edge that delivers a spike *into*
/// `target` from the neighbor in direction d; it carries the cost of
/// arriving at `target`. Edges exist only between adjacent traversable
/// cells. All values stay in [1,10].
class DelayField {
 public:
  explicit DelayField(GridSpec grid, double initial = kMinDelay);

  const GridSpec& grid() const { return grid_; }

  bool has_edge(NodeId target, Direction toward_source) const;
  double at(NodeId target, Direction toward_source) const;
  void set(NodeId target, Direction toward_source, double delay);

  std::size_t edge_count() const { return edge_count_; }

  /// Visit every directed edge in canonical order: targets row-major,
  /// directions in enumeration order.
  template <typename F>
  void for_each_edge(F&& fn) const {
    for (int idx = 0; idx < grid_.cell_count(); ++idx) {
      NodeId target = grid_.node(idx);
      if (!grid_.traversable(target)) continue;
      for (Direction d : all_directions()) {
        if (!has_edge(target, d)) continue;
        fn(target, d, values_[slot(idx, d)]);
      }
    }
  }

  // Unchecked access for hot loops; callers must know the edge exists.
  double value_at(int target_index, int dir) const {
    return values_[static_cast<std::size_t>(target_index) * kDirectionCount +
                   dir];
  }
  void set_value_at(int target_index, int dir, double v) {
    values_[static_cast<std::size_t>(target_index) * kDirectionCount + dir] =
        v;
  }

  bool operator==(const DelayField&) const = default;

 private:
  static std::size_t slot(int target_index, Direction d) {
    return static_cast<std::size_t>(target_index) * kDirectionCount +
           static_cast<int>(d);
  }

  GridSpec grid_;
  std::vector<double> values_;  // cell_count * 8, row-major by target
  std::size_t edge_count_;
};

/// Integer countdown view of a DelayField, built once per propagation or
/// planning call. Entries for non-edges are 0.
class QuantizedDelayField {
 public:
  explicit QuantizedDelayField(const DelayField& field);

  const GridSpec& grid() const { return *grid_; }
  bool has_edge(int target_index, int dir) const {
    return values_[slot(target_index, dir)] != 0;
  }
  int at(int target_index, int dir) const {
    return values_[slot(target_index, dir)];
  }

 private:
  static std::size_t slot(int target_index, int dir) {
    return static_cast<std::size_t>(target_index) * kDirectionCount + dir;
  }

  const GridSpec* grid_;  // points into the source field; keep it alive
  std::vector<std::int8_t> values_;
};

// ---------------------------------------------------------------------------
// Cost layers
// ---------------------------------------------------------------------------

/// Raw-sensor-unit bounds used to map observations onto [1,10].
struct NormalizationParams {
  double lower = 0.0;
  double upper = 1.0;
  bool operator==(const NormalizationParams&) const = default;
};

enum class CostLayer : int { Current = 0, Obstacle, Slope, Intraversable };

inline constexpr int kLayerCount = 4;
inline constexpr std::array<CostLayer, kLayerCount> kAllLayers{
    CostLayer::Current, CostLayer::Obstacle, CostLayer::Slope,
    CostLayer::Intraversable};
/// The three layers fed by sensor observations (everything but
/// intraversable, which is driven by traversal failures).
inline constexpr std::array<CostLayer, 3> kSensedLayers{
    CostLayer::Current, CostLayer::Obstacle, CostLayer::Slope};

std::string_view layer_name(CostLayer layer);
std::optional<CostLayer> layer_from_name(std::string_view name);

/// The four per-cost delay fields plus the normalization bounds for the
/// sensed layers. All fields share one GridSpec.
class CostLayerSet {
 public:
  explicit CostLayerSet(const GridSpec& grid);

  const GridSpec& grid() const { return current_.grid(); }

  DelayField& layer(CostLayer l);
  const DelayField& layer(CostLayer l) const;

  const std::optional<NormalizationParams>& params(CostLayer l) const;
  void set_params(CostLayer l, NormalizationParams p);

  bool operator==(const CostLayerSet&) const = default;

 private:
  DelayField current_;
  DelayField obstacle_;
  DelayField slope_;
  DelayField intraversable_;
  std::array<std::optional<NormalizationParams>, 3> sensed_params_;
};

/// Sum the selected layers per edge, then rescale affinely so the cheapest
/// edge maps to 1 and the dearest to 10. A uniform sum collapses to all 1s.
/// Duplicate names in the selection are ignored; an empty selection is an
/// input error.
DelayField combine_layers(const CostLayerSet& layers,
                          const std::vector<CostLayer>& selection);

}  // namespace swplan
