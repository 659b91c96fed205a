#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "swplan/eprop.hpp"
#include "swplan/lattice.hpp"
#include "swplan/rng.hpp"

namespace swplan {

enum class Terrain : char { Grass = 'G', Pavement = 'P', Dirt = 'D' };

/// Gaussian sensor noise per sensed layer (raw units).
struct LayerNoise {
  double current = 0.08;   // amps
  double obstacle = 0.03;  // fraction
  double slope = 0.012;    // radians

  bool operator==(const LayerNoise&) const = default;
};

/// Parameters of the per-segment observation model.
struct SegmentModel {
  double current_base_grass = 1.05;   // amps
  double current_base_pavement = 0.95;
  double current_base_dirt = 1.00;
  double boundary_surcharge = 0.4;    // added when crossing terrain types
  double traffic_surge_max = 0.5;     // obstacle bump when traffic triggers
  double p_fail_base = 0.0;
  double p_fail_intraversable = 0.95;

  bool operator==(const SegmentModel&) const = default;
};

/// Ground truth for the simulated park: terrain classes, a height field,
/// static obstacles, foot-traffic probabilities and intraversable cells.
/// Intraversable cells stay in the planning grid; planners learn to avoid
/// them through failed traversals, they are never masked out.
class EnvironmentModel {
 public:
  EnvironmentModel(GridSpec grid, std::vector<Terrain> terrain,
                   std::vector<double> height_m,
                   std::vector<double> obstacle_strength,
                   std::vector<double> foot_traffic,
                   std::vector<std::uint8_t> intraversable, LayerNoise noise,
                   SegmentModel segment_model, std::uint64_t seed);

  const GridSpec& grid() const { return grid_; }
  Terrain terrain(NodeId n) const { return terrain_[grid_.index(n)]; }
  double height_m(NodeId n) const { return height_m_[grid_.index(n)]; }
  double obstacle_strength(NodeId n) const {
    return obstacle_strength_[grid_.index(n)];
  }
  double foot_traffic(NodeId n) const { return foot_traffic_[grid_.index(n)]; }
  bool intraversable(NodeId n) const {
    return intraversable_[grid_.index(n)] != 0;
  }
  const LayerNoise& noise() const { return noise_; }
  const SegmentModel& segment_model() const { return segment_model_; }
  std::uint64_t seed() const { return seed_; }

  double current_base(Terrain t) const;
  /// Noise-free expectation of one raw reading for the segment from->to.
  double mean_raw(CostLayer layer, NodeId from, NodeId to) const;

  /// Raise the static obstacle strength of one cell (adaptation scenarios).
  void place_obstacle(NodeId n, double strength = 1.0);

  const std::vector<Terrain>& terrain_cells() const { return terrain_; }
  const std::vector<double>& height_cells() const { return height_m_; }
  const std::vector<double>& obstacle_cells() const {
    return obstacle_strength_;
  }
  const std::vector<double>& traffic_cells() const { return foot_traffic_; }
  const std::vector<std::uint8_t>& intraversable_cells() const {
    return intraversable_;
  }

  bool operator==(const EnvironmentModel&) const = default;

 private:
  GridSpec grid_;
  std::vector<Terrain> terrain_;
  std::vector<double> height_m_;
  std::vector<double> obstacle_strength_;
  std::vector<double> foot_traffic_;
  std::vector<std::uint8_t> intraversable_;
  LayerNoise noise_;
  SegmentModel segment_model_;
  std::uint64_t seed_;
};

/// Knobs for the procedural park generator.
struct ParkLayout {
  int width = 17;
  int height = 17;
  double spacing_m = 5.1;
  int min_trees = 8;
  int max_trees = 15;
  int min_blocked = 2;  // intraversable cells
  int max_blocked = 4;
  double hill_amplitude_m = 6.0;
  double undulation_amplitude_m = 0.35;
};

/// Deterministic park model for a seed: a smooth hill making the
/// bottom-right quadrant steep, one paved and one dirt road crossing the
/// grid, tree/bench cells (partly in a row), foot traffic along the roads
/// and a few intraversable cells.
EnvironmentModel build_park_env(std::uint64_t seed, ParkLayout layout = {});

/// One sampled traversal of a segment: raw readings per sensed layer
/// (indexed by CostLayer) and whether the move succeeded.
struct SegmentSample {
  std::array<double, 3> raw_by_layer{};
  bool success = true;
};

SegmentSample sample_segment(const EnvironmentModel& env, NodeId from,
                             NodeId to, Rng& rng);

/// Walk a planned path segment by segment, stopping at the first failure.
TraversalRecord execute_path(const EnvironmentModel& env, const Path& path,
                             Rng& rng);

struct LevyParams {
  double alpha = 1.5;        // Pareto tail exponent
  double scale_cells = 1.0;  // minimum step
  int max_retries = 32;
};

/// Pareto step length: scale / U^(1/alpha), clamped to `cap`.
double levy_step_length(Rng& rng, const LevyParams& params, double cap);

/// Heavy-tailed exploration goal: a Pareto step length at a uniform angle
/// from `current`, snapped to the nearest traversable cell distinct from
/// it. Falls back to the nearest distinct traversable cell after
/// `max_retries` failed draws.
NodeId levy_goal(const GridSpec& grid, NodeId current, Rng& rng,
                 LevyParams params = {});

struct LayerCalibration {
  NormalizationParams params;
  double mean = 0.0;
  double sigma = 0.0;
  bool widened = false;  // sigma was 0; bounds opened by a fixed epsilon
};

struct CalibrationResult {
  LayerCalibration current;
  LayerCalibration obstacle;
  LayerCalibration slope;

  const LayerCalibration& by(CostLayer l) const;
  /// Install the bounds into a layer set.
  void apply(CostLayerSet& layers) const;
};

/// Bounds at mean +/- 2 sigma (population sigma) of the samples. A zero
/// sigma widens by a fixed epsilon and sets `widened`.
LayerCalibration bounds_from_samples(const std::vector<double>& samples);

/// Sample n random adjacent segments and derive per-layer bounds.
/// Requires n >= 30.
CalibrationResult calibrate(const EnvironmentModel& env, int n_segments,
                            Rng& rng);

// Environment file format (versioned structured text); writing the result
// of a load reproduces the input byte for byte.
std::string environment_to_string(const EnvironmentModel& env);
EnvironmentModel parse_environment(std::string_view text);
void save_environment(const EnvironmentModel& env,
                      const std::filesystem::path& p);
EnvironmentModel load_environment(const std::filesystem::path& p);

}  // namespace swplan
