#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swplan/baselines.hpp"
#include "swplan/envsim.hpp"

namespace swplan {

/// Everything a full experiment needs. Defaults mirror the reference
/// deployment: 350 trials, learning rate 0.5, eligibility decay 25,
/// recovery floor -10, evaluation pairs at least 3 waypoints apart,
/// 25 sampled paths.
struct ExperimentConfig {
  std::uint64_t env_seed = 42;
  int trials = 350;
  double delta = 0.5;
  double tau = 25.0;
  double beta = -10.0;
  std::vector<CostLayer> layers{CostLayer::Current, CostLayer::Obstacle,
                                CostLayer::Slope, CostLayer::Intraversable};
  int min_separation = 3;
  int sampled_paths = 25;
  int rrt_iterations = 2000;
  double rrt_rewire_radius = 2.0;
  double rrt_goal_bias = 0.1;
  int calibration_segments = 200;
  std::uint64_t seed = 0;  // master seed for all run randomness
  std::string out_dir;

  RrtParams rrt_params(std::uint64_t pair_seed) const {
    return {rrt_iterations, rrt_rewire_radius, rrt_goal_bias, pair_seed};
  }
};

/// Line-oriented `key = value` config text. Unknown keys are input errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& p);
std::string config_to_string(const ExperimentConfig& config);

/// Per-node record of one learning update, kept so tests can replay the
/// update recursion independently.
struct TrialUpdateLog {
  NodeId node;
  double eligibility = 0.0;
  std::array<int, 3> m{};  // normalized observation per sensed layer
  bool failed = false;     // node was marked intraversable instead
};

struct TrialLog {
  int trial = 0;
  NodeId start;
  NodeId goal;
  bool skipped = false;  // goal unreachable on the current map
  bool reached_goal = false;
  int planned_hops = 0;
  std::vector<TrialUpdateLog> updates;
};

struct LearningRun {
  CostLayerSet layers;
  CalibrationResult calibration;
  std::vector<double> mse;  // per trial, against the final layer state
  std::vector<TrialLog> trials;
};

/// The full mapping loop: exploration goals from a Levy flight, wave
/// planning on the combined map, simulated traversal, eligibility-weighted
/// delay updates, one costmap snapshot per trial. The MSE trajectory is
/// computed afterwards against the final snapshot. When `snapshot_dir` is
/// given, every trial's costmap is persisted there as costmap_NNNN.txt.
LearningRun run_learning(const EnvironmentModel& env,
                         const ExperimentConfig& config,
                         const std::filesystem::path* snapshot_dir = nullptr);

struct AdaptationResult {
  NodeId obstacle;
  int grid_width = 0;
  std::array<Path, 3> paths;  // after zero, one and two updates
  /// Per-update absolute delay change, summed over layers, indexed by
  /// (node_index * 8 + direction).
  std::array<std::vector<double>, 2> delta_by_edge;

  /// Edge with the largest change after the given update (0 or 1).
  std::pair<NodeId, Direction> largest_change(int update) const;
};

/// Plan a fixed pair, drop a fresh obstacle onto the planned path, then
/// execute and learn twice. The obstacle must lie strictly inside the
/// initial path.
AdaptationResult adaptation_scenario(const EnvironmentModel& env,
                                     CostLayerSet& layers, NodeId obstacle,
                                     const ExperimentConfig& config,
                                     std::optional<NodeId> start = {},
                                     std::optional<NodeId> goal = {});

enum class Planner : int { Swp = 0, AStar, RrtStar, Naive };
inline constexpr std::array<Planner, 4> kAllPlanners{
    Planner::Swp, Planner::AStar, Planner::RrtStar, Planner::Naive};
std::string_view planner_name(Planner p);
std::optional<Planner> planner_from_name(std::string_view name);

/// One evaluated path; the unit of paths.csv.
struct PathRecord {
  Planner planner = Planner::Swp;
  NodeId start;
  NodeId goal;
  double length_m = 0.0;
  double cost_current = 0.0;
  double cost_obstacle = 0.0;
  double cost_slope = 0.0;
  double cost_normalized = 0.0;
  int hops = 0;
};

inline constexpr int kMetricCount = 5;  // length + three layers + normalized

struct PlannerStats {
  Planner planner = Planner::Swp;
  int n = 0;
  int excluded = 0;
  double mean_length_m = 0.0;
  double mean_cost_current = 0.0;
  double mean_cost_obstacle = 0.0;
  double mean_cost_slope = 0.0;
  double mean_cost_normalized = 0.0;
  // Bonferroni-adjusted Welch p-values vs the wave planner, one per metric
  // in the order above. Empty for the wave planner's own row.
  std::array<std::optional<double>, kMetricCount> p_vs_swp;
};

struct ComparisonTable {
  std::vector<PlannerStats> rows;
  int m_comparisons = 0;
};

struct EvaluationResult {
  std::vector<PathRecord> paths;
  ComparisonTable table;
};

/// Welch's t statistic, two-sided p from the t distribution, multiplied by
/// m_comparisons and clamped to 1.
double welch_bonferroni(std::span<const double> samples_a,
                        std::span<const double> samples_b, int m_comparisons);

/// All ordered traversable pairs with Chebyshev separation >= min_separation.
std::vector<std::pair<NodeId, NodeId>> enumerate_pairs(const GridSpec& grid,
                                                       int min_separation);

/// Plan every ordered pair (separation >= config.min_separation) with all
/// four planners on the combined learned map; costs are map-based.
/// A planner failing a pair is excluded for that planner and counted.
EvaluationResult evaluate_exhaustive(const CostLayerSet& layers,
                                     const ExperimentConfig& config);

/// Sample config.sampled_paths pairs, execute each planner's path in the
/// environment, and account observed raw costs (map-based normalized cost).
EvaluationResult evaluate_sampled(const EnvironmentModel& env,
                                  const CostLayerSet& layers,
                                  const ExperimentConfig& config);

/// Aggregate per-path records into the comparison table.
ComparisonTable build_table(const std::vector<PathRecord>& paths,
                            const std::vector<std::pair<Planner, int>>&
                                exclusions = {});

// CSV writers/readers. All output is deterministic for fixed inputs.
void write_paths_csv(const std::filesystem::path& p,
                     const std::vector<PathRecord>& paths);
std::vector<PathRecord> read_paths_csv(const std::filesystem::path& p);
void write_table_csv(const std::filesystem::path& p,
                     const ComparisonTable& table);
void write_mse_csv(const std::filesystem::path& p,
                   const std::vector<double>& mse);
void write_trials_csv(const std::filesystem::path& p,
                      const std::vector<TrialLog>& trials);
/// Mean normalized cost per planner over pairs with separation >= each
/// threshold, with 99% normal-approximation confidence bands.
void write_cost_vs_minlength_csv(const std::filesystem::path& p,
                                 const std::vector<PathRecord>& paths);

}  // namespace swplan
