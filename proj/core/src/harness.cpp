#include "swplan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "swplan/costmap_io.hpp"
#include "swplan/stats.hpp"
#include "swplan/text_util.hpp"

namespace swplan {

namespace {

// Tags for deriving independent RNG streams from the master seed.
enum : std::uint64_t {
  kSeedCalibration = 0x11,
  kSeedLevy = 0x12,
  kSeedExecution = 0x13,
  kSeedAdaptation = 0x14,
  kSeedSamplePairs = 0x15,
  kSeedRrt = 0x16,
  kSeedSampledExec = 0x17,
};

std::string node_str(NodeId n) {
  return std::to_string(n.row) + ":" + std::to_string(n.col);
}

NodeId parse_node(std::string_view s, std::string_view what) {
  const auto parts = split(s, ':');
  if (parts.size() != 2)
    throw InputError("invalid node '" + std::string(s) + "' for " +
                     std::string(what));
  return {parse_int(parts[0], what), parse_int(parts[1], what)};
}

/// Run fn(i) for i in [0, n) across a small worker pool. Each index writes
/// only its own output slot, so scheduling cannot change results.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 2;
  workers = std::min<unsigned>(workers, 8);
  if (n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  int line_no = 0;
  for (std::string_view raw_line : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InputError("config line " + std::to_string(line_no) +
                       ": expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "env_seed") config.env_seed = parse_u64(value, key);
    else if (key == "trials") config.trials = parse_int(value, key);
    else if (key == "delta") config.delta = parse_double(value, key);
    else if (key == "tau") config.tau = parse_double(value, key);
    else if (key == "beta") config.beta = parse_double(value, key);
    else if (key == "layers") {
      config.layers.clear();
      for (std::string_view name : split(value, ',')) {
        auto layer = layer_from_name(trim(name));
        if (!layer)
          throw InputError("unknown layer '" + std::string(trim(name)) + "'");
        config.layers.push_back(*layer);
      }
    } else if (key == "min_separation")
      config.min_separation = parse_int(value, key);
    else if (key == "sampled_paths")
      config.sampled_paths = parse_int(value, key);
    else if (key == "rrt_iterations")
      config.rrt_iterations = parse_int(value, key);
    else if (key == "rrt_rewire_radius")
      config.rrt_rewire_radius = parse_double(value, key);
    else if (key == "rrt_goal_bias")
      config.rrt_goal_bias = parse_double(value, key);
    else if (key == "calibration_segments")
      config.calibration_segments = parse_int(value, key);
    else if (key == "seed") config.seed = parse_u64(value, key);
    else if (key == "out_dir") config.out_dir = std::string(value);
    else
      throw InputError("config line " + std::to_string(line_no) +
                       ": unknown key '" + std::string(key) + "'");
  }

  if (config.trials < 0) throw InputError("trials must be >= 0");
  if (!(config.delta > 0.0 && config.delta <= 1.0))
    throw InputError("delta must lie in (0,1]");
  if (!(config.tau > 1.0)) throw InputError("tau must exceed 1");
  if (config.layers.empty()) throw InputError("layer selection is empty");
  if (config.min_separation < 1)
    throw InputError("min_separation must be >= 1");
  if (config.sampled_paths < 1) throw InputError("sampled_paths must be >= 1");
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot open config file '" + p.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_string(const ExperimentConfig& c) {
  std::string layers;
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    if (i) layers += ',';
    layers += layer_name(c.layers[i]);
  }
  std::string out;
  out += "env_seed = " + std::to_string(c.env_seed) + "\n";
  out += "trials = " + std::to_string(c.trials) + "\n";
  out += "delta = " + fmt_double(c.delta) + "\n";
  out += "tau = " + fmt_double(c.tau) + "\n";
  out += "beta = " + fmt_double(c.beta) + "\n";
  out += "layers = " + layers + "\n";
  out += "min_separation = " + std::to_string(c.min_separation) + "\n";
  out += "sampled_paths = " + std::to_string(c.sampled_paths) + "\n";
  out += "rrt_iterations = " + std::to_string(c.rrt_iterations) + "\n";
  out += "rrt_rewire_radius = " + fmt_double(c.rrt_rewire_radius) + "\n";
  out += "rrt_goal_bias = " + fmt_double(c.rrt_goal_bias) + "\n";
  out += "calibration_segments = " + std::to_string(c.calibration_segments) +
         "\n";
  out += "seed = " + std::to_string(c.seed) + "\n";
  if (!c.out_dir.empty()) out += "out_dir = " + c.out_dir + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Learning loop
// ---------------------------------------------------------------------------

namespace {

NodeId first_traversable(const GridSpec& grid) {
  for (int idx = 0; idx < grid.cell_count(); ++idx)
    if (grid.traversable(grid.node(idx))) return grid.node(idx);
  throw InputError("grid has no traversable cell");
}

NodeId last_traversable(const GridSpec& grid) {
  for (int idx = grid.cell_count() - 1; idx >= 0; --idx)
    if (grid.traversable(grid.node(idx))) return grid.node(idx);
  throw InputError("grid has no traversable cell");
}

std::filesystem::path snapshot_name(const std::filesystem::path& dir,
                                    int trial) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "costmap_%04d.txt", trial);
  return dir / buf;
}

}  // namespace

LearningRun run_learning(const EnvironmentModel& env,
                         const ExperimentConfig& config,
                         const std::filesystem::path* snapshot_dir) {
  const GridSpec& grid = env.grid();

  Rng calib_rng = make_rng(derive_seed(config.seed, {kSeedCalibration}));
  Rng levy_rng = make_rng(derive_seed(config.seed, {kSeedLevy}));
  Rng exec_rng = make_rng(derive_seed(config.seed, {kSeedExecution}));

  LearningRun run{CostLayerSet(grid),
                  calibrate(env, config.calibration_segments, calib_rng),
                  {},
                  {}};
  run.calibration.apply(run.layers);

  if (snapshot_dir) std::filesystem::create_directories(*snapshot_dir);

  PropagateOptions opts{0, config.tau, config.beta};

  std::vector<CostLayerSet> snapshots;
  snapshots.reserve(config.trials);

  NodeId current = first_traversable(grid);
  for (int trial = 1; trial <= config.trials; ++trial) {
    TrialLog log;
    log.trial = trial;
    log.start = current;
    log.goal = levy_goal(grid, current, levy_rng);

    DelayField combined = combine_layers(run.layers, config.layers);
    try {
      WaveResult wave = propagate(combined, current, log.goal, opts);
      Path path = extract_path(wave);
      log.planned_hops = static_cast<int>(path.size()) - 1;

      TraversalRecord record = execute_path(env, path, exec_rng);
      log.reached_goal = record.reached_goal;

      for (const SegmentObservation& seg : record.segments) {
        TrialUpdateLog upd;
        upd.node = seg.to;
        if (!seg.success) {
          upd.failed = true;
          log.updates.push_back(upd);
          break;
        }
        upd.eligibility = *wave.eligibility(seg.to);
        for (CostLayer l : kSensedLayers)
          upd.m[static_cast<int>(l)] =
              normalize_cost(seg.raw_by_layer[static_cast<int>(l)],
                             *run.layers.params(l));
        log.updates.push_back(upd);
      }

      apply_traversal_update(run.layers, record, wave, config.delta);

      if (record.reached_goal) {
        current = log.goal;
      } else if (!record.segments.empty()) {
        // The robot returns to the waypoint before the failed segment.
        current = record.segments.back().from;
      }
    } catch (const UnreachableError&) {
      log.skipped = true;
    }

    run.trials.push_back(std::move(log));
    snapshots.push_back(run.layers);
    if (snapshot_dir)
      save_costmap(run.layers, snapshot_name(*snapshot_dir, trial));
  }

  // MSE of every snapshot against the final learned state, averaged over
  // the four layers.
  run.mse.reserve(snapshots.size());
  for (const CostLayerSet& snap : snapshots) {
    double total = 0.0;
    for (CostLayer l : kAllLayers)
      total += costmap_mse(snap.layer(l), run.layers.layer(l));
    run.mse.push_back(total / kLayerCount);
  }
  return run;
}

// ---------------------------------------------------------------------------
// Adaptation scenario
// ---------------------------------------------------------------------------

namespace {

std::vector<double> layer_delta(const CostLayerSet& before,
                                const CostLayerSet& after) {
  const GridSpec& grid = before.grid();
  std::vector<double> delta(
      static_cast<std::size_t>(grid.cell_count()) * kDirectionCount, 0.0);
  for (CostLayer l : kAllLayers) {
    before.layer(l).for_each_edge([&](NodeId target, Direction d, double v) {
      const std::size_t slot =
          static_cast<std::size_t>(grid.index(target)) * kDirectionCount +
          static_cast<int>(d);
      delta[slot] += std::abs(after.layer(l).at(target, d) - v);
    });
  }
  return delta;
}

}  // namespace

std::pair<NodeId, Direction> AdaptationResult::largest_change(
    int update) const {
  const auto& delta = delta_by_edge.at(update);
  if (delta.empty()) throw InputError("no delta field for this update");
  std::size_t best = 0;
  for (std::size_t i = 1; i < delta.size(); ++i)
    if (delta[i] > delta[best]) best = i;
  // The edge slot encodes (target node index, direction).
  const int node_index = static_cast<int>(best / kDirectionCount);
  const auto dir = static_cast<Direction>(best % kDirectionCount);
  return {NodeId{node_index / grid_width, node_index % grid_width}, dir};
}

AdaptationResult adaptation_scenario(const EnvironmentModel& env,
                                     CostLayerSet& layers, NodeId obstacle,
                                     const ExperimentConfig& config,
                                     std::optional<NodeId> start,
                                     std::optional<NodeId> goal) {
  const GridSpec& grid = layers.grid();
  const NodeId s = start.value_or(first_traversable(grid));
  const NodeId g = goal.value_or(last_traversable(grid));
  grid.require_node(obstacle, "obstacle cell");

  PropagateOptions opts{0, config.tau, config.beta};
  AdaptationResult result;
  result.obstacle = obstacle;

  WaveResult wave = propagate(combine_layers(layers, config.layers), s, g,
                              opts);
  result.paths[0] = extract_path(wave);

  const bool on_path =
      std::find(result.paths[0].begin() + 1, result.paths[0].end() - 1,
                obstacle) != result.paths[0].end() - 1;
  if (!on_path)
    throw InputError(
        "obstacle cell must lie strictly inside the initially planned path");

  EnvironmentModel changed = env;
  changed.place_obstacle(obstacle, 1.0);

  Rng rng = make_rng(derive_seed(config.seed, {kSeedAdaptation}));
  for (int update = 0; update < 2; ++update) {
    const CostLayerSet before = layers;
    TraversalRecord record = execute_path(changed, result.paths[update], rng);
    apply_traversal_update(layers, record, wave, config.delta);
    result.delta_by_edge[update] = layer_delta(before, layers);

    wave = propagate(combine_layers(layers, config.layers), s, g, opts);
    result.paths[update + 1] = extract_path(wave);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

std::string_view planner_name(Planner p) {
  constexpr std::array<std::string_view, 4> kNames{"swp", "astar", "rrt_star",
                                                   "naive"};
  return kNames[static_cast<int>(p)];
}

std::optional<Planner> planner_from_name(std::string_view name) {
  for (Planner p : kAllPlanners)
    if (planner_name(p) == name) return p;
  return std::nullopt;
}

std::vector<std::pair<NodeId, NodeId>> enumerate_pairs(const GridSpec& grid,
                                                       int min_separation) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int i = 0; i < grid.cell_count(); ++i) {
    NodeId a = grid.node(i);
    if (!grid.traversable(a)) continue;
    for (int j = 0; j < grid.cell_count(); ++j) {
      if (i == j) continue;
      NodeId b = grid.node(j);
      if (!grid.traversable(b)) continue;
      if (chebyshev(a, b) >= min_separation) pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

double welch_bonferroni(std::span<const double> samples_a,
                        std::span<const double> samples_b,
                        int m_comparisons) {
  if (m_comparisons < 1) throw InputError("m_comparisons must be >= 1");
  const stats::WelchResult r = stats::welch_t_test(samples_a, samples_b);
  return std::min(1.0, r.p * m_comparisons);
}

namespace {

struct MetricSamples {
  // One vector per metric in PlannerStats order.
  std::array<std::vector<double>, kMetricCount> by_metric;

  void add(const PathRecord& r) {
    by_metric[0].push_back(r.length_m);
    by_metric[1].push_back(r.cost_current);
    by_metric[2].push_back(r.cost_obstacle);
    by_metric[3].push_back(r.cost_slope);
    by_metric[4].push_back(r.cost_normalized);
  }
};

}  // namespace

ComparisonTable build_table(
    const std::vector<PathRecord>& paths,
    const std::vector<std::pair<Planner, int>>& exclusions) {
  std::array<MetricSamples, 4> samples;
  for (const PathRecord& r : paths)
    samples[static_cast<int>(r.planner)].add(r);

  const MetricSamples& swp = samples[static_cast<int>(Planner::Swp)];
  const int swp_n = static_cast<int>(swp.by_metric[0].size());

  ComparisonTable table;
  // Count the comparisons first; Bonferroni scales by how many are made.
  for (Planner p : {Planner::AStar, Planner::RrtStar, Planner::Naive}) {
    const auto n = samples[static_cast<int>(p)].by_metric[0].size();
    if (n >= 2 && swp_n >= 2) table.m_comparisons += kMetricCount;
  }

  for (Planner p : kAllPlanners) {
    const MetricSamples& own = samples[static_cast<int>(p)];
    PlannerStats row;
    row.planner = p;
    row.n = static_cast<int>(own.by_metric[0].size());
    for (const auto& [planner, count] : exclusions)
      if (planner == p) row.excluded = count;
    if (row.n > 0) {
      row.mean_length_m = stats::mean(own.by_metric[0]);
      row.mean_cost_current = stats::mean(own.by_metric[1]);
      row.mean_cost_obstacle = stats::mean(own.by_metric[2]);
      row.mean_cost_slope = stats::mean(own.by_metric[3]);
      row.mean_cost_normalized = stats::mean(own.by_metric[4]);
    }
    if (p != Planner::Swp && row.n >= 2 && swp_n >= 2 &&
        table.m_comparisons >= 1) {
      for (int metric = 0; metric < kMetricCount; ++metric)
        row.p_vs_swp[metric] = welch_bonferroni(
            own.by_metric[metric], swp.by_metric[metric], table.m_comparisons);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

struct PlanContext {
  const CostLayerSet* layers;
  const ExperimentConfig* config;
  DelayField combined;
  QuantizedDelayField qc;
  QuantizedDelayField qcur;
  QuantizedDelayField qobs;
  QuantizedDelayField qslo;

  PlanContext(const CostLayerSet& l, const ExperimentConfig& c)
      : layers(&l), config(&c), combined(combine_layers(l, c.layers)),
        qc(combined), qcur(l.layer(CostLayer::Current)),
        qobs(l.layer(CostLayer::Obstacle)), qslo(l.layer(CostLayer::Slope)) {}

  QuantizedLayerView view() const { return {&qc, &qcur, &qobs, &qslo}; }

  Path plan(Planner p, NodeId s, NodeId g) const {
    switch (p) {
      case Planner::Swp: {
        PropagateOptions opts{0, config->tau, config->beta};
        return extract_path(propagate(qc, s, g, opts));
      }
      case Planner::AStar:
        return astar_euclidean(qc, s, g);
      case Planner::RrtStar: {
        const std::uint64_t pair_seed = derive_seed(
            config->seed,
            {kSeedRrt, static_cast<std::uint64_t>(s.row),
             static_cast<std::uint64_t>(s.col),
             static_cast<std::uint64_t>(g.row),
             static_cast<std::uint64_t>(g.col)});
        return rrt_star(qc, s, g, config->rrt_params(pair_seed));
      }
      case Planner::Naive:
        return naive_path(combined.grid(), s, g);
    }
    throw InputError("unknown planner");
  }
};

EvaluationResult aggregate_evaluation(
    const std::vector<std::array<std::optional<PathRecord>, 4>>& slots) {
  EvaluationResult result;
  std::array<int, 4> excluded{};
  for (const auto& slot : slots) {
    for (Planner p : kAllPlanners) {
      const auto& rec = slot[static_cast<int>(p)];
      if (rec) result.paths.push_back(*rec);
      else ++excluded[static_cast<int>(p)];
    }
  }
  std::vector<std::pair<Planner, int>> exclusions;
  for (Planner p : kAllPlanners)
    exclusions.emplace_back(p, excluded[static_cast<int>(p)]);
  result.table = build_table(result.paths, exclusions);
  return result;
}

}  // namespace

EvaluationResult evaluate_exhaustive(const CostLayerSet& layers,
                                     const ExperimentConfig& config) {
  const GridSpec& grid = layers.grid();
  const PlanContext ctx(layers, config);
  const auto pairs = enumerate_pairs(grid, config.min_separation);

  std::vector<std::array<std::optional<PathRecord>, 4>> slots(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [s, g] = pairs[i];
    for (Planner p : kAllPlanners) {
      try {
        const Path path = ctx.plan(p, s, g);
        const PathMetrics m =
            path_metrics(ctx.view(), path, grid.spacing_m());
        slots[i][static_cast<int>(p)] =
            PathRecord{p, s, g, m.length_m, m.cost_current, m.cost_obstacle,
                       m.cost_slope, m.normalized_cost, m.hops};
      } catch (const UnreachableError&) {
        // excluded for this planner; counted in the table
      }
    }
  });
  return aggregate_evaluation(slots);
}

EvaluationResult evaluate_sampled(const EnvironmentModel& env,
                                  const CostLayerSet& layers,
                                  const ExperimentConfig& config) {
  const GridSpec& grid = layers.grid();
  const PlanContext ctx(layers, config);

  // Draw the evaluation pairs.
  std::vector<int> traversable_cells;
  for (int idx = 0; idx < grid.cell_count(); ++idx)
    if (grid.traversable(grid.node(idx))) traversable_cells.push_back(idx);
  Rng pair_rng = make_rng(derive_seed(config.seed, {kSeedSamplePairs}));
  std::uniform_int_distribution<std::size_t> pick(
      0, traversable_cells.size() - 1);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  int guard = 0;
  while (static_cast<int>(pairs.size()) < config.sampled_paths) {
    if (++guard > config.sampled_paths * 1000)
      throw InputError("cannot sample enough pairs at this separation");
    NodeId s = grid.node(traversable_cells[pick(pair_rng)]);
    NodeId g = grid.node(traversable_cells[pick(pair_rng)]);
    if (chebyshev(s, g) < config.min_separation) continue;
    pairs.emplace_back(s, g);
  }

  std::vector<std::array<std::optional<PathRecord>, 4>> slots(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [s, g] = pairs[i];
    for (Planner p : kAllPlanners) {
      try {
        const Path path = ctx.plan(p, s, g);
        Rng exec_rng = make_rng(derive_seed(
            config.seed, {kSeedSampledExec, i,
                          static_cast<std::uint64_t>(p)}));
        const TraversalRecord record = execute_path(env, path, exec_rng);
        if (!record.reached_goal) continue;  // excluded: traversal failed
        const PathMetrics m =
            path_metrics(ctx.view(), path, grid.spacing_m());
        PathRecord rec{p, s, g, m.length_m, 0.0, 0.0, 0.0, m.normalized_cost,
                       m.hops};
        // Observed raw costs, not map costs, for the sensed layers.
        for (const SegmentObservation& seg : record.segments) {
          rec.cost_current +=
              seg.raw_by_layer[static_cast<int>(CostLayer::Current)];
          rec.cost_obstacle +=
              seg.raw_by_layer[static_cast<int>(CostLayer::Obstacle)];
          rec.cost_slope +=
              seg.raw_by_layer[static_cast<int>(CostLayer::Slope)];
        }
        slots[i][static_cast<int>(p)] = rec;
      } catch (const UnreachableError&) {
        // excluded for this planner; counted in the table
      }
    }
  });
  return aggregate_evaluation(slots);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot open '" + p.string() + "' for writing");
  f << text;
  if (!f) throw InputError("failed writing '" + p.string() + "'");
}

}  // namespace

void write_paths_csv(const std::filesystem::path& p,
                     const std::vector<PathRecord>& paths) {
  std::string out =
      "planner,start,goal,length_m,cost_current,cost_obstacle,cost_slope,"
      "cost_normalized,hops\n";
  for (const PathRecord& r : paths) {
    out += std::string(planner_name(r.planner)) + ',' + node_str(r.start) +
           ',' + node_str(r.goal) + ',' + fmt_double(r.length_m) + ',' +
           fmt_double(r.cost_current) + ',' + fmt_double(r.cost_obstacle) +
           ',' + fmt_double(r.cost_slope) + ',' +
           fmt_double(r.cost_normalized) + ',' + std::to_string(r.hops) +
           '\n';
  }
  write_text_file(p, out);
}

std::vector<PathRecord> read_paths_csv(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot open paths file '" + p.string() + "'");
  std::string line;
  if (!std::getline(f, line) ||
      trim(line) !=
          "planner,start,goal,length_m,cost_current,cost_obstacle,cost_slope,"
          "cost_normalized,hops")
    throw InputError("unexpected paths.csv header");
  std::vector<PathRecord> out;
  while (std::getline(f, line)) {
    if (trim(line).empty()) continue;
    const auto cols = split(trim(line), ',');
    if (cols.size() != 9) throw InputError("malformed paths.csv row");
    auto planner = planner_from_name(cols[0]);
    if (!planner)
      throw InputError("unknown planner '" + std::string(cols[0]) + "'");
    PathRecord r;
    r.planner = *planner;
    r.start = parse_node(cols[1], "start");
    r.goal = parse_node(cols[2], "goal");
    r.length_m = parse_double(cols[3], "length_m");
    r.cost_current = parse_double(cols[4], "cost_current");
    r.cost_obstacle = parse_double(cols[5], "cost_obstacle");
    r.cost_slope = parse_double(cols[6], "cost_slope");
    r.cost_normalized = parse_double(cols[7], "cost_normalized");
    r.hops = parse_int(cols[8], "hops");
    out.push_back(r);
  }
  return out;
}

void write_table_csv(const std::filesystem::path& p,
                     const ComparisonTable& table) {
  std::string out =
      "planner,n,excluded,mean_length_m,mean_cost_current,mean_cost_obstacle,"
      "mean_cost_slope,mean_cost_normalized,p_length_m,p_cost_current,"
      "p_cost_obstacle,p_cost_slope,p_cost_normalized\n";
  for (const PlannerStats& row : table.rows) {
    out += std::string(planner_name(row.planner)) + ',' +
           std::to_string(row.n) + ',' + std::to_string(row.excluded) + ',' +
           fmt_double(row.mean_length_m) + ',' +
           fmt_double(row.mean_cost_current) + ',' +
           fmt_double(row.mean_cost_obstacle) + ',' +
           fmt_double(row.mean_cost_slope) + ',' +
           fmt_double(row.mean_cost_normalized);
    for (const auto& pv : row.p_vs_swp)
      out += ',' + (pv ? fmt_double(*pv) : std::string());
    out += '\n';
  }
  write_text_file(p, out);
}

void write_mse_csv(const std::filesystem::path& p,
                   const std::vector<double>& mse) {
  std::string out = "trial,mse\n";
  for (std::size_t i = 0; i < mse.size(); ++i)
    out += std::to_string(i + 1) + ',' + fmt_double(mse[i]) + '\n';
  write_text_file(p, out);
}

void write_trials_csv(const std::filesystem::path& p,
                      const std::vector<TrialLog>& trials) {
  std::string out =
      "trial,start,goal,skipped,reached_goal,planned_hops,updated_nodes\n";
  for (const TrialLog& t : trials) {
    out += std::to_string(t.trial) + ',' + node_str(t.start) + ',' +
           node_str(t.goal) + ',' + (t.skipped ? "1" : "0") + ',' +
           (t.reached_goal ? "1" : "0") + ',' +
           std::to_string(t.planned_hops) + ',' +
           std::to_string(t.updates.size()) + '\n';
  }
  write_text_file(p, out);
}

void write_cost_vs_minlength_csv(const std::filesystem::path& p,
                                 const std::vector<PathRecord>& paths) {
  int max_sep = 0;
  int min_sep = std::numeric_limits<int>::max();
  for (const PathRecord& r : paths) {
    const int sep = chebyshev(r.start, r.goal);
    max_sep = std::max(max_sep, sep);
    min_sep = std::min(min_sep, sep);
  }
  std::string out =
      "min_separation,planner,n,mean_cost_normalized,ci99_lo,ci99_hi\n";
  if (paths.empty()) {
    write_text_file(p, out);
    return;
  }
  constexpr double kZ99 = 2.5758293035489004;
  for (int sep = min_sep; sep <= max_sep; ++sep) {
    for (Planner planner : kAllPlanners) {
      std::vector<double> costs;
      for (const PathRecord& r : paths)
        if (r.planner == planner && chebyshev(r.start, r.goal) >= sep)
          costs.push_back(r.cost_normalized);
      if (costs.size() < 2) continue;
      const double m = stats::mean(costs);
      const double se = std::sqrt(stats::sample_variance(costs) /
                                  static_cast<double>(costs.size()));
      out += std::to_string(sep) + ',' + std::string(planner_name(planner)) +
             ',' + std::to_string(costs.size()) + ',' + fmt_double(m) + ',' +
             fmt_double(m - kZ99 * se) + ',' + fmt_double(m + kZ99 * se) +
             '\n';
    }
  }
  write_text_file(p, out);
}

}  // namespace swplan
