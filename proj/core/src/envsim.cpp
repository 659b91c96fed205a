#include "swplan/envsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "swplan/text_util.hpp"

namespace swplan {

EnvironmentModel::EnvironmentModel(
    GridSpec grid, std::vector<Terrain> terrain, std::vector<double> height_m,
    std::vector<double> obstacle_strength, std::vector<double> foot_traffic,
    std::vector<std::uint8_t> intraversable, LayerNoise noise,
    SegmentModel segment_model, std::uint64_t seed)
    : grid_(std::move(grid)), terrain_(std::move(terrain)),
      height_m_(std::move(height_m)),
      obstacle_strength_(std::move(obstacle_strength)),
      foot_traffic_(std::move(foot_traffic)),
      intraversable_(std::move(intraversable)), noise_(noise),
      segment_model_(segment_model), seed_(seed) {
  const auto n = static_cast<std::size_t>(grid_.cell_count());
  if (terrain_.size() != n || height_m_.size() != n ||
      obstacle_strength_.size() != n || foot_traffic_.size() != n ||
      intraversable_.size() != n)
    throw InputError("environment field sizes do not match the grid");
  for (double v : obstacle_strength_)
    if (!(v >= 0.0 && v <= 1.0))
      throw InputError("obstacle strength outside [0,1]");
  for (double v : foot_traffic_)
    if (!(v >= 0.0 && v <= 1.0))
      throw InputError("foot traffic probability outside [0,1]");
  for (double v : height_m_)
    if (!std::isfinite(v)) throw InputError("height must be finite");
}

double EnvironmentModel::current_base(Terrain t) const {
  switch (t) {
    case Terrain::Grass: return segment_model_.current_base_grass;
    case Terrain::Pavement: return segment_model_.current_base_pavement;
    case Terrain::Dirt: return segment_model_.current_base_dirt;
  }
  throw InputError("unknown terrain");
}

double EnvironmentModel::mean_raw(CostLayer layer, NodeId from,
                                  NodeId to) const {
  grid_.require_node(from, "segment source");
  grid_.require_node(to, "segment destination");
  if (chebyshev(from, to) != 1)
    throw InputError("segment nodes must be adjacent");
  const double edge_len =
      grid_.spacing_m() *
      (from.row != to.row && from.col != to.col ? std::numbers::sqrt2 : 1.0);
  switch (layer) {
    case CostLayer::Current:
      return current_base(terrain(to)) +
             (terrain(from) != terrain(to) ? segment_model_.boundary_surcharge
                                           : 0.0);
    case CostLayer::Obstacle:
      // Bernoulli traffic surge of U(0, max) has mean p * max/2.
      return std::min(1.0, obstacle_strength(to) +
                               foot_traffic(to) *
                                   segment_model_.traffic_surge_max * 0.5);
    case CostLayer::Slope:
      return std::abs(height_m(to) - height_m(from)) / edge_len;
    case CostLayer::Intraversable:
      break;
  }
  throw InputError("no raw observation model for this layer");
}

void EnvironmentModel::place_obstacle(NodeId n, double strength) {
  grid_.require_node(n, "obstacle cell");
  if (!(strength >= 0.0 && strength <= 1.0))
    throw InputError("obstacle strength outside [0,1]");
  obstacle_strength_[grid_.index(n)] = strength;
}

namespace {

double smooth_undulation(double row, double col, double amplitude,
                         double phase_r, double phase_c) {
  return amplitude * (std::sin(row * 0.7 + phase_r) *
                      std::cos(col * 0.55 + phase_c));
}

}  // namespace

EnvironmentModel build_park_env(std::uint64_t seed, ParkLayout layout) {
  if (layout.min_trees < 0 || layout.max_trees < layout.min_trees)
    throw InputError("invalid tree count bounds");
  if (layout.min_blocked < 0 || layout.max_blocked < layout.min_blocked)
    throw InputError("invalid intraversable count bounds");

  GridSpec grid(layout.width, layout.height, layout.spacing_m);
  const int cells = grid.cell_count();
  const int w = layout.width;
  const int h = layout.height;

  std::vector<Terrain> terrain(cells, Terrain::Grass);
  std::vector<double> height(cells, 0.0);
  std::vector<double> obstacle(cells, 0.0);
  std::vector<double> traffic(cells, 0.01);
  std::vector<std::uint8_t> blocked(cells, 0);

  // Independent streams per feature so one feature's draws never shift
  // another's layout.
  Rng terrain_rng = make_rng(derive_seed(seed, {1}));
  Rng height_rng = make_rng(derive_seed(seed, {2}));
  Rng tree_rng = make_rng(derive_seed(seed, {3}));
  Rng blocked_rng = make_rng(derive_seed(seed, {4}));

  // Roads: one paved column band, one dirt row band.
  std::uniform_int_distribution<int> pave_col_dist(w / 5, 2 * w / 5);
  std::uniform_int_distribution<int> dirt_row_dist(h / 2, 3 * h / 4);
  const int pave_col = pave_col_dist(terrain_rng);
  const int dirt_row = dirt_row_dist(terrain_rng);
  for (int r = 0; r < h; ++r) terrain[r * w + pave_col] = Terrain::Pavement;
  for (int c = 0; c < w; ++c)
    if (terrain[dirt_row * w + c] == Terrain::Grass)
      terrain[dirt_row * w + c] = Terrain::Dirt;

  // Height: gentle undulation plus one dominant hill in the bottom-right
  // quadrant.
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double phase_r = phase(height_rng);
  const double phase_c = phase(height_rng);
  const double hill_r = 0.70 * (h - 1) + 0.15 * (h - 1) *
                        std::uniform_real_distribution<double>(0, 1)(height_rng);
  const double hill_c = 0.70 * (w - 1) + 0.15 * (w - 1) *
                        std::uniform_real_distribution<double>(0, 1)(height_rng);
  const double hill_sigma = 0.18 * std::min(w - 1, h - 1);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double dr = r - hill_r;
      const double dc = c - hill_c;
      const double hill = layout.hill_amplitude_m *
                          std::exp(-(dr * dr + dc * dc) /
                                   (2.0 * hill_sigma * hill_sigma));
      height[r * w + c] =
          hill + smooth_undulation(r, c, layout.undulation_amplitude_m,
                                   phase_r, phase_c);
    }
  }

  // Trees and benches: a row of trees plus scattered singles.
  std::uniform_int_distribution<int> tree_count_dist(layout.min_trees,
                                                     layout.max_trees);
  const int n_trees = tree_count_dist(tree_rng);
  std::uniform_real_distribution<double> strength(0.85, 1.0);
  std::uniform_int_distribution<int> row_dist(1, h - 2);
  std::uniform_int_distribution<int> col_dist(1, w - 2);
  int placed = 0;
  const int row_len = std::min(n_trees / 3 + 1, w - 2);
  const int tree_row = row_dist(tree_rng);
  const int tree_col0 = std::uniform_int_distribution<int>(
      1, std::max(1, w - 1 - row_len))(tree_rng);
  for (int k = 0; k < row_len && placed < n_trees; ++k) {
    const int idx = tree_row * w + tree_col0 + k;
    if (obstacle[idx] == 0.0) {
      obstacle[idx] = strength(tree_rng);
      ++placed;
    }
  }
  while (placed < n_trees) {
    const int idx = row_dist(tree_rng) * w + col_dist(tree_rng);
    if (obstacle[idx] > 0.0) continue;
    obstacle[idx] = strength(tree_rng);
    ++placed;
  }

  // Foot traffic concentrates along the roads.
  for (int i = 0; i < cells; ++i) {
    if (terrain[i] == Terrain::Pavement) traffic[i] = 0.30;
    else if (terrain[i] == Terrain::Dirt) traffic[i] = 0.10;
  }

  // Intraversable cells: keep them off obstacles so the two failure modes
  // stay distinguishable in experiments.
  std::uniform_int_distribution<int> blocked_count_dist(layout.min_blocked,
                                                        layout.max_blocked);
  int n_blocked = blocked_count_dist(blocked_rng);
  while (n_blocked > 0) {
    const int idx = row_dist(blocked_rng) * w + col_dist(blocked_rng);
    if (blocked[idx] || obstacle[idx] > 0.0) continue;
    blocked[idx] = 1;
    --n_blocked;
  }

  return EnvironmentModel(std::move(grid), std::move(terrain),
                          std::move(height), std::move(obstacle),
                          std::move(traffic), std::move(blocked), LayerNoise{},
                          SegmentModel{}, seed);
}

SegmentSample sample_segment(const EnvironmentModel& env, NodeId from,
                             NodeId to, Rng& rng) {
  const SegmentModel& sm = env.segment_model();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SegmentSample out;
  const double mean_current = env.mean_raw(CostLayer::Current, from, to);
  out.raw_by_layer[static_cast<int>(CostLayer::Current)] =
      mean_current + env.noise().current * gauss(rng);

  double obstacle_raw = env.obstacle_strength(to);
  if (unit(rng) < env.foot_traffic(to))
    obstacle_raw += unit(rng) * sm.traffic_surge_max;
  obstacle_raw += env.noise().obstacle * gauss(rng);
  out.raw_by_layer[static_cast<int>(CostLayer::Obstacle)] =
      std::clamp(obstacle_raw, 0.0, 1.0);

  const double mean_slope = env.mean_raw(CostLayer::Slope, from, to);
  out.raw_by_layer[static_cast<int>(CostLayer::Slope)] =
      mean_slope + env.noise().slope * gauss(rng);

  const double p_fail =
      env.intraversable(to) ? sm.p_fail_intraversable : sm.p_fail_base;
  out.success = !(unit(rng) < p_fail);
  return out;
}

TraversalRecord execute_path(const EnvironmentModel& env, const Path& path,
                             Rng& rng) {
  if (path.size() < 2) throw InputError("path needs at least two nodes");
  TraversalRecord record;
  record.reached_goal = true;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    SegmentSample s = sample_segment(env, path[i], path[i + 1], rng);
    record.segments.push_back(
        {path[i], path[i + 1], s.raw_by_layer, s.success});
    if (!s.success) {
      record.reached_goal = false;
      break;
    }
  }
  return record;
}

double levy_step_length(Rng& rng, const LevyParams& params, double cap) {
  std::uniform_real_distribution<double> unit(
      std::numeric_limits<double>::min(), 1.0);
  const double u = unit(rng);
  const double len = params.scale_cells / std::pow(u, 1.0 / params.alpha);
  return std::min(len, cap);
}

NodeId levy_goal(const GridSpec& grid, NodeId current, Rng& rng,
                 LevyParams params) {
  grid.require_node(current, "current node");
  const double cap = std::hypot(static_cast<double>(grid.width() - 1),
                                static_cast<double>(grid.height() - 1));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    const double len = levy_step_length(rng, params, cap);
    const double theta = angle(rng);
    NodeId cand{
        std::clamp(round_half_up(current.row + len * std::sin(theta)), 0,
                   grid.height() - 1),
        std::clamp(round_half_up(current.col + len * std::cos(theta)), 0,
                   grid.width() - 1)};
    if (cand != current && grid.traversable(cand)) return cand;
  }

  // Fallback: nearest traversable cell distinct from `current`
  // (deterministic tie-break by row-major order).
  NodeId best{};
  double best_dist = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int idx = 0; idx < grid.cell_count(); ++idx) {
    NodeId n = grid.node(idx);
    if (n == current || !grid.traversable(n)) continue;
    const double d = euclid_cells(n, current);
    if (d < best_dist) {
      best_dist = d;
      best = n;
      found = true;
    }
  }
  if (!found) throw UnreachableError("no traversable goal candidate exists");
  return best;
}

const LayerCalibration& CalibrationResult::by(CostLayer l) const {
  switch (l) {
    case CostLayer::Current: return current;
    case CostLayer::Obstacle: return obstacle;
    case CostLayer::Slope: return slope;
    case CostLayer::Intraversable: break;
  }
  throw InputError("no calibration for this layer");
}

void CalibrationResult::apply(CostLayerSet& layers) const {
  for (CostLayer l : kSensedLayers) layers.set_params(l, by(l).params);
}

LayerCalibration bounds_from_samples(const std::vector<double>& samples) {
  if (samples.empty()) throw InputError("no calibration samples");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(samples.size());
  const double sigma = std::sqrt(var);

  LayerCalibration cal;
  cal.mean = mean;
  cal.sigma = sigma;
  if (sigma == 0.0) {
    constexpr double kEpsilon = 0.5;
    cal.widened = true;
    cal.params = {mean - kEpsilon, mean + kEpsilon};
  } else {
    cal.params = {mean - 2.0 * sigma, mean + 2.0 * sigma};
  }
  return cal;
}

CalibrationResult calibrate(const EnvironmentModel& env, int n_segments,
                            Rng& rng) {
  if (n_segments < 30)
    throw InputError("calibration needs at least 30 segments");
  const GridSpec& grid = env.grid();

  std::vector<int> traversable_cells;
  for (int idx = 0; idx < grid.cell_count(); ++idx)
    if (grid.traversable(grid.node(idx))) traversable_cells.push_back(idx);
  std::uniform_int_distribution<std::size_t> pick(
      0, traversable_cells.size() - 1);
  std::uniform_int_distribution<int> dir(0, kDirectionCount - 1);

  std::array<std::vector<double>, 3> samples;
  int collected = 0;
  while (collected < n_segments) {
    NodeId from = grid.node(traversable_cells[pick(rng)]);
    Offset o = direction_offset(static_cast<Direction>(dir(rng)));
    NodeId to{from.row + o.drow, from.col + o.dcol};
    if (!grid.traversable(to)) continue;
    SegmentSample s = sample_segment(env, from, to, rng);
    for (CostLayer l : kSensedLayers)
      samples[static_cast<int>(l)].push_back(
          s.raw_by_layer[static_cast<int>(l)]);
    ++collected;
  }

  CalibrationResult result;
  result.current = bounds_from_samples(samples[0]);
  result.obstacle = bounds_from_samples(samples[1]);
  result.slope = bounds_from_samples(samples[2]);
  return result;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += fmt_double(values[i]);
  }
  return out;
}

std::vector<double> parse_doubles(std::string_view line, std::size_t expected,
                                  std::string_view what) {
  std::vector<double> out;
  for (std::string_view tok : split(line, ' ')) {
    if (tok.empty()) continue;
    out.push_back(parse_double(tok, what));
  }
  if (out.size() != expected)
    throw InputError("wrong number of values for " + std::string(what));
  return out;
}

}  // namespace

std::string environment_to_string(const EnvironmentModel& env) {
  const GridSpec& grid = env.grid();
  std::string out;
  out += "swplan-env 1\n";
  out += "seed " + std::to_string(env.seed()) + "\n";
  out += "width " + std::to_string(grid.width()) + "\n";
  out += "height " + std::to_string(grid.height()) + "\n";
  out += "spacing_m " + fmt_double(grid.spacing_m()) + "\n";
  out += "traversable ";
  for (std::uint8_t c : grid.traversable_mask()) out += c ? '1' : '0';
  out += "\nterrain ";
  for (Terrain t : env.terrain_cells()) out += static_cast<char>(t);
  out += "\nheight_m " + join_doubles(env.height_cells());
  out += "\nobstacle_strength " + join_doubles(env.obstacle_cells());
  out += "\nfoot_traffic " + join_doubles(env.traffic_cells());
  out += "\nintraversable ";
  for (std::uint8_t c : env.intraversable_cells()) out += c ? '1' : '0';
  const LayerNoise& n = env.noise();
  out += "\nnoise_sigma " + fmt_double(n.current) + ' ' +
         fmt_double(n.obstacle) + ' ' + fmt_double(n.slope);
  const SegmentModel& sm = env.segment_model();
  out += "\ncurrent_base " + fmt_double(sm.current_base_grass) + ' ' +
         fmt_double(sm.current_base_pavement) + ' ' +
         fmt_double(sm.current_base_dirt);
  out += "\nboundary_surcharge " + fmt_double(sm.boundary_surcharge);
  out += "\ntraffic_surge_max " + fmt_double(sm.traffic_surge_max);
  out += "\np_fail " + fmt_double(sm.p_fail_base) + ' ' +
         fmt_double(sm.p_fail_intraversable);
  out += "\n";
  return out;
}

namespace {

std::string_view env_expect(std::vector<std::string_view>& lines,
                            std::size_t& pos, std::string_view key) {
  if (pos >= lines.size())
    throw InputError("environment file ends before '" + std::string(key) +
                     "'");
  std::string_view line = lines[pos++];
  if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
      line[key.size()] != ' ')
    throw InputError("expected '" + std::string(key) + " <value>' in "
                     "environment file");
  return line.substr(key.size() + 1);
}

}  // namespace

EnvironmentModel parse_environment(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::string_view line : split(text, '\n')) {
    if (!trim(line).empty()) lines.push_back(trim(line));
  }
  std::size_t pos = 0;
  if (lines.empty() || lines[pos++] != "swplan-env 1")
    throw InputError("not a swplan-env version 1 file");

  const std::uint64_t seed = parse_u64(env_expect(lines, pos, "seed"), "seed");
  const int width = parse_int(env_expect(lines, pos, "width"), "width");
  const int height = parse_int(env_expect(lines, pos, "height"), "height");
  const double spacing =
      parse_double(env_expect(lines, pos, "spacing_m"), "spacing_m");
  const auto cells = static_cast<std::size_t>(width) * height;

  std::string_view mask_str = env_expect(lines, pos, "traversable");
  if (mask_str.size() != cells)
    throw InputError("traversable mask length does not match dimensions");
  std::vector<std::uint8_t> mask(cells);
  for (std::size_t i = 0; i < cells; ++i) mask[i] = mask_str[i] == '1';

  std::string_view terrain_str = env_expect(lines, pos, "terrain");
  if (terrain_str.size() != cells)
    throw InputError("terrain string length does not match dimensions");
  std::vector<Terrain> terrain(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const char c = terrain_str[i];
    if (c != 'G' && c != 'P' && c != 'D')
      throw InputError("terrain chars must be G/P/D");
    terrain[i] = static_cast<Terrain>(c);
  }

  auto height_m =
      parse_doubles(env_expect(lines, pos, "height_m"), cells, "height_m");
  auto obstacle = parse_doubles(env_expect(lines, pos, "obstacle_strength"),
                                cells, "obstacle_strength");
  auto traffic = parse_doubles(env_expect(lines, pos, "foot_traffic"), cells,
                               "foot_traffic");

  std::string_view blocked_str = env_expect(lines, pos, "intraversable");
  if (blocked_str.size() != cells)
    throw InputError("intraversable mask length does not match dimensions");
  std::vector<std::uint8_t> blocked(cells);
  for (std::size_t i = 0; i < cells; ++i) blocked[i] = blocked_str[i] == '1';

  auto noise_vals =
      parse_doubles(env_expect(lines, pos, "noise_sigma"), 3, "noise_sigma");
  LayerNoise noise{noise_vals[0], noise_vals[1], noise_vals[2]};

  auto base_vals =
      parse_doubles(env_expect(lines, pos, "current_base"), 3, "current_base");
  SegmentModel sm;
  sm.current_base_grass = base_vals[0];
  sm.current_base_pavement = base_vals[1];
  sm.current_base_dirt = base_vals[2];
  sm.boundary_surcharge = parse_double(
      env_expect(lines, pos, "boundary_surcharge"), "boundary_surcharge");
  sm.traffic_surge_max = parse_double(
      env_expect(lines, pos, "traffic_surge_max"), "traffic_surge_max");
  auto p_fail = parse_doubles(env_expect(lines, pos, "p_fail"), 2, "p_fail");
  sm.p_fail_base = p_fail[0];
  sm.p_fail_intraversable = p_fail[1];

  if (pos != lines.size())
    throw InputError("trailing content in environment file");

  return EnvironmentModel(GridSpec(width, height, spacing, std::move(mask)),
                          std::move(terrain), std::move(height_m),
                          std::move(obstacle), std::move(traffic),
                          std::move(blocked), noise, sm, seed);
}

void save_environment(const EnvironmentModel& env,
                      const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot open '" + p.string() + "' for writing");
  f << environment_to_string(env);
  if (!f) throw InputError("failed writing '" + p.string() + "'");
}

EnvironmentModel load_environment(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot open environment file '" + p.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_environment(ss.str());
}

}  // namespace swplan
