#include "swplan/costmap_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "swplan/text_util.hpp"

namespace swplan {

std::string costmap_to_string(const CostLayerSet& layers) {
  std::string out;
  out += "swplan-costmap 1\n";
  const GridSpec& grid = layers.grid();
  out += "width " + std::to_string(grid.width()) + "\n";
  out += "height " + std::to_string(grid.height()) + "\n";
  out += "spacing_m " + fmt_double(grid.spacing_m()) + "\n";
  out += "traversable ";
  for (std::uint8_t c : grid.traversable_mask()) out += c ? '1' : '0';
  out += "\n";
  char buf[64];
  for (CostLayer l : kAllLayers) {
    out += "layer ";
    out += layer_name(l);
    out += "\n";
    layers.layer(l).for_each_edge([&](NodeId target, Direction d, double v) {
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%.6f\n", target.row, target.col,
                    static_cast<int>(d), v);
      out += buf;
    });
  }
  return out;
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::optional<std::string_view> next() {
    if (pos_ >= text_.size()) return std::nullopt;
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    std::string_view line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_no_;
    return line;
  }

  [[noreturn]] void fail(std::string_view msg) const {
    throw InputError("costmap line " + std::to_string(line_no_) + ": " +
                     std::string(msg));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

std::string_view expect_key(LineReader& r, std::string_view key) {
  auto line = r.next();
  if (!line) r.fail("unexpected end of file, wanted '" + std::string(key) + "'");
  if (line->substr(0, key.size()) != key || line->size() <= key.size() ||
      (*line)[key.size()] != ' ')
    r.fail("expected '" + std::string(key) + " <value>'");
  return line->substr(key.size() + 1);
}

}  // namespace

CostLayerSet parse_costmap(std::string_view text) {
  LineReader r(text);
  auto header = r.next();
  if (!header || *header != "swplan-costmap 1")
    throw InputError("not a swplan-costmap version 1 file");

  int width = parse_int(expect_key(r, "width"), "width");
  int height = parse_int(expect_key(r, "height"), "height");
  double spacing = parse_double(expect_key(r, "spacing_m"), "spacing_m");
  std::string_view mask_str = expect_key(r, "traversable");
  if (mask_str.size() != static_cast<std::size_t>(width) * height)
    r.fail("traversable mask length does not match dimensions");
  std::vector<std::uint8_t> mask(mask_str.size());
  for (std::size_t i = 0; i < mask_str.size(); ++i) {
    if (mask_str[i] != '0' && mask_str[i] != '1') r.fail("mask must be 0/1");
    mask[i] = mask_str[i] == '1';
  }

  GridSpec grid(width, height, spacing, std::move(mask));
  CostLayerSet layers(grid);

  for (CostLayer l : kAllLayers) {
    std::string_view name = expect_key(r, "layer");
    if (name != layer_name(l))
      r.fail("expected layer '" + std::string(layer_name(l)) + "', got '" +
             std::string(name) + "'");
    DelayField& field = layers.layer(l);
    // Records must appear in canonical order so that loads validate edge
    // structure exactly and round-trips are byte-identical.
    field.for_each_edge([&](NodeId target, Direction d, double) {
      auto line = r.next();
      if (!line) r.fail("truncated layer records");
      int row, col, dir;
      double delay;
      if (std::sscanf(std::string(*line).c_str(), "%d,%d,%d,%lf", &row, &col,
                      &dir, &delay) != 4)
        r.fail("malformed edge record");
      if (row != target.row || col != target.col || dir != static_cast<int>(d))
        r.fail("edge record out of canonical order");
      if (!(delay >= kMinDelay && delay <= kMaxDelay))
        r.fail("delay outside [1,10]");
      field.set(target, d, delay);
    });
  }
  if (r.next()) throw InputError("trailing content after last layer");
  return layers;
}

void save_costmap(const CostLayerSet& layers, const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot open '" + p.string() + "' for writing");
  f << costmap_to_string(layers);
  if (!f) throw InputError("failed writing '" + p.string() + "'");
}

CostLayerSet load_costmap(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot open costmap file '" + p.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_costmap(ss.str());
}

}  // namespace swplan
