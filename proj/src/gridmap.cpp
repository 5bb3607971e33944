#include "fmplan/gridmap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "fmplan/error.hpp"
#include "wave_kernel.hpp"

namespace fmplan {

OccupancyBitmap::OccupancyBitmap(Grid<std::uint8_t> cells, double resolution)
    : cells_(std::move(cells)), resolution_(resolution) {
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_)) {
    throw ConstraintError("bitmap resolution must be positive");
  }
  if (cells_.empty()) throw InputError("bitmap has no cells");
  for (std::uint8_t v : cells_.data()) {
    if (v > 1) throw InputError("bitmap cells must be 0 or 1");
  }
}

namespace {

// Minimal cursor over an in-memory PGM so that errors can name byte offsets.
class PgmCursor {
 public:
  explicit PgmCursor(std::string bytes) : bytes_(std::move(bytes)) {}

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string token() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
           bytes_[pos_] != '#') {
      ++pos_;
    }
    return bytes_.substr(start, pos_ - start);
  }

  long integer(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    const std::string tok = token();
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      fail(std::string("expected ") + what, start);
    }
    if (tok.size() > 9) fail(std::string(what) + " too large", start);
    return std::stol(tok);
  }

  unsigned char byte() { return static_cast<unsigned char>(bytes_[pos_++]); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  [[noreturn]] static void fail(const std::string& what, std::size_t at) {
    throw ParseError("PGM: " + what + " at byte offset " + std::to_string(at));
  }

 private:
  std::string bytes_;
  std::size_t pos_ = 0;
};

constexpr int kPgmObstacleThreshold = 128;

OccupancyBitmap parse_pgm(std::istream& in, double resolution) {
  PgmCursor cur(std::string(std::istreambuf_iterator<char>(in), {}));
  const std::size_t magic_at = cur.offset();
  const std::string magic = cur.token();
  if (magic != "P2" && magic != "P5") PgmCursor::fail("expected magic P2 or P5", magic_at);
  const long width = cur.integer("width");
  const long height = cur.integer("height");
  if (width <= 0 || height <= 0) PgmCursor::fail("dimensions must be positive", cur.offset());
  const std::size_t maxval_at = cur.offset();
  const long maxval = cur.integer("maxval");
  if (maxval != 255) PgmCursor::fail("maxval must be 255", maxval_at);

  Grid<std::uint8_t> cells(static_cast<int>(width), static_cast<int>(height));
  const std::size_t count = cells.size();
  if (magic == "P5") {
    // exactly one whitespace byte separates the header from the raster
    if (cur.at_end()) PgmCursor::fail("missing raster", cur.offset());
    const std::size_t sep_at = cur.offset();
    if (!std::isspace(cur.byte())) PgmCursor::fail("expected whitespace after maxval", sep_at);
    if (cur.remaining() < count) {
      PgmCursor::fail("raster truncated: expected " + std::to_string(count) + " bytes, found " +
                          std::to_string(cur.remaining()),
                      cur.offset());
    }
    if (cur.remaining() > count) {
      PgmCursor::fail("dimension mismatch: " + std::to_string(cur.remaining() - count) +
                          " trailing bytes",
                      cur.offset() + count);
    }
    for (std::size_t k = 0; k < count; ++k) {
      cells[k] = cur.byte() >= kPgmObstacleThreshold ? 1 : 0;
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      cur.skip_space_and_comments();
      if (cur.at_end()) {
        PgmCursor::fail("dimension mismatch: expected " + std::to_string(count) + " pixels, found " +
                            std::to_string(k),
                        cur.offset());
      }
      const std::size_t at = cur.offset();
      const long v = cur.integer("pixel value");
      if (v > maxval) PgmCursor::fail("pixel value exceeds maxval", at);
      cells[k] = v >= kPgmObstacleThreshold ? 1 : 0;
    }
    cur.skip_space_and_comments();
    if (!cur.at_end()) PgmCursor::fail("dimension mismatch: trailing pixel data", cur.offset());
  }
  return OccupancyBitmap(std::move(cells), resolution);
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

OccupancyBitmap parse_csv(std::istream& in, double resolution) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::string line;
  int line_no = 0;
  int blank_run_start = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row_text = trim(line);
    if (row_text.empty()) {
      if (blank_run_start == 0) blank_run_start = line_no;
      continue;
    }
    if (blank_run_start != 0) {
      throw ParseError("CSV: blank line inside grid at line " + std::to_string(blank_run_start));
    }
    std::vector<std::uint8_t> row;
    std::stringstream ss(row_text);
    std::string field;
    int col = 0;
    while (std::getline(ss, field, ',')) {
      ++col;
      const std::string v = trim(field);
      if (v == "0") {
        row.push_back(0);
      } else if (v == "1") {
        row.push_back(1);
      } else {
        throw ParseError("CSV: non-binary value '" + v + "' at line " + std::to_string(line_no) +
                         ", column " + std::to_string(col));
      }
    }
    if (row_text.back() == ',') {
      throw ParseError("CSV: empty value at line " + std::to_string(line_no) + ", column " +
                       std::to_string(col + 1));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("CSV: dimension mismatch at line " + std::to_string(line_no) + ": expected " +
                       std::to_string(rows.front().size()) + " values, found " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("CSV: no rows at line 1");
  Grid<std::uint8_t> cells(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()));
  for (int j = 0; j < cells.height(); ++j) {
    for (int i = 0; i < cells.width(); ++i) cells(i, j) = rows[j][i];
  }
  return OccupancyBitmap(std::move(cells), resolution);
}

}  // namespace

OccupancyBitmap load_bitmap(std::istream& in, BitmapFormat format, double resolution) {
  return format == BitmapFormat::Pgm ? parse_pgm(in, resolution) : parse_csv(in, resolution);
}

BitmapFormat bitmap_format_for(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm") return BitmapFormat::Pgm;
  if (ext == ".csv") return BitmapFormat::Csv;
  throw InputError("cannot infer bitmap format from extension '" + ext + "'");
}

OccupancyBitmap load_bitmap_file(const std::filesystem::path& path, double resolution) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open bitmap " + path.string());
  return load_bitmap(in, bitmap_format_for(path), resolution);
}

void write_pgm(std::ostream& out, const OccupancyBitmap& bm, bool binary) {
  out << (binary ? "P5" : "P2") << '\n' << bm.width() << ' ' << bm.height() << "\n255\n";
  const auto& cells = bm.cells();
  if (binary) {
    for (std::uint8_t v : cells.data()) out.put(static_cast<char>(v ? 255 : 0));
    return;
  }
  for (int j = 0; j < bm.height(); ++j) {
    for (int i = 0; i < bm.width(); ++i) {
      if (i) out << ' ';
      out << (cells(i, j) ? 255 : 0);
    }
    out << '\n';
  }
}

OccupancyBitmap resample(const OccupancyBitmap& bm, double resolution) {
  if (!(resolution > 0.0)) throw ConstraintError("resample resolution must be positive");
  const double src_res = bm.resolution();
  if (resolution == src_res) return bm;
  const double extent_x = bm.width() * src_res;
  const double extent_y = bm.height() * src_res;
  // tolerate extents that are integer multiples up to rounding
  auto cells_for = [resolution](double extent) {
    const double n = extent / resolution;
    const double r = std::round(n);
    return static_cast<int>(std::abs(n - r) < 1e-9 ? r : std::ceil(n));
  };
  const int w = cells_for(extent_x);
  const int h = cells_for(extent_y);
  // source index range whose interval overlaps [a, b) with positive length
  auto src_range = [src_res](double a, double b, int limit) {
    const double eps = 1e-9 * src_res;
    int lo = static_cast<int>(std::floor((a + eps) / src_res));
    int hi = static_cast<int>(std::ceil((b - eps) / src_res)) - 1;
    lo = std::clamp(lo, 0, limit - 1);
    hi = std::clamp(hi, 0, limit - 1);
    return std::pair{lo, hi};
  };
  Grid<std::uint8_t> out(w, h, 0);
  for (int j = 0; j < h; ++j) {
    const auto [j0, j1] = src_range(j * resolution, (j + 1) * resolution, bm.height());
    for (int i = 0; i < w; ++i) {
      const auto [i0, i1] = src_range(i * resolution, (i + 1) * resolution, bm.width());
      bool hit = false;
      for (int sj = j0; sj <= j1 && !hit; ++sj) {
        for (int si = i0; si <= i1 && !hit; ++si) hit = bm.occupied(si, sj);
      }
      out(i, j) = hit ? 1 : 0;
    }
  }
  return OccupancyBitmap(std::move(out), resolution);
}

void GoalCells::validate(int width, int height) const {
  if (cells.empty()) throw InputError("goal set is empty");
  for (const Cell& c : cells) {
    if (c.i < 0 || c.j < 0 || c.i >= width || c.j >= height) {
      throw InputError("goal cell (" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                       ") is out of bounds");
    }
  }
  if (kind == GoalKind::SingleGoal && cells.size() != 1) {
    throw InputError("a single-goal mission has exactly one goal cell");
  }
  if (kind == GoalKind::Path) {
    for (std::size_t k = 1; k < cells.size(); ++k) {
      const int di = std::abs(cells[k].i - cells[k - 1].i);
      const int dj = std::abs(cells[k].j - cells[k - 1].j);
      if (std::max(di, dj) != 1) {
        throw InputError("path cells " + std::to_string(k - 1) + " and " + std::to_string(k) +
                         " are not 8-adjacent");
      }
    }
  }
}

GoalCells rasterize_path(const std::vector<Cell>& waypoints) {
  GoalCells out;
  out.kind = GoalKind::Path;
  if (waypoints.empty()) return out;
  out.cells.push_back(waypoints.front());
  for (std::size_t k = 1; k < waypoints.size(); ++k) {
    int x0 = waypoints[k - 1].i;
    int y0 = waypoints[k - 1].j;
    const int x1 = waypoints[k].i;
    const int y1 = waypoints[k].j;
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (x0 != x1 || y0 != y1) {
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
      out.cells.push_back({x0, y0});
    }
  }
  return out;
}

int buffer_width_cells(double alpha, double r_min, double res) {
  if (!(alpha >= 2.0)) throw ConstraintError("alpha must be >= 2, got " + std::to_string(alpha));
  if (!(r_min > 0.0)) throw ConstraintError("r_min must be positive");
  if (!(res > 0.0)) throw ConstraintError("resolution must be positive");
  return static_cast<int>(std::ceil(alpha * r_min / res));
}

CompleteMap::CompleteMap(Grid<CellClass> cells, double resolution, double alpha, double r_min)
    : cells_(std::move(cells)), resolution_(resolution), alpha_(alpha), r_min_(r_min) {
  buffer_width_cells(alpha_, r_min_, resolution_);
}

bool CompleteMap::contains_point(double x, double y) const {
  return x >= 0.0 && y >= 0.0 && x < width() * resolution_ && y < height() * resolution_;
}

Cell CompleteMap::cell_at(double x, double y) const {
  if (!contains_point(x, y)) {
    throw OutOfBoundsError("position (" + std::to_string(x) + ", " + std::to_string(y) +
                           ") is outside the workspace");
  }
  const int i = std::min(static_cast<int>(x / resolution_), width() - 1);
  const int j = std::min(static_cast<int>(y / resolution_), height() - 1);
  return {i, j};
}

Grid<double> brushfire(const Grid<std::uint8_t>& occupancy, int waves, Exec exec) {
  Grid<double> values(occupancy.width(), occupancy.height(), 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = occupancy[k] ? 1.0 : 0.0;
  detail::run_waves(values, 1.0, waves, exec);
  return values;
}

namespace {

std::string describe(Cell c) { return "(" + std::to_string(c.i) + ", " + std::to_string(c.j) + ")"; }

}  // namespace

CompleteMap generate_complete_map(const OccupancyBitmap& bm, const GoalCells& goals, double alpha,
                                  double r_min, Exec exec) {
  const int waves = buffer_width_cells(alpha, r_min, bm.resolution());
  goals.validate(bm.width(), bm.height());
  for (const Cell& g : goals.cells) {
    if (bm.occupied(g)) {
      throw AssumptionViolation("goal cell " + describe(g) + " lies in an obstacle (Assumption 1)", g);
    }
  }

  const Grid<double> fire = brushfire(bm.cells(), waves, exec);
  Grid<CellClass> cells(bm.width(), bm.height(), CellClass::Free);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const double v = fire[k];
    if (v == 1.0) {
      cells[k] = CellClass::Obstacle;
    } else if (v > 1.0) {
      cells[k] = CellClass::Buffer;
    }
  }
  for (const Cell& g : goals.cells) {
    if (cells(g) == CellClass::Buffer) {
      throw AssumptionViolation(
          "goal cell " + describe(g) + " lies in the buffer region (Assumption 1)", g);
    }
    cells(g) = CellClass::Goal;
  }
  return CompleteMap(std::move(cells), bm.resolution(), alpha, r_min);
}

}  // namespace fmplan
