#include "fmplan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fmplan/io.hpp"

namespace fmplan::svg {

namespace {

constexpr const char* kPalette[] = {"#d4a017", "#7b3fa0", "#1f5fbf", "#2e8b57", "#c0392b", "#555555"};

const char* colour(std::size_t k) { return kPalette[k % (sizeof kPalette / sizeof kPalette[0])]; }

std::string num(double v) {
  // fixed precision keeps files small and byte-stable
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string map_plot(const CompleteMap& m, const std::vector<Overlay>& overlays,
                     const std::vector<PathState>& reference, const VectorField* field, int arrow_stride) {
  const double res = m.resolution();
  const double width_m = m.width() * res;
  const double height_m = m.height() * res;
  const double scale = 800.0 / std::max(width_m, height_m);
  const double pw = width_m * scale;
  const double ph = height_m * scale;
  // workspace y grows upward; SVG y grows downward
  auto px = [&](double x) { return num(x * scale); };
  auto py = [&](double y) { return num(ph - y * scale); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(pw) << "\" height=\"" << num(ph)
     << "\" viewBox=\"0 0 " << num(pw) << ' ' << num(ph) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#dff0d8\"/>\n";
  const double cell = res * scale;
  for (int j = 0; j < m.height(); ++j) {
    for (int i = 0; i < m.width(); ++i) {
      const char* fill = nullptr;
      switch (m.at(i, j)) {
        case CellClass::Obstacle:
          fill = "#222222";
          break;
        case CellClass::Buffer:
          fill = "#f3e08a";
          break;
        case CellClass::Goal:
          fill = "#e74c3c";
          break;
        case CellClass::Free:
          break;
      }
      if (!fill) continue;
      os << "<rect x=\"" << px(i * res) << "\" y=\"" << py((j + 1) * res) << "\" width=\"" << num(cell)
         << "\" height=\"" << num(cell) << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  if (field) {
    const int stride = std::max(1, arrow_stride);
    const double len = 0.4 * res * stride;
    for (int j = stride / 2; j < field->height(); j += stride) {
      for (int i = stride / 2; i < field->width(); i += stride) {
        const Point c = cell_center({i, j}, res);
        const double a = field->angle(i, j);
        const double tx = c.x + len * std::cos(a);
        const double ty = c.y + len * std::sin(a);
        os << "<line x1=\"" << px(c.x) << "\" y1=\"" << py(c.y) << "\" x2=\"" << px(tx) << "\" y2=\"" << py(ty)
           << "\" stroke=\"#3b5b7a\" stroke-width=\"0.8\"/>\n";
        os << "<circle cx=\"" << px(tx) << "\" cy=\"" << py(ty) << "\" r=\"1.2\" fill=\"#3b5b7a\"/>\n";
      }
    }
  }
  if (!reference.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#000000\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\" points=\"";
    for (const PathState& p : reference) os << px(p.x) << ',' << py(p.y) << ' ';
    os << "\"/>\n";
  }
  for (std::size_t k = 0; k < overlays.size(); ++k) {
    const Trajectory* t = overlays[k].trajectory;
    if (!t || t->samples.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << colour(k) << "\" stroke-width=\"2\" points=\"";
    // thin dense runs so files stay small
    const std::size_t step = std::max<std::size_t>(1, t->samples.size() / 2000);
    for (std::size_t s = 0; s < t->samples.size(); s += step) {
      os << px(t->samples[s].x) << ',' << py(t->samples[s].y) << ' ';
    }
    os << px(t->samples.back().x) << ',' << py(t->samples.back().y) << "\"/>\n";
    const VehicleState& s0 = t->samples.front();
    os << "<circle cx=\"" << px(s0.x) << "\" cy=\"" << py(s0.y) << "\" r=\"4\" fill=\"" << colour(k) << "\"/>\n";
    os << "<text x=\"10\" y=\"" << num(20.0 + 16.0 * static_cast<double>(k)) << "\" font-size=\"13\" fill=\""
       << colour(k) << "\">" << escape(overlays[k].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  constexpr double W = 800.0;
  constexpr double H = 400.0;
  constexpr double L = 60.0;
  constexpr double R = 20.0;
  constexpr double T = 40.0;
  constexpr double B = 50.0;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const Series& s : series) {
    for (const Point& p : s.points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  if (!(xmin < xmax)) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (!(ymin < ymax)) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  auto sx = [&](double x) { return num(L + (x - xmin) / (xmax - xmin) * (W - L - R)); };
  auto sy = [&](double y) { return num(H - B - (y - ymin) / (ymax - ymin) * (H - T - B)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"#000\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"#000\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" font-size=\"13\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << H / 2 << ")\">" << escape(y_label) << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
       << num(xv) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) << "\" font-size=\"11\" text-anchor=\"end\">" << num(yv)
       << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    if (s.points.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << colour(k) << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t step = std::max<std::size_t>(1, s.points.size() / 2000);
    for (std::size_t p = 0; p < s.points.size(); p += step) os << sx(s.points[p].x) << ',' << sy(s.points[p].y) << ' ';
    os << sx(s.points.back().x) << ',' << sy(s.points.back().y) << "\"/>\n";
    os << "<text x=\"" << W - R - 150 << "\" y=\"" << T + 16.0 * static_cast<double>(k) << "\" font-size=\"12\" fill=\""
       << colour(k) << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fmplan::svg
