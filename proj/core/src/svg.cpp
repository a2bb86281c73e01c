#include "spamlens/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spamlens::svg {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 30, kTop = 50, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string esc(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

void header(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"16\">"
      << esc(title) << "</text>\n";
}

void axes(std::ostringstream& out, const std::string& x_label,
          const std::string& y_label, double x0, double x1, double y0,
          double y1) {
  const double px0 = kLeft, px1 = kWidth - kRight;
  const double py0 = kHeight - kBottom, py1 = kTop;
  out << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px1
      << "\" y2=\"" << py0 << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px0
      << "\" y2=\"" << py1 << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = px0 + (px1 - px0) * i / 5.0;
    const double vx = x0 + (x1 - x0) * i / 5.0;
    out << "<text x=\"" << fx << "\" y=\"" << py0 + 18
        << "\" text-anchor=\"middle\">" << num(vx) << "</text>\n";
    const double fy = py0 + (py1 - py0) * i / 5.0;
    const double vy = y0 + (y1 - y0) * i / 5.0;
    out << "<text x=\"" << px0 - 8 << "\" y=\"" << fy + 4
        << "\" text-anchor=\"end\">" << num(vy) << "</text>\n";
    out << "<line x1=\"" << px0 << "\" y1=\"" << fy << "\" x2=\"" << px1
        << "\" y2=\"" << fy << "\" stroke=\"#dddddd\"/>\n";
  }
  out << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\">" << esc(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << (py0 + py1) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (py0 + py1) / 2 << ")\">" << esc(y_label) << "</text>\n";
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series, bool unit_square) {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!unit_square) {
    bool first = true;
    for (const auto& s : series) {
      for (const auto& [x, y] : s.points) {
        if (first) {
          x0 = x1 = x;
          y0 = y1 = y;
          first = false;
        }
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
    if (x0 == x1) x1 = x0 + 1;
    if (y0 == y1) y1 = y0 + 1;
  }
  const double px0 = kLeft, px1 = kWidth - kRight;
  const double py0 = kHeight - kBottom, py1 = kTop;
  const auto sx = [&](double x) { return px0 + (x - x0) / (x1 - x0) * (px1 - px0); };
  const auto sy = [&](double y) { return py0 + (y - y0) / (y1 - y0) * (py1 - py0); };

  std::ostringstream out;
  header(out, title);
  axes(out, x_label, y_label, x0, x1, y0, y1);
  if (unit_square) {
    out << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1)
        << "\" y2=\"" << sy(1) << "\" stroke=\"#999999\" stroke-dasharray=\"4\"/>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[s].points) out << sx(x) << ',' << sy(y) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << px1 - 150 << "\" y=\"" << kTop + 16 * (s + 1)
        << "\" fill=\"" << color << "\">" << esc(series[s].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string bar_chart(const std::string& title,
                      const std::vector<std::pair<std::string, double>>& bars) {
  double vmax = 0;
  for (const auto& [name, v] : bars) vmax = std::max(vmax, v);
  if (vmax <= 0) vmax = 1;
  const double px0 = kLeft + 60, px1 = kWidth - kRight;
  const double py0 = kTop, py1 = kHeight - kBottom;
  const double slot = (py1 - py0) / std::max<std::size_t>(bars.size(), 1);

  std::ostringstream out;
  header(out, title);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double y = py0 + slot * i;
    const double w = (px1 - px0) * bars[i].second / vmax;
    out << "<rect x=\"" << px0 << "\" y=\"" << y + slot * 0.15 << "\" width=\""
        << w << "\" height=\"" << slot * 0.7 << "\" fill=\"" << kPalette[0]
        << "\"/>\n";
    out << "<text x=\"" << px0 - 6 << "\" y=\"" << y + slot * 0.6
        << "\" text-anchor=\"end\">" << esc(bars[i].first) << "</text>\n";
    out << "<text x=\"" << px0 + w + 4 << "\" y=\"" << y + slot * 0.6 << "\">"
        << num(bars[i].second) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string grouped_bar_chart(const std::string& title,
                              const std::vector<std::string>& group_labels,
                              const std::vector<Series>& series) {
  double vmax = 0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) vmax = std::max(vmax, y);
  if (vmax <= 0) vmax = 1;
  const double px0 = kLeft, px1 = kWidth - kRight;
  const double py0 = kHeight - kBottom, py1 = kTop;
  const std::size_t n_groups = group_labels.size();
  const double group_w = (px1 - px0) / std::max<std::size_t>(n_groups, 1);

  std::ostringstream out;
  header(out, title);
  out << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px1
      << "\" y2=\"" << py0 << "\" stroke=\"black\"/>\n";
  for (std::size_t g = 0; g < n_groups; ++g) {
    const double gx = px0 + group_w * g;
    out << "<text x=\"" << gx + group_w / 2 << "\" y=\"" << py0 + 18
        << "\" text-anchor=\"middle\" font-size=\"10\">" << esc(group_labels[g])
        << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
      if (g >= series[s].points.size()) continue;
      const double v = series[s].points[g].second;
      const double bw = group_w * 0.8 / static_cast<double>(series.size());
      const double x = gx + group_w * 0.1 + bw * s;
      const double h = (py0 - py1) * v / vmax;
      out << "<rect x=\"" << x << "\" y=\"" << py0 - h << "\" width=\"" << bw
          << "\" height=\"" << h << "\" fill=\""
          << kPalette[s % std::size(kPalette)] << "\"/>\n";
    }
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<text x=\"" << px1 - 150 << "\" y=\"" << kTop + 16 * (s + 1)
        << "\" fill=\"" << kPalette[s % std::size(kPalette)] << "\">"
        << esc(series[s].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace spamlens::svg
