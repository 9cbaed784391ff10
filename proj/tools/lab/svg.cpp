#include "lab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kernellab::lab {
namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 78.0;
constexpr double kRight = 24.0;
constexpr double kTop = 46.0;
constexpr double kBottom = 58.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

// Expands to a nonempty interval with a small margin so extreme points do
// not sit on the frame.
Range padded(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo == hi) {
    const double bump = std::max(1.0, std::abs(lo) * 0.1);
    lo -= bump;
    hi += bump;
  }
  const double pad = (hi - lo) * 0.04;
  return {lo - pad, hi + pad};
}

double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

std::vector<double> ticks(const Range& r, int target) {
  const double step = nice_step(r.hi - r.lo, target);
  std::vector<double> out;
  double t = std::ceil(r.lo / step) * step;
  for (; t <= r.hi + step * 1e-9; t += step) {
    // snap values like 0.30000000000000004 back onto the grid
    const double snapped = std::round(t / step) * step;
    out.push_back(snapped == 0.0 ? 0.0 : snapped);
  }
  return out;
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
  double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        xlo = xhi = s.x[i];
        ylo = yhi = s.y[i];
        any = true;
      } else {
        xlo = std::min(xlo, s.x[i]);
        xhi = std::max(xhi, s.x[i]);
        ylo = std::min(ylo, s.y[i]);
        yhi = std::max(yhi, s.y[i]);
      }
    }
  }
  const Range xr = any ? padded(xlo, xhi) : Range{0.0, 1.0};
  const Range yr = any ? padded(ylo, yhi) : Range{0.0, 1.0};

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double v) { return kTop + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
      << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"#ffffff\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"26\" font-family=\"sans-serif\" "
      << "font-size=\"15\" text-anchor=\"middle\" fill=\"#222222\">" << escape(title)
      << "</text>\n";

  for (double t : ticks(xr, 6)) {
    const double px = sx(t);
    svg << "<line x1=\"" << px << "\" y1=\"" << kTop << "\" x2=\"" << px << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << kTop + plot_h + 18
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
        << "fill=\"#444444\">" << fmt(t) << "</text>\n";
  }
  for (double t : ticks(yr, 6)) {
    const double py = sy(t);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << py << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" "
        << "fill=\"#444444\">" << fmt(t) << "</text>\n";
  }

  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      << "fill=\"#222222\">" << escape(x_label) << "</text>\n";
  svg << "<text x=\"20\" y=\"" << kTop + plot_h / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      << "fill=\"#222222\" transform=\"rotate(-90 20 " << kTop + plot_h / 2 << ")\">"
      << escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % kPaletteSize];
    const auto& s = series[k];
    std::vector<std::pair<double, double>> segment;
    auto flush = [&]() {
      if (segment.size() == 1) {
        svg << "<circle cx=\"" << segment[0].first << "\" cy=\"" << segment[0].second
            << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
      } else if (segment.size() > 1) {
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\" points=\"";
        for (const auto& [px, py] : segment) svg << px << "," << py << " ";
        svg << "\"/>\n";
      }
      segment.clear();
    };
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      segment.emplace_back(sx(s.x[i]), sy(s.y[i]));
    }
    flush();
  }

  double legend_y = kTop + 14;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k].label.empty()) continue;
    const char* color = kPalette[k % kPaletteSize];
    const double lx = kLeft + plot_w - 150;
    svg << "<line x1=\"" << lx << "\" y1=\"" << legend_y - 4 << "\" x2=\"" << lx + 24
        << "\" y2=\"" << legend_y - 4 << "\" stroke=\"" << color
        << "\" stroke-width=\"1.8\"/>\n";
    svg << "<text x=\"" << lx + 30 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\">"
        << escape(series[k].label) << "</text>\n";
    legend_y += 17;
  }

  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << svg.str();
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace kernellab::lab
