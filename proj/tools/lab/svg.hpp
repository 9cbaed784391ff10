#ifndef KERNELLAB_LAB_SVG_HPP
#define KERNELLAB_LAB_SVG_HPP

#include <string>
#include <vector>

namespace kernellab::lab {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // same length as x; nonfinite entries break the line
};

// Writes a self-contained line chart with linear axes, tick labels, and a
// legend. Nonfinite points split a series into separate segments instead of
// producing a broken polyline.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

}  // namespace kernellab::lab

#endif
