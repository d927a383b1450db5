#pragma once

#include <string>
#include <vector>

namespace quadsmc {

/// Minimal static SVG line plots. CSV remains the authoritative output;
/// these exist so a run directory is inspectable without extra tooling.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string render_svg_plot(const std::string& title,
                            const std::string& x_label,
                            const std::string& y_label,
                            const std::vector<PlotSeries>& series,
                            int width = 860, int height = 420);

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace quadsmc
