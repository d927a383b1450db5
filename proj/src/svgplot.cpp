#include "quadsmc/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "quadsmc/csvio.hpp"

namespace quadsmc {
namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double m = 0.04 * (hi - lo);
      lo -= m;
      hi += m;
    }
  }
};

std::string fmt_tick(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg_plot(const std::string& title,
                            const std::string& x_label,
                            const std::string& y_label,
                            const std::vector<PlotSeries>& series, int width,
                            int height) {
  Range rx, ry;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("plot series length mismatch: " + s.label);
    }
    for (double v : s.x) rx.include(v);
    for (double v : s.y) ry.include(v);
  }
  rx.pad();
  ry.pad();

  const double ml = 64, mr = 16, mt = 34, mb = 44;  // margins
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto px = [&](double v) {
    return ml + (v - rx.lo) / (rx.hi - rx.lo) * pw;
  };
  const auto py = [&](double v) {
    return mt + (ry.hi - v) / (ry.hi - ry.lo) * ph;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" font-family=\"sans-serif\" "
     << "font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
     << "font-size=\"14\">" << escape(title) << "</text>\n";

  // Grid and ticks.
  for (int i = 0; i <= 5; ++i) {
    const double xv = rx.lo + i * (rx.hi - rx.lo) / 5;
    const double yv = ry.lo + i * (ry.hi - ry.lo) / 5;
    os << "<line x1=\"" << px(xv) << "\" y1=\"" << mt << "\" x2=\"" << px(xv)
       << "\" y2=\"" << mt + ph << "\" stroke=\"#ddd\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << py(yv) << "\" x2=\"" << ml + pw
       << "\" y2=\"" << py(yv) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 16
       << "\" text-anchor=\"middle\">" << fmt_tick(xv) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
       << "\" text-anchor=\"end\">" << fmt_tick(yv) << "</text>\n";
  }
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
     << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8
     << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << mt + ph / 2
     << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % (sizeof kColors / sizeof *kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.2\" points=\"";
    // Thin very dense traces; SVG viewers choke on 10^5-point polylines.
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 4000);
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
      os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    if (!s.x.empty() && (s.x.size() - 1) % stride != 0) {
      os << px(s.x.back()) << ',' << py(s.y.back());
    }
    os << "\"/>\n";
    os << "<text x=\"" << ml + pw - 6 << "\" y=\"" << mt + 16 + 16 * k
       << "\" text-anchor=\"end\" fill=\"" << color << "\">"
       << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  write_text_file(path, render_svg_plot(title, x_label, y_label, series));
}

}  // namespace quadsmc
