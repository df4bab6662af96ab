#include "muskat/cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace muskat::cli {
namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 170, kTop = 60, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi - lo <= 1e-300 + 1e-12 * std::abs(hi)) {
      const double d = std::abs(lo) > 0.0 ? 0.5 * std::abs(lo) : 0.5;
      lo -= d;
      hi += d;
    }
  }
};

}  // namespace

std::string render_line_chart(const std::vector<Series>& series, const ChartOptions& options) {
  auto ty = [&](double y) { return options.log_y ? std::log10(y) : y; };
  auto keep = [&](double y) { return std::isfinite(y) && (!options.log_y || y > 0.0); };

  Range xr, yr;
  for (const auto& s : series) {
    for (size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!keep(s.y[i]) || !std::isfinite(s.x[i])) continue;
      xr.add(s.x[i]);
      yr.add(ty(s.y[i]));
    }
  }
  xr.pad();
  yr.pad();

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(options.title)
    << "</text>\n";
  if (!options.annotation.empty()) {
    o << "<text x=\"" << kWidth / 2 << "\" y=\"42\" text-anchor=\"middle\" fill=\"#444\">"
      << escape(options.annotation) << "</text>\n";
  }
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0, yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    o << "<line x1=\"" << px(xv) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(xv) << "\" y2=\"" << kTop + ph + 5
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt(xv)
      << "</text>\n";
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << kLeft << "\" y2=\"" << py(yv)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
      << (options.log_y ? "1e" + fmt(yv) : fmt(yv)) << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
    << escape(options.x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << kTop + ph / 2 << ")\">" << escape(options.y_label + (options.log_y ? " (log10)" : "")) << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    std::ostringstream pts;
    int count = 0;
    double lx = 0, ly = 0;
    for (size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!keep(s.y[i]) || !std::isfinite(s.x[i])) continue;
      lx = px(s.x[i]);
      ly = py(ty(s.y[i]));
      pts << (count++ ? " " : "") << fmt(lx) << ',' << fmt(ly);
    }
    if (count > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
        << "\"/>\n";
    } else if (count == 1) {
      o << "<circle cx=\"" << fmt(lx) << "\" cy=\"" << fmt(ly) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly_legend = kTop + 10 + 18 * static_cast<double>(si);
    o << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << ly_legend << "\" x2=\"" << kWidth - kRight + 35
      << "\" y2=\"" << ly_legend << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << kWidth - kRight + 40 << "\" y=\"" << ly_legend + 4 << "\">" << escape(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace muskat::cli
