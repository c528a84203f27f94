#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ringing::cli::detail {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec) {
  auto usable = [&](double y) { return std::isfinite(y) && (!spec.log_y || y > 0.0); };
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x1 >= x0)) x0 = 0.0, x1 = 1.0;
  if (!(y1 >= y0)) y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * (x - x0) / (x1 - x0); };
  auto py = [&](double y) { return kTop + ph * (1.0 - (y - y0) / (y1 - y0)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    os << "<line x1=\"" << px(xv) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(xv) << "\" y2=\""
       << kTop + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
       << num(xv) << "</text>\n";
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << kLeft << "\" y2=\""
       << py(yv) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
       << (spec.log_y ? "1e" + num(yv) : num(yv)) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << kTop + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % (sizeof kColors / sizeof *kColors)];
    std::ostringstream path;
    bool pen_down = false;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      const double y = series[s].y[i];
      if (!std::isfinite(series[s].x[i]) || !usable(y)) {
        pen_down = false;
        continue;
      }
      path << (pen_down ? " L" : " M") << num(px(series[s].x[i])) << "," << num(py(ty(y)));
      pen_down = true;
    }
    os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.2\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(s);
    os << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly << "\" x2=\""
       << kWidth - kRight + 32 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly + 4 << "\">"
       << escape(series[s].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ringing::cli::detail
