#include "trustconnect/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace trustconnect {

namespace {

std::string fixed(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_grouped_bars(const std::string& title, const std::vector<std::string>& categories,
                                const std::vector<BarSeries>& series) {
  for (const auto& s : series) {
    if (s.values.size() != categories.size()) throw std::invalid_argument("series '" + s.name + "' length mismatch");
  }
  constexpr double kBar = 8.0, kGap = 10.0, kLeft = 60.0, kRight = 20.0, kTop = 40.0, kBottom = 60.0,
                   kPlotHeight = 260.0;
  const double group = kBar * static_cast<double>(series.size()) + kGap;
  const double width = kLeft + kRight + group * static_cast<double>(std::max<std::size_t>(categories.size(), 1));
  const double height = kTop + kPlotHeight + kBottom;

  double top = 0.0;
  for (const auto& s : series) {
    for (double v : s.values) {
      if (std::isfinite(v)) top = std::max(top, v);
    }
  }
  if (top <= 0.0) top = 1.0;
  const double base_y = kTop + kPlotHeight;
  auto y_of = [&](double v) {
    if (!std::isfinite(v) || v < 0.0) v = 0.0;
    return base_y - kPlotHeight * std::min(v, top) / top;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) + "\" height=\"" +
         fixed(height, 0) + "\" viewBox=\"0 0 " + fixed(width, 0) + " " + fixed(height, 0) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fixed(width / 2) + "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + escape(title) + "</text>\n";

  // y axis with five ticks
  out += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kTop) + "\" x2=\"" + fixed(kLeft) + "\" y2=\"" +
         fixed(base_y) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(base_y) + "\" x2=\"" + fixed(width - kRight) +
         "\" y2=\"" + fixed(base_y) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = top * t / 4.0;
    const double y = y_of(v);
    out += "<line x1=\"" + fixed(kLeft - 4) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(kLeft) + "\" y2=\"" +
           fixed(y) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed(kLeft - 6) + "\" y=\"" + fixed(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + fixed(v) + "</text>\n";
  }

  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double x0 = kLeft + kGap / 2 + group * static_cast<double>(c);
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = series[s].values[c];
      const double y = y_of(v);
      out += "<rect x=\"" + fixed(x0 + kBar * static_cast<double>(s)) + "\" y=\"" + fixed(y) + "\" width=\"" +
             fixed(kBar) + "\" height=\"" + fixed(base_y - y) + "\" fill=\"" + escape(series[s].color) +
             "\"><title>" + escape(categories[c] + " " + series[s].name + " " + fixed(v, 6)) + "</title></rect>\n";
    }
    const double cx = x0 + kBar * static_cast<double>(series.size()) / 2;
    out += "<text x=\"" + fixed(cx) + "\" y=\"" + fixed(base_y + 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + escape(categories[c]) +
           "</text>\n";
  }

  // legend
  double lx = kLeft;
  for (const auto& s : series) {
    out += "<rect x=\"" + fixed(lx) + "\" y=\"" + fixed(height - 24) + "\" width=\"10\" height=\"10\" fill=\"" +
           escape(s.color) + "\"/>\n";
    out += "<text x=\"" + fixed(lx + 14) + "\" y=\"" + fixed(height - 15) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.name) + "</text>\n";
    lx += 150;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace trustconnect
