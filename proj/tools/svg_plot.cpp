#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace robinlab::cli {

namespace {

constexpr double kWidth = 720;
constexpr double kPanelHeight = 300;
constexpr double kLeft = 90;
constexpr double kRight = 160;
constexpr double kTop = 40;
constexpr double kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (hi - lo < 1e-300) lo -= 0.5, hi += 0.5;
  }
};

void panel(std::ofstream& out, const Panel& p, double y0) {
  bool log_y = p.log_y;
  if (log_y)
    for (const auto& s : p.series)
      for (double v : s.y)
        if (std::isfinite(v) && v <= 0.0) log_y = false;
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };

  Range rx, ry;
  for (const auto& s : p.series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
        rx.add(s.x[i]);
        ry.add(ty(s.y[i]));
      }
  rx.pad();
  ry.pad();
  const double w = kWidth - kLeft - kRight;
  const double h = kPanelHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * w; };
  auto py = [&](double y) { return y0 + kTop + h - (y - ry.lo) / (ry.hi - ry.lo) * h; };

  out << "<text x=\"" << kLeft << "\" y=\"" << y0 + 24 << "\" font-size=\"15\">" << escape(p.title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << y0 + kTop << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const std::string prefix = log_y ? "1e" : "";
  for (int k = 0; k <= 4; ++k) {
    const double fx = rx.lo + (rx.hi - rx.lo) * k / 4.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * k / 4.0;
    out << "<text x=\"" << px(fx) << "\" y=\"" << y0 + kTop + h + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(fy) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
        << prefix << num(fy) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + w / 2 << "\" y=\"" << y0 + kPanelHeight - 8
      << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(p.x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << y0 + kTop + h / 2 << "\" font-size=\"12\" transform=\"rotate(-90 18 "
      << y0 + kTop + h / 2 << ")\" text-anchor=\"middle\">" << escape(p.y_label) << (log_y ? " (log10)" : "")
      << "</text>\n";

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* color = kColors[k % 4];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
        out << num(px(s.x[i])) << ',' << num(py(ty(s.y[i]))) << ' ';
    out << "\"/>\n";
    const double ly = y0 + kTop + 14 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << kLeft + w + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + w + 32 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + w + 38 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << escape(s.label)
        << "</text>\n";
  }
}

}  // namespace

void write_svg(const std::string& path, const std::vector<Panel>& panels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const double height = kPanelHeight * static_cast<double>(panels.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) panel(out, panels[k], kPanelHeight * static_cast<double>(k));
  out << "</svg>\n";
}

}  // namespace robinlab::cli
