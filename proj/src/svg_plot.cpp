#include "ubss/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ubss::svg {
namespace {

constexpr double kWidth = 800.0;
constexpr double kPanelHeight = 140.0;
constexpr double kMargin = 40.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

void open_svg(std::ostringstream& os, double height, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(kWidth) << ' '
     << num(height) << "\" width=\"" << num(kWidth) << "\" height=\"" << num(height) << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(height)
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(title) << "</text>\n";
}

}  // namespace

std::string waveforms(const SignalMatrix& m, const std::string& title,
                      const std::vector<std::string>& labels) {
  const double height = 2 * kMargin + kPanelHeight * static_cast<double>(m.cols());
  std::ostringstream os;
  open_svg(os, height, title);
  const double plot_w = kWidth - 2 * kMargin;
  const double x_scale = m.rows() > 1 ? plot_w / static_cast<double>(m.rows() - 1) : 0.0;
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const double top = kMargin + kPanelHeight * static_cast<double>(k);
    const double mid = top + kPanelHeight / 2;
    double peak = 0.0;
    for (std::size_t t = 0; t < m.rows(); ++t) peak = std::max(peak, std::abs(m(t, k)));
    const double y_scale = peak > 0.0 ? (kPanelHeight / 2 - 10) / peak : 0.0;
    os << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(mid) << "\" x2=\""
       << num(kWidth - kMargin) << "\" y2=\"" << num(mid) << "\" stroke=\"#bbbbbb\"/>\n";
    const std::string label = k < labels.size() ? labels[k] : "ch" + std::to_string(k + 1);
    os << "<text x=\"4\" y=\"" << num(mid + 4) << "\" font-size=\"12\">" << escape(label)
       << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"";
    for (std::size_t t = 0; t < m.rows(); ++t) {
      os << (t ? " " : "") << num(kMargin + x_scale * static_cast<double>(t)) << ','
         << num(mid - y_scale * m(t, k));
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string bar_graph(const RatioHistogram& hist, const std::string& title) {
  const double height = 360.0;
  std::ostringstream os;
  open_svg(os, height, title);
  const double base = height - kMargin;
  os << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(base) << "\" x2=\""
     << num(kWidth - kMargin) << "\" y2=\"" << num(base) << "\" stroke=\"black\"/>\n";
  if (!hist.empty()) {
    std::uint64_t top = 0;
    for (const auto& [key, count] : hist.bins()) top = std::max(top, count);
    // Axis spans the bins holding at least 1% of the tallest bar; sparse
    // outlier ratios beyond that are not drawn.
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& [key, count] : hist.bins()) {
      if (100 * count < top) continue;
      hi = hist.ratio_of(key);
      if (first) lo = hi;
      first = false;
    }
    const double pad = hi > lo ? 0.05 * (hi - lo) : 0.5;
    lo -= pad;
    hi += pad;
    const double span = hi - lo;
    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = height - 2 * kMargin - 20;
    for (const auto& [key, count] : hist.bins()) {
      const double r = hist.ratio_of(key);
      if (r < lo || r > hi) continue;
      const double x = kMargin + plot_w * (hist.ratio_of(key) - lo) / span;
      const double h = plot_h * static_cast<double>(count) / static_cast<double>(top);
      os << "<rect x=\"" << num(x - 1.5) << "\" y=\"" << num(base - h)
         << "\" width=\"3\" height=\"" << num(h) << "\" fill=\"#9c3a1f\"/>\n";
    }
    char lo_txt[32], hi_txt[32];
    std::snprintf(lo_txt, sizeof lo_txt, "%.4f", lo);
    std::snprintf(hi_txt, sizeof hi_txt, "%.4f", hi);
    os << "<text x=\"" << num(kMargin) << "\" y=\"" << num(base + 16) << "\" font-size=\"11\">"
       << lo_txt << "</text>\n"
       << "<text x=\"" << num(kWidth - kMargin) << "\" y=\"" << num(base + 16)
       << "\" text-anchor=\"end\" font-size=\"11\">" << hi_txt << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ubss::svg
