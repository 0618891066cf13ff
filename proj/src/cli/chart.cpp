#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "pred/cli/report.hpp"
#include "pred/error.hpp"

namespace pred::cli {

namespace {

constexpr double kBarWidth = 28.0;
constexpr double kGroupGap = 36.0;
constexpr double kLeft = 70.0;
constexpr double kTop = 50.0;
constexpr double kPlotHeight = 260.0;
constexpr std::array<const char*, 8> kPalette{"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                                              "#8172b3", "#937860", "#da8bc3", "#8c8c8c"};

std::string xml_escape(std::string_view s) {
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

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

std::string render_chart(const std::vector<ChartGroup>& groups, const std::string& title) {
  std::size_t bars = 0;
  for (const auto& g : groups) bars += g.bars.size();
  if (bars == 0) throw OutputError("nothing to chart");

  double lo = 0.0, hi = 0.0;
  for (const auto& g : groups) {
    for (const auto& b : g.bars) {
      const double m = finite_or_zero(b.mean), s = finite_or_zero(b.sem);
      lo = std::min(lo, m - s);
      hi = std::max(hi, m + s);
    }
  }
  if (hi - lo <= 0.0) hi = lo + 1.0;
  const double pad = 0.12 * (hi - lo);
  hi += pad;
  if (lo < 0.0) lo -= pad;
  const auto y_of = [&](double v) { return kTop + (hi - v) / (hi - lo) * kPlotHeight; };

  double width = kLeft + kGroupGap;
  for (const auto& g : groups) width += static_cast<double>(g.bars.size()) * kBarWidth + kGroupGap;
  const double height = kTop + kPlotHeight + 90.0;

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.1f}\" height=\"{:.1f}\" "
      "viewBox=\"0 0 {:.1f} {:.1f}\" font-family=\"sans-serif\" font-size=\"11\">\n",
      width, height, width, height);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"white\"/>\n", width, height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     width / 2.0, xml_escape(title));

  // Axis with five ticks.
  svg += fmt::format("<line class=\"axis\" x1=\"{0:.3f}\" y1=\"{1:.3f}\" x2=\"{0:.3f}\" y2=\"{2:.3f}\" stroke=\"black\"/>\n",
                     kLeft, kTop, kTop + kPlotHeight);
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    const double y = y_of(v);
    svg += fmt::format("<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"black\"/>\n",
                       kLeft - 4.0, y, kLeft, y);
    svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"end\">{:.3g}</text>\n", kLeft - 6.0, y + 4.0, v);
  }
  const double y0 = y_of(0.0);
  svg += fmt::format("<line class=\"zero\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"#444\"/>\n",
                     kLeft, y0, width - kGroupGap / 2.0, y0);
  svg += fmt::format("<text x=\"16\" y=\"{:.3f}\" transform=\"rotate(-90 16 {:.3f})\" text-anchor=\"middle\">"
                     "loglik gain (nats/obs)</text>\n",
                     kTop + kPlotHeight / 2.0, kTop + kPlotHeight / 2.0);

  double x = kLeft + kGroupGap;
  for (const auto& g : groups) {
    const double group_w = static_cast<double>(g.bars.size()) * kBarWidth;
    for (std::size_t i = 0; i < g.bars.size(); ++i) {
      const auto& b = g.bars[i];
      const double m = finite_or_zero(b.mean), s = finite_or_zero(b.sem);
      const double bx = x + static_cast<double>(i) * kBarWidth;
      const double top = std::min(y_of(m), y0);
      const double h = std::abs(y_of(m) - y0);
      svg += fmt::format(
          "<rect class=\"bar\" data-group=\"{}\" data-label=\"{}\" x=\"{:.3f}\" y=\"{:.3f}\" "
          "width=\"{:.3f}\" height=\"{:.3f}\" fill=\"{}\"/>\n",
          xml_escape(g.name), xml_escape(b.label), bx + 2.0, top, kBarWidth - 4.0, h,
          kPalette[i % kPalette.size()]);
      const double cx = bx + kBarWidth / 2.0;
      if (s > 0.0) {
        svg += fmt::format("<line class=\"sem\" x1=\"{0:.3f}\" y1=\"{1:.3f}\" x2=\"{0:.3f}\" y2=\"{2:.3f}\" stroke=\"black\"/>\n",
                           cx, y_of(m + s), y_of(m - s));
      }
      if (b.significant) {
        svg += fmt::format("<text class=\"star\" x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"middle\" font-size=\"14\">*</text>\n",
                           cx, std::min(y_of(m + s), y0) - 4.0);
      }
    }
    svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"middle\">{}</text>\n", x + group_w / 2.0,
                       kTop + kPlotHeight + 18.0, xml_escape(g.name));
    x += group_w + kGroupGap;
  }

  // Legend from the first group's bar labels.
  const auto& legend = groups.front().bars.empty() ? groups.back().bars : groups.front().bars;
  double lx = kLeft;
  const double ly = kTop + kPlotHeight + 44.0;
  for (std::size_t i = 0; i < legend.size(); ++i) {
    svg += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", lx, ly,
                       kPalette[i % kPalette.size()]);
    svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\">{}</text>\n", lx + 14.0, ly + 9.0, xml_escape(legend[i].label));
    lx += 24.0 + 7.0 * static_cast<double>(legend[i].label.size());
  }
  svg += "</svg>\n";
  return svg;
}

void emit_chart(const std::vector<ChartGroup>& groups, const std::string& title, const fs::path& path) {
  const std::string svg = render_chart(groups, title);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << svg;
  out.flush();
  if (!out) throw OutputError("failed writing " + path.string());
}

}  // namespace pred::cli
