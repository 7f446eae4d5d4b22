#ifndef BLEND_REPORT_HPP
#define BLEND_REPORT_HPP

#include "blend/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace blend {

inline std::string
emitCsv(const std::vector<MetricsReport>& reports)
{
  if (reports.empty()) {
    throw std::invalid_argument("no reports to emit");
  }
  std::string out = MetricsReport::csvHeader() + "\n";
  for (const auto& r : reports) {
    out += r.csvRow() + "\n";
  }
  return out;
}

inline std::string
emitTextTable(const std::vector<MetricsReport>& reports)
{
  if (reports.empty()) {
    throw std::invalid_argument("no reports to emit");
  }
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-24s %-8s %-12s %-6s %3s %5s %9s %8s %8s %8s %6s\n",
                "scenario", "profile", "mode", "algo", "bi", "gamma", "goodput", "tx_evts",
                "app_sent", "c_rcv", "rtx");
  out += buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf),
                  "%-24s %-8s %-12s %-6s %3u %5.1f %9.4f %8llu %8llu %8llu %6llu\n",
                  r.scenario.c_str(), r.profile.c_str(), r.mode.c_str(), r.algo.c_str(), r.bi,
                  r.gamma, r.goodputMbps, static_cast<unsigned long long>(r.linkTxEvents),
                  static_cast<unsigned long long>(r.appSent),
                  static_cast<unsigned long long>(r.cRcv), static_cast<unsigned long long>(r.rtx));
    out += buf;
  }
  return out;
}

namespace detail {

inline std::string
fmt(double v, const char* spec = "%.4f")
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

} // namespace detail

/** Static bar chart; one bar per report row. */
inline std::string
emitBarChartSvg(const std::vector<MetricsReport>& reports, const std::string& title,
                const std::string& yLabel,
                const std::function<double(const MetricsReport&)>& metric)
{
  if (reports.empty()) {
    throw std::invalid_argument("no reports to plot");
  }
  const int width = 640;
  const int height = 400;
  const int left = 70;
  const int bottom = 70;
  const int top = 40;
  const double plotW = width - left - 20;
  const double plotH = height - top - bottom;

  double maxV = 0;
  for (const auto& r : reports) {
    maxV = std::max(maxV, metric(r));
  }
  if (maxV <= 0) {
    maxV = 1;
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";
  svg += "<text x=\"16\" y=\"" + std::to_string(top + plotH / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " + std::to_string(top + int(plotH / 2)) + ")\">" +
         yLabel + "</text>\n";
  // axes
  svg += "<line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(top) + "\" x2=\"" +
         std::to_string(left) + "\" y2=\"" + std::to_string(top + int(plotH)) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(top + int(plotH)) +
         "\" x2=\"" + std::to_string(width - 20) + "\" y2=\"" + std::to_string(top + int(plotH)) +
         "\" stroke=\"black\"/>\n";
  // y ticks
  for (int i = 0; i <= 4; ++i) {
    double v = maxV * i / 4.0;
    int y = top + int(plotH - plotH * i / 4.0);
    svg += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" + std::to_string(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
           detail::fmt(v, "%.2f") + "</text>\n";
    svg += "<line x1=\"" + std::to_string(left - 3) + "\" y1=\"" + std::to_string(y) + "\" x2=\"" +
           std::to_string(left) + "\" y2=\"" + std::to_string(y) + "\" stroke=\"black\"/>\n";
  }

  const double slot = plotW / double(reports.size());
  const double barW = std::min(60.0, slot * 0.6);
  for (size_t i = 0; i < reports.size(); ++i) {
    double v = metric(reports[i]);
    double h = plotH * v / maxV;
    double x = left + slot * double(i) + (slot - barW) / 2;
    double y = top + plotH - h;
    svg += "<rect x=\"" + detail::fmt(x, "%.1f") + "\" y=\"" + detail::fmt(y, "%.1f") +
           "\" width=\"" + detail::fmt(barW, "%.1f") + "\" height=\"" + detail::fmt(h, "%.1f") +
           "\" fill=\"#4878a8\"/>\n";
    svg += "<text x=\"" + detail::fmt(x + barW / 2, "%.1f") + "\" y=\"" +
           detail::fmt(y - 4, "%.1f") +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
           detail::fmt(v, "%.2f") + "</text>\n";
    svg += "<text x=\"" + detail::fmt(x + barW / 2, "%.1f") + "\" y=\"" +
           std::to_string(top + int(plotH) + 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\" "
           "transform=\"rotate(30 " + detail::fmt(x + barW / 2, "%.0f") + " " +
           std::to_string(top + int(plotH) + 14) + ")\">" + reports[i].scenario + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

inline void
writeFile(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << content;
}

} // namespace blend

#endif // BLEND_REPORT_HPP
