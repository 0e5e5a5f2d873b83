#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pdslab/csv.hpp"
#include "pdslab/errors.hpp"

namespace pdslab {

/// One named curve; xs and ys are parallel.
struct SvgSeries {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct SvgOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 860;
  int height = 520;
};

namespace detail {

inline void append_fmt(std::string& out, const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  out += buf;
}

inline void xml_escape_into(std::string& out, const std::string& s) {
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out.push_back(c);
  }
}

}  // namespace detail

/// Self-contained line chart: exactly one <polyline> per series, axes and
/// legend built from <line>/<text>, no external assets. Optional log-10 x.
[[nodiscard]] inline std::string format_svg(const std::vector<SvgSeries>& series, const SvgOptions& opts = {}) {
  require(!series.empty(), ErrorCode::argument, "chart needs at least one series");
  for (const SvgSeries& s : series) {
    require(s.xs.size() == s.ys.size(), ErrorCode::dimension_mismatch,
            "series '" + s.name + "' has mismatched xs/ys lengths");
    require(!s.xs.empty(), ErrorCode::argument, "series '" + s.name + "' is empty");
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      require(std::isfinite(s.xs[i]) && std::isfinite(s.ys[i]), ErrorCode::argument,
              "series '" + s.name + "' has a non-finite point");
      require(!opts.log_x || s.xs[i] > 0.0, ErrorCode::argument,
              "log-x chart needs x > 0 in series '" + s.name + "'");
    }
  }

  const auto tx = [&](double x) { return opts.log_x ? std::log10(x) : x; };
  double xlo = tx(series[0].xs[0]), xhi = xlo, ylo = series[0].ys[0], yhi = ylo;
  for (const SvgSeries& s : series)
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      xlo = std::min(xlo, tx(s.xs[i]));
      xhi = std::max(xhi, tx(s.xs[i]));
      ylo = std::min(ylo, s.ys[i]);
      yhi = std::max(yhi, s.ys[i]);
    }
  if (xlo == xhi) {
    xlo -= 0.5;
    xhi += 0.5;
  }
  if (ylo == yhi) {
    ylo -= 0.5;
    yhi += 0.5;
  }

  const double ml = 70.0, mr = 20.0, mt = opts.title.empty() ? 20.0 : 44.0, mb = 56.0;
  const double pw = opts.width - ml - mr, ph = opts.height - mt - mb;
  const auto px = [&](double x) { return ml + (tx(x) - xlo) / (xhi - xlo) * pw; };
  const auto py = [&](double y) { return mt + ph - (y - ylo) / (yhi - ylo) * ph; };

  static const char* kPalette[] = {"#4878cf", "#ee854a", "#6acc65", "#d65f5f",
                                   "#956cb4", "#8c613c", "#dc7ec0", "#797979"};
  constexpr int kPaletteSize = 8;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opts.width) + "\" height=\"" +
         std::to_string(opts.height) + "\" viewBox=\"0 0 " + std::to_string(opts.width) + " " +
         std::to_string(opts.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    svg += "<text x=\"" + std::to_string(opts.width / 2) +
           "\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">";
    detail::xml_escape_into(svg, opts.title);
    svg += "</text>\n";
  }

  // Frame and ticks. Tick labels show original-scale values.
  char coord[160];
  std::snprintf(coord, sizeof coord,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", ml, mt + ph,
                ml + pw, mt + ph);
  svg += coord;
  std::snprintf(coord, sizeof coord,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", ml, mt, ml,
                mt + ph);
  svg += coord;
  constexpr int kTicks = 5;
  for (int t = 0; t < kTicks; ++t) {
    const double f = static_cast<double>(t) / (kTicks - 1);
    const double gx = ml + f * pw, gy = mt + ph - f * ph;
    const double xv = xlo + f * (xhi - xlo), yv = ylo + f * (yhi - ylo);
    std::snprintf(coord, sizeof coord,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", gx, mt + ph,
                  gx, mt + ph + 5);
    svg += coord;
    std::snprintf(coord, sizeof coord,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"11\">",
                  gx, mt + ph + 18);
    svg += coord;
    detail::append_fmt(svg, "%.4g", opts.log_x ? std::pow(10.0, xv) : xv);
    svg += "</text>\n";
    std::snprintf(coord, sizeof coord,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", ml - 5, gy, ml,
                  gy);
    svg += coord;
    std::snprintf(coord, sizeof coord,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"11\">",
                  ml - 8, gy + 4);
    svg += coord;
    detail::append_fmt(svg, "%.4g", yv);
    svg += "</text>\n";
  }
  if (!opts.x_label.empty()) {
    std::snprintf(coord, sizeof coord,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"13\">",
                  ml + pw / 2, mt + ph + 40);
    svg += coord;
    detail::xml_escape_into(svg, opts.x_label);
    svg += "</text>\n";
  }
  if (!opts.y_label.empty()) {
    std::snprintf(coord, sizeof coord,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"13\" transform=\"rotate(-90 %.2f %.2f)\">",
                  18.0, mt + ph / 2, 18.0, mt + ph / 2);
    svg += coord;
    detail::xml_escape_into(svg, opts.y_label);
    svg += "</text>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % kPaletteSize];
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[si].xs.size(); ++i) {
      std::snprintf(coord, sizeof coord, i == 0 ? "%.2f" : " %.2f", px(series[si].xs[i]));
      svg += coord;
      std::snprintf(coord, sizeof coord, ",%.2f", py(series[si].ys[i]));
      svg += coord;
    }
    svg += "\"/>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % kPaletteSize];
    const double lx = ml + pw - 160.0, ly = mt + 14.0 + 18.0 * static_cast<double>(si);
    std::snprintf(coord, sizeof coord,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-width=\"1.5\"/>\n",
                  lx, ly, lx + 24, ly, color);
    svg += coord;
    std::snprintf(coord, sizeof coord,
                  "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\">", lx + 30, ly + 4);
    svg += coord;
    detail::xml_escape_into(svg, series[si].name);
    svg += "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

inline void emit_svg(const std::vector<SvgSeries>& series, const std::string& path, const SvgOptions& opts = {}) {
  write_text_file(path, format_svg(series, opts));
}

}  // namespace pdslab
