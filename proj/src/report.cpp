// SPDX-License-Identifier: Apache-2.0

#include "smbeam/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace smbeam {

namespace {

std::size_t checked_length(const std::vector<SinrCurve>& curves, const char* what) {
  if (curves.empty()) throw std::invalid_argument(std::string(what) + ": no curves");
  const std::size_t n = curves.front().mean_sinr_db.size();
  for (const SinrCurve& c : curves)
    if (c.mean_sinr_db.size() != n || c.cum_update_fraction.size() != n)
      throw std::invalid_argument(std::string(what) + ": curve length mismatch");
  if (n == 0) throw std::invalid_argument(std::string(what) + ": empty curves");
  return n;
}

void append_g(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  out += buf;
}

} // namespace

std::string render_csv(const std::vector<SinrCurve>& curves) {
  const std::size_t n = checked_length(curves, "render_csv");
  std::string out = "snapshot,algorithm,mean_sinr_db,cum_update_fraction\n";
  for (std::size_t i = 0; i < n; ++i)
    for (const SinrCurve& c : curves) {
      out += std::to_string(i + 1);
      out += ',';
      out += c.algorithm;
      out += ',';
      append_g(out, c.mean_sinr_db[i]);
      out += ',';
      append_g(out, c.cum_update_fraction[i]);
      out += '\n';
    }
  return out;
}

namespace {

constexpr double kW = 960, kH = 560;
constexpr double kLeft = 70, kRight = 200, kTop = 40, kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

double nice_step(double range, int target_ticks) {
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

void appendf(std::string& out, const char* fmt, ...)
    __attribute__((format(printf, 2, 3)));

void appendf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  out += buf;
}

} // namespace

std::string render_plot_svg(const std::vector<SinrCurve>& curves) {
  const std::size_t n = checked_length(curves, "render_plot_svg");

  double ylo = curves[0].mean_sinr_db[0], yhi = ylo;
  for (const SinrCurve& c : curves)
    for (double v : c.mean_sinr_db) {
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  if (yhi - ylo < 1e-9) {
    ylo -= 1.0;
    yhi += 1.0;
  }
  const double ypad = 0.05 * (yhi - ylo);
  ylo -= ypad;
  yhi += ypad;

  double xlo = 1.0, xhi = static_cast<double>(n);
  if (n == 1) {
    xlo = 0.0;
    xhi = 2.0;
  }

  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * plot_w; };
  const auto py = [&](double y) { return kTop + (yhi - y) / (yhi - ylo) * plot_h; };

  std::string svg;
  appendf(svg,
          "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
          "viewBox=\"0 0 %g %g\" font-family=\"sans-serif\" font-size=\"13\">\n",
          kW, kH, kW, kH);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // gridlines and ticks
  const double ystep = nice_step(yhi - ylo, 6);
  for (double v = std::ceil(ylo / ystep) * ystep; v <= yhi + 1e-9; v += ystep) {
    const double y = py(v);
    appendf(svg, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                 "stroke=\"#dddddd\"/>\n", kLeft, y, kLeft + plot_w, y);
    appendf(svg, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%g</text>\n",
            kLeft - 8, y + 4, v);
  }
  const double xstep = std::max(1.0, nice_step(xhi - xlo, 8));
  for (double v = std::ceil(xlo / xstep) * xstep; v <= xhi + 1e-9; v += xstep) {
    const double x = px(v);
    appendf(svg, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                 "stroke=\"#dddddd\"/>\n", x, kTop, x, kTop + plot_h);
    appendf(svg, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%g</text>\n",
            x, kTop + plot_h + 18, v);
  }
  appendf(svg, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
               "fill=\"none\" stroke=\"black\"/>\n", kLeft, kTop, plot_w, plot_h);
  appendf(svg, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">snapshot</text>\n",
          kLeft + plot_w / 2, kH - 18);
  appendf(svg, "<text x=\"20\" y=\"%.2f\" text-anchor=\"middle\" "
               "transform=\"rotate(-90 20 %.2f)\">mean output SINR (dB)</text>\n",
          kTop + plot_h / 2, kTop + plot_h / 2);

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % kPaletteSize];
    if (n == 1) {
      appendf(svg, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n",
              px(1.0), py(curves[c].mean_sinr_db[0]), color);
    } else {
      svg += "<polyline fill=\"none\" stroke=\"";
      svg += color;
      svg += "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        appendf(svg, "%.2f,%.2f", px(static_cast<double>(i + 1)),
                py(curves[c].mean_sinr_db[i]));
        if (i + 1 < n) svg += ' ';
      }
      svg += "\"/>\n";
    }
    const double ly = kTop + 10 + 22 * static_cast<double>(c);
    appendf(svg, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                 "stroke=\"%s\" stroke-width=\"2\"/>\n",
            kLeft + plot_w + 14, ly, kLeft + plot_w + 40, ly, color);
    appendf(svg, "<text x=\"%.2f\" y=\"%.2f\">%s</text>\n", kLeft + plot_w + 46,
            ly + 4, xml_escape(curves[c].algorithm).c_str());
  }
  svg += "</svg>\n";
  return svg;
}

namespace {

void write_text(const std::string& text, const std::string& path, const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(std::string(what) + ": cannot open '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(std::string(what) + ": write failed for '" + path + "'");
}

} // namespace

void write_csv(const std::vector<SinrCurve>& curves, const std::string& path) {
  write_text(render_csv(curves), path, "write_csv");
}

void write_plot_svg(const std::vector<SinrCurve>& curves, const std::string& path) {
  write_text(render_plot_svg(curves), path, "write_plot_svg");
}

} // namespace smbeam
