// Copyright 2026 The sfsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sfsync/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace sfsync {

namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Panel {
  double x0, y0, w, h;
  double tmin, tmax, vmin, vmax;

  double px(double t) const { return x0 + (t - tmin) / (tmax - tmin) * w; }
  double py(double v) const { return y0 + h - (v - vmin) / (vmax - vmin) * h; }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string polyline(const Panel& p, const std::vector<double>& t,
                     const std::vector<double>& v, const std::vector<std::size_t>& idx,
                     const char* color, bool dashed) {
  std::string out = "<polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"1.2\"";
  if (dashed) out += " stroke-dasharray=\"6,4\"";
  out += " points=\"";
  for (std::size_t k : idx) {
    const double val = std::clamp(v[k], p.vmin, p.vmax);
    out += fmt("%.2f", p.px(t[k])) + "," + fmt("%.2f", p.py(val)) + " ";
  }
  out += "\"/>\n";
  return out;
}

std::string axes(const Panel& p, const std::string& title, bool log_axis) {
  std::string out;
  out += "<rect x=\"" + fmt("%.1f", p.x0) + "\" y=\"" + fmt("%.1f", p.y0) +
         "\" width=\"" + fmt("%.1f", p.w) + "\" height=\"" + fmt("%.1f", p.h) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
  out += "<text x=\"" + fmt("%.1f", p.x0) + "\" y=\"" + fmt("%.1f", p.y0 - 8) +
         "\" font-size=\"14\">" + title + "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double t = p.tmin + (p.tmax - p.tmin) * k / 4.0;
    out += "<text x=\"" + fmt("%.1f", p.px(t)) + "\" y=\"" + fmt("%.1f", p.y0 + p.h + 16) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + fmt("%g", t) + "</text>\n";
    const double v = p.vmin + (p.vmax - p.vmin) * k / 4.0;
    const std::string label = log_axis ? "1e" + fmt("%.0f", v) : fmt("%.3g", v);
    out += "<text x=\"" + fmt("%.1f", p.x0 - 6) + "\" y=\"" + fmt("%.1f", p.py(v) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + label + "</text>\n";
  }
  return out;
}

}  // namespace

std::string render_svg(const Trajectory& traj, const SvgOptions& opts) {
  const std::size_t n = traj.samples();
  const bool regulated = traj.has_reference();
  const double margin_l = 70, margin_t = 30, gap = 60;
  const double w = opts.width - margin_l - 20;
  const double h = opts.panel_height;
  const int height = static_cast<int>(margin_t + 2 * h + gap + 40);

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(opts.width) + "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (n < 2) return svg + "</svg>\n";

  std::vector<std::size_t> idx;
  const std::size_t stride = std::max<std::size_t>(1, (n + opts.max_points - 1) / opts.max_points);
  for (std::size_t k = 0; k < n; k += stride) idx.push_back(k);
  if (idx.back() != n - 1) idx.push_back(n - 1);

  const Eigen::Index agents = traj.outputs.cols();
  std::vector<std::vector<double>> series(static_cast<std::size_t>(agents));
  double vmin = 0.0, vmax = 0.0;
  bool first = true;
  auto grow = [&](double v) {
    if (!std::isfinite(v)) return;
    vmin = first ? v : std::min(vmin, v);
    vmax = first ? v : std::max(vmax, v);
    first = false;
  };
  for (Eigen::Index i = 0; i < agents; ++i) {
    auto& s = series[static_cast<std::size_t>(i)];
    s.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = traj.outputs(static_cast<Eigen::Index>(k), i);
      grow(s[k]);
    }
  }
  std::vector<double> ref;
  if (regulated) {
    ref.assign(traj.reference.data(), traj.reference.data() + n);
    for (double v : ref) grow(v);
  }
  if (vmax - vmin < 1e-12) {
    vmin -= 1.0;
    vmax += 1.0;
  }
  const double pad = 0.05 * (vmax - vmin);
  const double t0 = traj.times.front(), t1 = traj.times.back();
  const Panel top{margin_l, margin_t, w, h, t0, t1, vmin - pad, vmax + pad};
  svg += axes(top, regulated ? "outputs y_i and reference y_r" : "outputs y_i", false);
  for (Eigen::Index i = 0; i < agents; ++i)
    svg += polyline(top, traj.times, series[static_cast<std::size_t>(i)], idx,
                    kPalette[i % 10], false);
  if (regulated) svg += polyline(top, traj.times, ref, idx, "#000000", true);

  std::vector<double> err = regulated ? regulation_error(traj) : output_sync_error(traj);
  double emin = 0.0, emax = -12.0;
  for (double& e : err) {
    e = std::log10(std::max(e, 1e-12));
    emax = std::max(emax, e);
    emin = std::min(emin, e);
  }
  emin = std::floor(emin);
  emax = std::ceil(emax);
  if (emax <= emin) emax = emin + 1.0;
  const Panel bottom{margin_l, margin_t + h + gap, w, h, t0, t1, emin, emax};
  svg += axes(bottom, regulated ? "regulation error (log10)" : "synchronization error (log10)",
              true);
  svg += polyline(bottom, traj.times, err, idx, "#d62728", false);
  svg += "</svg>\n";
  return svg;
}

}  // namespace sfsync
