// SPDX-License-Identifier: Apache-2.0
//
// CSV and SVG emitters for experiment results. Both are rendered to strings
// first so goldens can compare bytes without touching the filesystem.

#ifndef SMBEAM_REPORT_HPP
#define SMBEAM_REPORT_HPP

#include <string>
#include <vector>

#include "smbeam/harness.hpp"

namespace smbeam {

// Long format, one row per (snapshot, algorithm):
//   snapshot,algorithm,mean_sinr_db,cum_update_fraction
// Numeric fields use printf "%.6g". Rows ordered by snapshot, then by the
// algorithm order of `curves`.
std::string render_csv(const std::vector<SinrCurve>& curves);

// Self-contained SVG: SINR (dB) against snapshot index, one polyline per
// algorithm, legend and axis ticks included.
std::string render_plot_svg(const std::vector<SinrCurve>& curves);

// Render and write; throws std::runtime_error naming the path on failure.
void write_csv(const std::vector<SinrCurve>& curves, const std::string& path);
void write_plot_svg(const std::vector<SinrCurve>& curves, const std::string& path);

} // namespace smbeam

#endif
