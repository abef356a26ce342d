#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "wntv/image.hpp"

namespace wntv {

// Peak signal-to-noise ratio -20 log10(rms / 255), the root mean square
// taken over all pixels and channels. Identical images give +infinity.
double psnr(const ImageBuffer& u, const ImageBuffer& u_gt);

// Decibel / residual formatting used in metrics logs: "inf" for infinity,
// "na" for NaN (field not applicable), fixed six decimals otherwise.
std::string format_db(double value);
std::string format_residual(double value);

// One line of the metrics log. Negative cycle/channel and NaN values
// render as "na".
struct MetricRecord {
    std::string command;
    std::string solver;
    int cycle = -1;
    int channel = -1;
    double psnr_db = std::numeric_limits<double>::quiet_NaN();
    double bregman_residual = std::numeric_limits<double>::quiet_NaN();
    std::int64_t wall_ms = -1;
};

std::string format_metric_line(const std::string& run_id, const MetricRecord& record);

}  // namespace wntv
