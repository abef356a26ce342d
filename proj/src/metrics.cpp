#include "wntv/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wntv {

double psnr(const ImageBuffer& u, const ImageBuffer& u_gt) {
    validate_image(u);
    validate_image(u_gt);
    if (u.width != u_gt.width || u.height != u_gt.height || u.channels != u_gt.channels)
        throw std::invalid_argument("psnr: image shapes differ");
    const double mse = (u.values - u_gt.values).squaredNorm() /
                       static_cast<double>(u.values.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return -20.0 * std::log10(std::sqrt(mse) / 255.0);
}

std::string format_db(double value) {
    if (std::isnan(value)) return "na";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    out << value;
    return out.str();
}

std::string format_residual(double value) {
    if (std::isnan(value)) return "na";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out.setf(std::ios::scientific);
    out.precision(6);
    out << value;
    return out.str();
}

std::string format_metric_line(const std::string& run_id, const MetricRecord& r) {
    std::ostringstream out;
    out << "run=" << run_id << " cmd=" << r.command << " solver=" << r.solver;
    out << " cycle=";
    if (r.cycle >= 0) out << r.cycle; else out << "na";
    out << " channel=";
    if (r.channel >= 0) out << r.channel; else out << "na";
    out << " psnr=" << format_db(r.psnr_db);
    out << " bregman_residual=" << format_residual(r.bregman_residual);
    out << " wall_ms=";
    if (r.wall_ms >= 0) out << r.wall_ms; else out << "na";
    return out.str();
}

}  // namespace wntv
