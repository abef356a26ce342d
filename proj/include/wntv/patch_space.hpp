#pragma once

#include <Eigen/Dense>
#include <utility>

#include "wntv/image.hpp"
#include "wntv/labels.hpp"
#include "wntv/point_cloud.hpp"

namespace wntv {

struct PatchConfig {
    int s1 = 11;              // patch width, odd
    int s2 = 11;              // patch height, odd
    bool semi_local = true;   // append scaled pixel coordinates
    double lambda1 = 0.0;     // scale for the x coordinate
    double lambda2 = 0.0;     // scale for the y coordinate
};

// One patch per pixel, in pixel order: patch p is centered at
// (pixel_of(p, 0), pixel_of(p, 1)) = (x, y) with p = y * width + x.
struct PatchSet {
    PointCloud cloud;
    Eigen::MatrixXi pixel_of;  // count x 2, columns (x, y)

    int count() const { return cloud.n(); }
};

// Coordinate scales 3 max|f_S| / width and 3 max|f_S| / height, the
// maximum taken over observed pixels across all channels. Throws when no
// pixel is observed.
std::pair<double, double> semi_local_scales(const ImageBuffer& image);

// Builds the patch cloud: for every pixel the s1 x s2 neighborhood,
// flattened row by row with channels interleaved per pixel, boundaries
// mirror-reflected about the edge pixel (index -1 maps to 1). With
// config.semi_local the coordinates (lambda1 * x, lambda2 * y) are
// appended, so the point dimension is s1 * s2 * channels + 2.
PatchSet extract_patches(const ImageBuffer& image, const PatchConfig& config);

// Function over patches: u(p) = center-pixel intensity of the channel;
// the label constraint pins the patches whose center pixel is observed.
std::pair<Eigen::VectorXd, LabelConstraint> function_from_image(const ImageBuffer& image,
                                                                const PatchSet& patches,
                                                                int channel);

// Writes u back through the center-pixel correspondence: unobserved pixels
// of target get clamp(u, 0, 255) in the given channel, observed pixels are
// returned untouched.
ImageBuffer image_from_function(const Eigen::VectorXd& u, const PatchSet& patches,
                                int channel, const ImageBuffer& target);

}  // namespace wntv
