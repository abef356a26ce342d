#pragma once

#include <Eigen/Dense>
#include <vector>

namespace wntv {

// Dense raster plus an observation mask. Pixels are stored row by row;
// values(p, c) is channel c of pixel p = y * width + x. Values are plain
// doubles while processing; the [0, 255] range is enforced at write-back
// (image_from_function) and at file IO.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    Eigen::MatrixXd values;  // (width * height) x channels
    std::vector<char> mask;  // per pixel, nonzero = observed

    int pixel_count() const { return width * height; }
    int pixel_index(int x, int y) const { return y * width + x; }
    double at(int x, int y, int c) const { return values(pixel_index(x, y), c); }
    double& at(int x, int y, int c) { return values(pixel_index(x, y), c); }
    bool observed(int x, int y) const { return mask[pixel_index(x, y)] != 0; }
    int observed_count() const;
    bool fully_observed() const { return observed_count() == pixel_count(); }
};

// Zero-valued image with a full mask.
ImageBuffer make_image(int width, int height, int channels);

// Shape and finiteness checks; throws std::invalid_argument.
void validate_image(const ImageBuffer& image);

}  // namespace wntv
