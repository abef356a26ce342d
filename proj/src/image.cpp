#include "wntv/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace wntv {

int ImageBuffer::observed_count() const {
    return static_cast<int>(std::count_if(mask.begin(), mask.end(),
                                          [](char m) { return m != 0; }));
}

ImageBuffer make_image(int width, int height, int channels) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("image dimensions must be positive");
    if (channels != 1 && channels != 3)
        throw std::invalid_argument("channel count must be 1 or 3");
    ImageBuffer img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.values = Eigen::MatrixXd::Zero(width * height, channels);
    img.mask.assign(static_cast<size_t>(width) * height, 1);
    return img;
}

void validate_image(const ImageBuffer& image) {
    if (image.width < 1 || image.height < 1)
        throw std::invalid_argument("image dimensions must be positive");
    if (image.channels != 1 && image.channels != 3)
        throw std::invalid_argument("channel count must be 1 or 3");
    const int npix = image.pixel_count();
    if (image.values.rows() != npix || image.values.cols() != image.channels)
        throw std::invalid_argument("image value matrix is " +
                                    std::to_string(image.values.rows()) + "x" +
                                    std::to_string(image.values.cols()) + ", expected " +
                                    std::to_string(npix) + "x" +
                                    std::to_string(image.channels));
    if (static_cast<int>(image.mask.size()) != npix)
        throw std::invalid_argument("mask size does not match pixel count");
    if (!image.values.allFinite())
        throw std::invalid_argument("image contains non-finite values");
}

}  // namespace wntv
