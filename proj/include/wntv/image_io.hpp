#pragma once

#include <string>
#include <vector>

#include "wntv/image.hpp"

namespace wntv {

// Observation mask as stored on disk (P5, nonzero byte = observed).
struct MaskImage {
    int width = 0;
    int height = 0;
    std::vector<char> observed;  // row-major, nonzero = observed
};

// Binary netpbm IO, 8-bit with maxval 255: P5 for one channel, P6 for
// three. Readers accept '#' comments in the header and return buffers with
// a full mask; writers clamp to [0, 255] and round half up, so integer
// buffers round-trip exactly. Malformed headers, unsupported maxval and
// truncated payloads raise distinct IoErrors.
ImageBuffer read_image(const std::string& path);
void write_image(const ImageBuffer& image, const std::string& path);

MaskImage read_mask(const std::string& path);
void write_mask(const MaskImage& mask, const std::string& path);

// Installs the mask on an image; throws IoError when dimensions differ.
void apply_mask(ImageBuffer& image, const MaskImage& mask);

MaskImage mask_from_image(const ImageBuffer& image);

}  // namespace wntv
