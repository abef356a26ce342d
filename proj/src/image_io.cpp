#include "wntv/image_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "wntv/errors.hpp"

namespace wntv {

namespace {

// Header fields are separated by whitespace; '#' starts a comment that
// runs to end of line.
int next_header_int(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        throw IoError(path + ": malformed netpbm header");
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 30) throw IoError(path + ": malformed netpbm header");
        c = in.get();
    }
    if (c != EOF) in.unget();
    return static_cast<int>(value);
}

struct PnmHeader {
    int channels = 0;
    int width = 0;
    int height = 0;
};

PnmHeader read_header(std::istream& in, const std::string& path) {
    char p = 0, kind = 0;
    in.get(p);
    in.get(kind);
    if (!in || p != 'P' || (kind != '5' && kind != '6'))
        throw IoError(path + ": malformed netpbm header (expected P5 or P6)");
    PnmHeader h;
    h.channels = kind == '5' ? 1 : 3;
    h.width = next_header_int(in, path);
    h.height = next_header_int(in, path);
    const int maxval = next_header_int(in, path);
    if (h.width < 1 || h.height < 1)
        throw IoError(path + ": malformed netpbm header (bad dimensions)");
    if (maxval != 255)
        throw IoError(path + ": unsupported depth, maxval " + std::to_string(maxval) +
                      " (only 255)");
    // Exactly one whitespace byte separates the header from the payload.
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep))
        throw IoError(path + ": malformed netpbm header");
    return h;
}

std::vector<std::uint8_t> read_payload(std::istream& in, const std::string& path,
                                       size_t count) {
    std::vector<std::uint8_t> bytes(count);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
    if (static_cast<size_t>(in.gcount()) != count)
        throw IoError(path + ": truncated payload, expected " + std::to_string(count) +
                      " bytes, got " + std::to_string(in.gcount()));
    return bytes;
}

std::uint8_t to_byte(double v) {
    if (!(v > 0.0)) return 0;  // catches NaN as well
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

}  // namespace

ImageBuffer read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    const PnmHeader h = read_header(in, path);
    const size_t count = static_cast<size_t>(h.width) * h.height * h.channels;
    const std::vector<std::uint8_t> bytes = read_payload(in, path, count);

    ImageBuffer img = make_image(h.width, h.height, h.channels);
    size_t pos = 0;
    for (int p = 0; p < img.pixel_count(); ++p)
        for (int c = 0; c < h.channels; ++c)
            img.values(p, c) = static_cast<double>(bytes[pos++]);
    return img;
}

void write_image(const ImageBuffer& image, const std::string& path) {
    validate_image(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << (image.channels == 1 ? "P5\n" : "P6\n")
        << image.width << ' ' << image.height << "\n255\n";
    std::vector<std::uint8_t> bytes;
    bytes.reserve(static_cast<size_t>(image.pixel_count()) * image.channels);
    for (int p = 0; p < image.pixel_count(); ++p)
        for (int c = 0; c < image.channels; ++c)
            bytes.push_back(to_byte(image.values(p, c)));
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path + ": write failed");
}

MaskImage read_mask(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    const PnmHeader h = read_header(in, path);
    if (h.channels != 1)
        throw IoError(path + ": masks must be single-channel (P5)");
    const size_t count = static_cast<size_t>(h.width) * h.height;
    const std::vector<std::uint8_t> bytes = read_payload(in, path, count);

    MaskImage mask;
    mask.width = h.width;
    mask.height = h.height;
    mask.observed.resize(count);
    for (size_t i = 0; i < count; ++i)
        mask.observed[i] = bytes[i] != 0 ? 1 : 0;
    return mask;
}

void write_mask(const MaskImage& mask, const std::string& path) {
    if (mask.width < 1 || mask.height < 1 ||
        mask.observed.size() != static_cast<size_t>(mask.width) * mask.height)
        throw std::invalid_argument("mask dimensions do not match its data");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
    std::vector<std::uint8_t> bytes(mask.observed.size());
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.observed[i] ? 255 : 0;
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path + ": write failed");
}

void apply_mask(ImageBuffer& image, const MaskImage& mask) {
    if (mask.width != image.width || mask.height != image.height)
        throw IoError("mask is " + std::to_string(mask.width) + "x" +
                      std::to_string(mask.height) + " but the image is " +
                      std::to_string(image.width) + "x" + std::to_string(image.height));
    image.mask = mask.observed;
}

MaskImage mask_from_image(const ImageBuffer& image) {
    MaskImage mask;
    mask.width = image.width;
    mask.height = image.height;
    mask.observed = image.mask;
    return mask;
}

}  // namespace wntv
