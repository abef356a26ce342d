#include "wntv/patch_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wntv {

namespace {

// Mirror reflection about the boundary pixel: -1 -> 1, size -> size - 2.
// Valid for any offset when size > 1; a 1-wide axis collapses to index 0.
int reflect(int idx, int size) {
    if (size == 1) return 0;
    while (idx < 0 || idx >= size) {
        if (idx < 0) idx = -idx;
        if (idx >= size) idx = 2 * (size - 1) - idx;
    }
    return idx;
}

void check_channel(const ImageBuffer& image, int channel) {
    if (channel < 0 || channel >= image.channels)
        throw std::invalid_argument("channel " + std::to_string(channel) +
                                    " out of range for " + std::to_string(image.channels) +
                                    "-channel image");
}

void check_patch_alignment(const ImageBuffer& image, const PatchSet& patches) {
    if (patches.count() != image.pixel_count())
        throw std::invalid_argument("patch set has " + std::to_string(patches.count()) +
                                    " patches, image has " +
                                    std::to_string(image.pixel_count()) + " pixels");
}

}  // namespace

std::pair<double, double> semi_local_scales(const ImageBuffer& image) {
    validate_image(image);
    double max_abs = -1.0;
    for (int p = 0; p < image.pixel_count(); ++p) {
        if (!image.mask[p]) continue;
        for (int c = 0; c < image.channels; ++c)
            max_abs = std::max(max_abs, std::abs(image.values(p, c)));
    }
    if (max_abs < 0.0)
        throw std::invalid_argument("semi_local_scales: no observed pixel");
    return {3.0 * max_abs / image.width, 3.0 * max_abs / image.height};
}

PatchSet extract_patches(const ImageBuffer& image, const PatchConfig& config) {
    validate_image(image);
    if (config.s1 < 1 || config.s2 < 1 || config.s1 % 2 == 0 || config.s2 % 2 == 0)
        throw std::invalid_argument("patch sides must be odd and positive");
    if (config.s1 > 2 * image.width - 1 || config.s2 > 2 * image.height - 1)
        throw std::invalid_argument("patch does not fit the mirrored image");
    if (config.semi_local &&
        (!(config.lambda1 >= 0.0) || !(config.lambda2 >= 0.0) ||
         !std::isfinite(config.lambda1) || !std::isfinite(config.lambda2)))
        throw std::invalid_argument("semi-local scales must be finite and nonnegative");

    const int w = image.width, h = image.height, ch = image.channels;
    const int half1 = (config.s1 - 1) / 2, half2 = (config.s2 - 1) / 2;
    const int dim = config.s1 * config.s2 * ch + (config.semi_local ? 2 : 0);

    PatchSet set;
    set.cloud.points.resize(image.pixel_count(), dim);
    set.pixel_of.resize(image.pixel_count(), 2);

    std::vector<int> rx(config.s1), ry(config.s2);
    for (int y = 0; y < h; ++y) {
        for (int dy = -half2; dy <= half2; ++dy) ry[dy + half2] = reflect(y + dy, h);
        for (int x = 0; x < w; ++x) {
            for (int dx = -half1; dx <= half1; ++dx) rx[dx + half1] = reflect(x + dx, w);
            const int p = y * w + x;
            set.pixel_of(p, 0) = x;
            set.pixel_of(p, 1) = y;
            int col = 0;
            for (int dy = 0; dy < config.s2; ++dy)
                for (int dx = 0; dx < config.s1; ++dx) {
                    const int q = ry[dy] * w + rx[dx];
                    for (int c = 0; c < ch; ++c)
                        set.cloud.points(p, col++) = image.values(q, c);
                }
            if (config.semi_local) {
                set.cloud.points(p, col++) = config.lambda1 * x;
                set.cloud.points(p, col++) = config.lambda2 * y;
            }
        }
    }
    return set;
}

std::pair<Eigen::VectorXd, LabelConstraint> function_from_image(const ImageBuffer& image,
                                                                const PatchSet& patches,
                                                                int channel) {
    validate_image(image);
    check_channel(image, channel);
    check_patch_alignment(image, patches);

    Eigen::VectorXd u(patches.count());
    std::vector<int> observed;
    for (int p = 0; p < patches.count(); ++p) {
        const int pix = image.pixel_index(patches.pixel_of(p, 0), patches.pixel_of(p, 1));
        u[p] = image.values(pix, channel);
        if (image.mask[pix]) observed.push_back(p);
    }
    Eigen::VectorXd g(static_cast<int>(observed.size()));
    for (int s = 0; s < g.size(); ++s) g[s] = u[observed[s]];
    return {std::move(u), make_label_constraint(observed, g, patches.count())};
}

ImageBuffer image_from_function(const Eigen::VectorXd& u, const PatchSet& patches,
                                int channel, const ImageBuffer& target) {
    validate_image(target);
    check_channel(target, channel);
    check_patch_alignment(target, patches);
    if (u.size() != patches.count())
        throw std::invalid_argument("function length does not match patch count");

    ImageBuffer out = target;
    for (int p = 0; p < patches.count(); ++p) {
        const int pix = target.pixel_index(patches.pixel_of(p, 0), patches.pixel_of(p, 1));
        if (!target.mask[pix])
            out.values(pix, channel) = std::clamp(u[p], 0.0, 255.0);
    }
    return out;
}

}  // namespace wntv
