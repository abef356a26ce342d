#pragma once

#include <cstdint>
#include <vector>

#include "wntv/image.hpp"
#include "wntv/image_io.hpp"
#include "wntv/metrics.hpp"
#include "wntv/patch_space.hpp"
#include "wntv/solvers.hpp"

namespace wntv {

struct InpaintOptions {
    int outer_iters = 10;  // patch-set / graph rebuild cycles
    std::uint64_t rng_seed = 0;
    SolverKind solver = SolverKind::WNTV;
    SolverOptions solver_options;
    PatchConfig patch_config;  // lambda1/2 recomputed from the observed input when semi_local
    int k_sparsify = 50;
    int r_sigma = 20;
};

struct ColorizeOptions {
    SolverKind solver = SolverKind::WNTV;
    SolverOptions solver_options;
    PatchConfig patch_config;
    int k_sparsify = 50;
    int r_sigma = 20;
};

// Unobserved pixels replaced by uniform values in [0, 255); observed
// pixels untouched. Deterministic per seed.
ImageBuffer random_fill_init(const ImageBuffer& image, std::uint64_t rng_seed);

// Exactly round(rate * width * height) observed pixels, drawn uniformly
// without replacement. rate in (0, 1]; throws when rounding leaves zero.
MaskImage subsample_mask(int width, int height, double rate, std::uint64_t rng_seed);

// Iterative patch-graph inpainting: per cycle, extract patches from the
// current image, build the weight graph, interpolate each channel with
// labels at the observed pixels, write the result back, repeat. The split
// variables reset every cycle since the graph changes. A fully observed
// image is returned unchanged with no solve. With `truth` given, a PSNR
// per (cycle, channel) is appended to `metrics`.
ImageBuffer inpaint(const ImageBuffer& image, const InpaintOptions& opts,
                    const ImageBuffer* truth = nullptr,
                    std::vector<MetricRecord>* metrics = nullptr);

// Color propagation from sparse samples over the gray image's patch graph:
// one graph build, three independent channel interpolations. `gray` must be
// single-channel and fully observed; `color_samples` carries the sparse
// mask and sample values, which are preserved exactly.
ImageBuffer colorize(const ImageBuffer& gray, const ImageBuffer& color_samples,
                     const ColorizeOptions& opts, const ImageBuffer* truth = nullptr,
                     std::vector<MetricRecord>* metrics = nullptr);

}  // namespace wntv
