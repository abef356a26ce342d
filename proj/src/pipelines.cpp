#include "wntv/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "wntv/errors.hpp"
#include "wntv/rng.hpp"
#include "wntv/weight_graph.hpp"

namespace wntv {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
        .count();
}

// Graph construction over patch clouds names points by patch index; retag
// degenerate-bandwidth errors with the pixel behind the patch.
SparseWeightGraph build_patch_graph(const PatchSet& patches, int k_sparsify, int r_sigma) {
    try {
        return build_weight_graph(patches.cloud, k_sparsify, r_sigma);
    } catch (const GraphError& e) {
        if (e.point < 0) throw;
        const int x = patches.pixel_of(e.point, 0);
        const int y = patches.pixel_of(e.point, 1);
        throw GraphError(std::string(e.what()) + " (patch centered at pixel x=" +
                             std::to_string(x) + ", y=" + std::to_string(y) + ")",
                         e.point);
    }
}

double last_residual(const SplitBregmanState& state) {
    return state.residual_history.empty() ? std::numeric_limits<double>::quiet_NaN()
                                          : state.residual_history.back();
}

void push_record(std::vector<MetricRecord>* metrics, const char* command,
                 SolverKind solver, int cycle, int channel, double psnr_db,
                 double residual, std::int64_t wall_ms) {
    if (!metrics) return;
    MetricRecord r;
    r.command = command;
    r.solver = to_string(solver);
    r.cycle = cycle;
    r.channel = channel;
    r.psnr_db = psnr_db;
    r.bregman_residual = residual;
    r.wall_ms = wall_ms;
    metrics->push_back(r);
}

}  // namespace

ImageBuffer random_fill_init(const ImageBuffer& image, std::uint64_t rng_seed) {
    validate_image(image);
    ImageBuffer out = image;
    std::mt19937_64 gen(rng_seed);
    for (int p = 0; p < out.pixel_count(); ++p) {
        if (out.mask[p]) continue;
        for (int c = 0; c < out.channels; ++c)
            out.values(p, c) = 255.0 * unit_double(gen);
    }
    return out;
}

MaskImage subsample_mask(int width, int height, double rate, std::uint64_t rng_seed) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("mask dimensions must be positive");
    if (!(rate > 0.0) || !(rate <= 1.0))
        throw std::invalid_argument("subsample rate must lie in (0, 1]");
    const int npix = width * height;
    const int count = static_cast<int>(std::llround(rate * npix));
    if (count == 0)
        throw std::invalid_argument("subsample rate " + std::to_string(rate) +
                                    " keeps zero of " + std::to_string(npix) + " pixels");

    MaskImage mask;
    mask.width = width;
    mask.height = height;
    mask.observed.assign(npix, 0);
    std::mt19937_64 gen(rng_seed);
    for (int p : sample_without_replacement(npix, count, gen)) mask.observed[p] = 1;
    return mask;
}

ImageBuffer inpaint(const ImageBuffer& image, const InpaintOptions& opts,
                    const ImageBuffer* truth, std::vector<MetricRecord>* metrics) {
    validate_image(image);
    if (opts.outer_iters < 1)
        throw std::invalid_argument("outer_iters must be at least 1");
    if (image.observed_count() == 0)
        throw std::invalid_argument("inpaint needs at least one observed pixel");
    if (image.fully_observed()) return image;

    PatchConfig cfg = opts.patch_config;
    if (cfg.semi_local) {
        // Coordinate scales depend on the given samples only, not on fill
        // values, so they stay fixed across cycles.
        const auto [l1, l2] = semi_local_scales(image);
        cfg.lambda1 = l1;
        cfg.lambda2 = l2;
    }

    ImageBuffer current = random_fill_init(image, opts.rng_seed);
    for (int cycle = 1; cycle <= opts.outer_iters; ++cycle) {
        const PatchSet patches = extract_patches(current, cfg);
        const SparseWeightGraph graph = build_patch_graph(patches, opts.k_sparsify, opts.r_sigma);
        for (int c = 0; c < current.channels; ++c) {
            const auto start = Clock::now();
            const auto [u0, labels] = function_from_image(current, patches, c);
            SplitBregmanState state;
            const Vector u =
                solve_interpolation(opts.solver, graph, labels, opts.solver_options, &state);
            current = image_from_function(u, patches, c, current);
            const double db =
                truth ? psnr(current, *truth) : std::numeric_limits<double>::quiet_NaN();
            push_record(metrics, "inpaint", opts.solver, cycle, c, db, last_residual(state),
                        ms_since(start));
        }
    }
    return current;
}

ImageBuffer colorize(const ImageBuffer& gray, const ImageBuffer& color_samples,
                     const ColorizeOptions& opts, const ImageBuffer* truth,
                     std::vector<MetricRecord>* metrics) {
    validate_image(gray);
    validate_image(color_samples);
    if (gray.channels != 1)
        throw std::invalid_argument("colorize expects a single-channel gray image");
    if (!gray.fully_observed())
        throw std::invalid_argument("colorize expects a fully observed gray image");
    if (color_samples.channels != 3)
        throw std::invalid_argument("color samples must have three channels");
    if (color_samples.width != gray.width || color_samples.height != gray.height)
        throw std::invalid_argument("color samples and gray image dimensions differ");
    if (color_samples.observed_count() == 0)
        throw std::invalid_argument("colorize needs at least one color sample");
    if (color_samples.fully_observed()) return color_samples;

    PatchConfig cfg = opts.patch_config;
    if (cfg.semi_local) {
        const auto [l1, l2] = semi_local_scales(gray);
        cfg.lambda1 = l1;
        cfg.lambda2 = l2;
    }

    // The geometry comes from the gray image alone and never changes, so a
    // single graph serves all three channels.
    const PatchSet patches = extract_patches(gray, cfg);
    const SparseWeightGraph graph = build_patch_graph(patches, opts.k_sparsify, opts.r_sigma);

    ImageBuffer out = color_samples;
    for (int c = 0; c < 3; ++c) {
        const auto start = Clock::now();
        const auto [u0, labels] = function_from_image(color_samples, patches, c);
        SplitBregmanState state;
        const Vector u =
            solve_interpolation(opts.solver, graph, labels, opts.solver_options, &state);
        out = image_from_function(u, patches, c, out);
        const double db =
            truth ? psnr(out, *truth) : std::numeric_limits<double>::quiet_NaN();
        push_record(metrics, "colorize", opts.solver, -1, c, db, last_residual(state),
                    ms_since(start));
    }
    return out;
}

}  // namespace wntv
