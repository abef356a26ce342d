#include "wntv/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <vector>

#include "json.hpp"
#include "wntv/errors.hpp"
#include "wntv/image_io.hpp"
#include "wntv/metrics.hpp"
#include "wntv/pipelines.hpp"
#include "wntv/ssl.hpp"

namespace wntv {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// PSNR values carry the "inf" sentinel through logs and summaries, so they
// are serialized as strings, not JSON numbers.
ordered_json db_json(double value) {
    return std::isnan(value) ? ordered_json(nullptr) : ordered_json(format_db(value));
}

MaskImage resolve_mask(const RunConfig& config, int width, int height) {
    if (!config.mask.empty()) {
        MaskImage mask = read_mask(config.mask);
        if (mask.width != width || mask.height != height)
            throw IoError("mask " + config.mask + " is " + std::to_string(mask.width) + "x" +
                          std::to_string(mask.height) + " but the image is " +
                          std::to_string(width) + "x" + std::to_string(height));
        return mask;
    }
    return subsample_mask(width, height, config.rate, config.seed);
}

ordered_json run_inpaint(const RunConfig& config, std::vector<MetricRecord>& records) {
    ImageBuffer image = read_image(config.input);
    const MaskImage mask = resolve_mask(config, image.width, image.height);

    std::optional<ImageBuffer> truth;
    if (!config.truth.empty()) {
        truth = read_image(config.truth);
    } else if (config.mask.empty()) {
        // The mask was sampled out of a complete input, which therefore
        // doubles as the reference.
        truth = image;
    }
    apply_mask(image, mask);

    InpaintOptions opts;
    opts.outer_iters = config.outer_iters;
    opts.rng_seed = config.seed;
    opts.solver = config.solver;
    opts.solver_options = config.solver_options;
    opts.patch_config = config.patch_config;
    opts.k_sparsify = config.graph_k();
    opts.r_sigma = config.graph_r();

    const ImageBuffer result =
        inpaint(image, opts, truth ? &*truth : nullptr, &records);
    write_image(result, config.output);

    ordered_json summary;
    summary["width"] = result.width;
    summary["height"] = result.height;
    summary["channels"] = result.channels;
    summary["observed_pixels"] = image.observed_count();
    summary["outer_iters"] = config.outer_iters;
    summary["final_psnr"] = truth ? db_json(psnr(result, *truth)) : ordered_json(nullptr);
    return summary;
}

ordered_json run_colorize(const RunConfig& config, std::vector<MetricRecord>& records) {
    const ImageBuffer gray = read_image(config.input);
    if (gray.channels != 1)
        throw IoError("colorize input " + config.input + " must be a gray P5 image");
    const ImageBuffer truth = read_image(config.truth);
    if (truth.channels != 3)
        throw IoError("colorize truth " + config.truth + " must be a color P6 image");
    if (truth.width != gray.width || truth.height != gray.height)
        throw IoError("gray image and color source dimensions differ");

    ImageBuffer samples = truth;
    apply_mask(samples, resolve_mask(config, gray.width, gray.height));

    ColorizeOptions opts;
    opts.solver = config.solver;
    opts.solver_options = config.solver_options;
    opts.patch_config = config.patch_config;
    opts.k_sparsify = config.graph_k();
    opts.r_sigma = config.graph_r();

    const ImageBuffer result = colorize(gray, samples, opts, &truth, &records);
    write_image(result, config.output);

    ordered_json summary;
    summary["width"] = result.width;
    summary["height"] = result.height;
    summary["sample_pixels"] = samples.observed_count();
    summary["final_psnr"] = db_json(psnr(result, truth));
    return summary;
}

ordered_json run_ssl(const RunConfig& config, std::vector<MetricRecord>& records) {
    const LabeledDataset dataset = load_mnist_idx(config.input, config.truth);
    const int budget = config.label_count > 0
                           ? config.label_count
                           : static_cast<int>(std::llround(config.rate * dataset.n()));
    const std::vector<int> labeled =
        sample_label_set(dataset, budget, config.seed, config.stratified);

    SslOptions opts;
    opts.solver = config.solver;
    opts.solver_options = config.solver_options;
    opts.k_sparsify = config.graph_k();
    opts.r_sigma = config.graph_r();

    const auto start = std::chrono::steady_clock::now();
    const SslResult result = run_ssl(dataset, labeled, opts);
    const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();

    for (size_t cls = 0; cls < result.states.size(); ++cls) {
        MetricRecord r;
        r.command = "ssl";
        r.solver = to_string(config.solver);
        r.channel = static_cast<int>(cls);
        r.bregman_residual = result.states[cls].residual_history.empty()
                                 ? kNaN
                                 : result.states[cls].residual_history.back();
        records.push_back(r);
    }
    MetricRecord overall;
    overall.command = "ssl";
    overall.solver = to_string(config.solver);
    overall.wall_ms = wall_ms;
    records.push_back(overall);

    std::ofstream out(config.output);
    if (!out) throw IoError(config.output + ": cannot open for writing");
    for (int p : result.predictions) out << p << '\n';
    if (!out) throw IoError(config.output + ": write failed");

    const double acc_all = accuracy(result.predictions, dataset.truth);
    ordered_json summary;
    summary["points"] = dataset.n();
    summary["dimension"] = dataset.cloud.dim();
    summary["classes"] = dataset.num_classes;
    summary["labeled"] = static_cast<int>(labeled.size());
    summary["accuracy_all_points"] = acc_all;
    summary["accuracy_unlabeled"] =
        labeled.size() < static_cast<size_t>(dataset.n())
            ? ordered_json(accuracy(result.predictions, dataset.truth, labeled))
            : ordered_json(nullptr);
    return summary;
}

}  // namespace

void run(const RunConfig& config) {
    validate_config(config);
    const std::string run_id = config_run_id(config);
    const std::string metrics_path =
        config.metrics.empty() ? derive_output_path(config.output, ".metrics.log")
                               : config.metrics;
    const std::string summary_path = derive_output_path(config.output, ".summary.json");

    std::vector<MetricRecord> records;
    ordered_json body;
    if (config.command == "inpaint")
        body = run_inpaint(config, records);
    else if (config.command == "colorize")
        body = run_colorize(config, records);
    else
        body = run_ssl(config, records);

    std::ofstream metrics_out(metrics_path);
    if (!metrics_out) throw IoError(metrics_path + ": cannot open for writing");
    for (const MetricRecord& r : records)
        metrics_out << format_metric_line(run_id, r) << '\n';

    ordered_json summary;
    summary["run"] = run_id;
    summary["command"] = config.command;
    summary["solver"] = to_string(config.solver);
    summary["seed"] = config.seed;
    for (auto& [key, value] : body.items()) summary[key] = value;

    std::ofstream summary_out(summary_path);
    if (!summary_out) throw IoError(summary_path + ": cannot open for writing");
    summary_out << summary.dump(2) << '\n';
}

}  // namespace wntv
