#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wntv/config.hpp"
#include "wntv/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "Graph-based variational interpolation: semi-supervised classification,\n"
        "patch-graph image inpainting and colorization with the gl, wnll, ntv\n"
        "and wntv solvers."};

    std::string config_path, command, solver, input, mask, truth, output, metrics;
    double lambda = 0, mu = 0, rate = 0;
    int k = 0, r_sigma = 0, patch = 0, outer_iters = 0, bregman_iters = 0;
    std::uint64_t seed = 0;

    app.add_option("--config", config_path, "Config file; flags override its keys");
    app.add_option("--command", command, "ssl, inpaint or colorize");
    app.add_option("--solver", solver, "gl, wnll, ntv or wntv (default wntv)");
    app.add_option("--lambda", lambda, "Split Bregman penalty (default 1)");
    app.add_option("--mu", mu, "Label-row weight (default |V|/|S|)");
    app.add_option("--k", k, "Neighbors kept per point (default 20 ssl, 50 images)");
    app.add_option("--r-sigma", r_sigma, "Bandwidth neighbor rank (default 10 ssl, 20 images)");
    app.add_option("--patch", patch, "Odd patch side, sets both dimensions (default 11)");
    app.add_option("--outer-iters", outer_iters, "Inpainting graph rebuild cycles (default 10)");
    app.add_option("--bregman-iters", bregman_iters, "Split Bregman iteration cap (default 50)");
    app.add_option("--seed", seed, "Seed for masks, fills and label draws (default 0)");
    app.add_option("--rate", rate, "Subsample rate / label fraction in (0, 1]");
    app.add_option("--input", input, "Image (inpaint), gray image (colorize) or IDX images (ssl)");
    app.add_option("--mask", mask, "Observation mask (P5, nonzero = observed)");
    app.add_option("--truth", truth, "Reference image, color source or IDX labels");
    app.add_option("--output", output, "Output image / prediction list");
    app.add_option("--metrics", metrics, "Metrics log path (default <output stem>.metrics.log)");

    CLI11_PARSE(app, argc, argv);

    try {
        wntv::RunConfig config;
        if (!config_path.empty()) config = wntv::parse_config_file(config_path);
        if (app.count("--command")) config.command = command;
        if (app.count("--solver")) config.solver = wntv::solver_kind_from_string(solver);
        if (app.count("--lambda")) config.solver_options.lambda = lambda;
        if (app.count("--mu")) config.solver_options.mu = mu;
        if (app.count("--k")) config.k_sparsify = k;
        if (app.count("--r-sigma")) config.r_sigma = r_sigma;
        if (app.count("--patch")) config.patch_config.s1 = config.patch_config.s2 = patch;
        if (app.count("--outer-iters")) config.outer_iters = outer_iters;
        if (app.count("--bregman-iters")) config.solver_options.max_bregman_iters = bregman_iters;
        if (app.count("--seed")) config.seed = seed;
        if (app.count("--rate")) config.rate = rate;
        if (app.count("--input")) config.input = input;
        if (app.count("--mask")) config.mask = mask;
        if (app.count("--truth")) config.truth = truth;
        if (app.count("--output")) config.output = output;
        if (app.count("--metrics")) config.metrics = metrics;
        wntv::run(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
