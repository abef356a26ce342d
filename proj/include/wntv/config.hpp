#pragma once

#include <cstdint>
#include <string>

#include "wntv/patch_space.hpp"
#include "wntv/solvers.hpp"

namespace wntv {

// Everything a run needs, resolved from config file plus CLI overrides.
// Sections: [run] command/seed/paths, [graph] k/r_sigma, [solver]
// name/lambda/mu/iteration caps/tolerances, [patch] size/semi_local,
// [pipeline] outer_iters/rate/label_count/stratified.
struct RunConfig {
    std::string command;  // ssl | inpaint | colorize
    SolverKind solver = SolverKind::WNTV;

    // Graph recipe; -1 means the per-command default (k 20 / r 10 for ssl,
    // k 50 / r 20 for the image pipelines).
    int k_sparsify = -1;
    int r_sigma = -1;

    SolverOptions solver_options;
    PatchConfig patch_config;

    int outer_iters = 10;
    std::uint64_t seed = 0;
    double rate = -1.0;     // subsample rate / label fraction; -1 = unset
    int label_count = -1;   // ssl label budget; overrides rate when set
    bool stratified = true;

    std::string input;    // image (inpaint), gray image (colorize), IDX images (ssl)
    std::string mask;     // observation mask; generated from `rate` when empty
    std::string truth;    // reference image / color source / IDX labels
    std::string output;
    std::string metrics;  // defaults to <output stem>.metrics.log

    int graph_k() const { return k_sparsify > 0 ? k_sparsify : (command == "ssl" ? 20 : 50); }
    int graph_r() const { return r_sigma > 0 ? r_sigma : (command == "ssl" ? 10 : 20); }
};

// Parses an INI-style file ([section], key = value, # or ; comments) on
// top of `base`. Unknown sections or keys and malformed values raise
// IoError.
RunConfig parse_config_file(const std::string& path, const RunConfig& base = {});

// Applies one key = value pair using the same keys as the config file,
// qualified as "section.key".
void apply_config_value(RunConfig& config, const std::string& section,
                        const std::string& key, const std::string& value);

// Full pre-run check; collects every problem (ranges, missing files,
// command requirements) into one IoError instead of stopping at the first.
void validate_config(const RunConfig& config);

// Canonical one-line-per-field rendering; the run id is a hash of this.
std::string serialize_config(const RunConfig& config);

// 16 hex digits, FNV-1a over serialize_config.
std::string config_run_id(const RunConfig& config);

// <output stem> + suffix, e.g. "out/result.pgm" -> "out/result.summary.json".
std::string derive_output_path(const std::string& output, const std::string& suffix);

}  // namespace wntv
