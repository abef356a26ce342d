// Acceptance gate for the interpolation toolkit. Runs ten end-to-end
// checks against independent oracles and benchmark orderings, prints one
// [PASS]/[FAIL] line per check with a timing and a short summary, and
// exits with the number of failures. Residual histories of every
// total-variation solve behind the benchmark checks are written to
// acceptance_residuals.log in the working directory for inspection.
//
// Usage: wntv_acceptance [--data-dir <path>] [--only <ids>] [--residual-log <path>]
// --only runs a comma-separated subset of check ids (e.g. --only 1,3).
// --residual-log overrides where the histories are written.
// The data directory must hold camera64.pgm, camera32.pgm and
// astronaut64.ppm. Set WNTV_MNIST_DIR to a directory with
// train-images-idx3-ubyte / train-labels-idx1-ubyte to run the
// classification check on real handwritten digits instead of the
// procedural corpus.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "support/oracles.hpp"
#include "support/synth_digits.hpp"
#include "wntv/errors.hpp"
#include "wntv/image_io.hpp"
#include "wntv/labels.hpp"
#include "wntv/metrics.hpp"
#include "wntv/pipelines.hpp"
#include "wntv/point_cloud.hpp"
#include "wntv/rng.hpp"
#include "wntv/solvers.hpp"
#include "wntv/ssl.hpp"
#include "wntv/weight_graph.hpp"

namespace {

using wntv::EdgeField;
using wntv::SolverKind;
using wntv::SolverOptions;
using wntv::Vector;

// Penalty weight of the split solver per instance family. The shrink
// threshold is 1/lambda, so the useful scale tracks the size of a typical
// nonzero gradient row: order one for [0,1]-valued indicator problems,
// order a hundred for [0,255] image intensities. The small-graph and image
// values reach the 1e-4 feasibility residual within the 50-sweep cap; the
// digit value is the best of a 2..50 sweep on accuracy and residual, but the
// digit solves still plateau above 1e-4 (see the residual check's report).
constexpr double kLambdaSmallGraphs = 6.0;
constexpr double kLambdaDigits = 20.0;
constexpr double kLambdaImages = 1.0;

std::string sci(double v) {
    std::ostringstream out;
    out << std::scientific << std::setprecision(2) << v;
    return out.str();
}

std::string fix(double v, int places = 2) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(places) << v;
    return out.str();
}

const char* kind_name(SolverKind kind) {
    switch (kind) {
        case SolverKind::GL: return "gl";
        case SolverKind::WNLL: return "wnll";
        case SolverKind::NTV: return "ntv";
        default: return "wntv";
    }
}

struct CheckResult {
    bool pass = false;
    std::string line;                // one-line summary after the check name
    std::vector<std::string> extra;  // indented detail lines
};

// Every total-variation solve performed by the oracle and benchmark checks
// lands here; the feasibility check replays the registry and writes it out.
class ResidualRegistry {
public:
    struct Entry {
        std::string name;
        int iterations = -1;          // -1 when only the final value was recorded
        std::vector<double> history;  // full history, or the single final value
    };

    void add(const std::string& name, const wntv::SplitBregmanState& state) {
        entries_.push_back({name, state.iterations, state.residual_history});
    }
    void add_final(const std::string& name, double residual) {
        entries_.push_back({name, -1, {residual}});
    }

    const std::vector<Entry>& entries() const { return entries_; }

    void write(const std::string& path) const {
        std::ofstream out(path);
        out << "# feasibility residuals |D - D_NG u| / |D_NG u| per sweep\n"
            << "# iterations=-1 means only the final value was recorded\n";
        for (const Entry& e : entries_) {
            out << e.name << " iterations=" << e.iterations << " history=";
            for (std::size_t i = 0; i < e.history.size(); ++i) {
                if (i) out << ',';
                out << sci(e.history[i]);
            }
            out << '\n';
        }
    }

private:
    std::vector<Entry> entries_;
};

// Artifacts shared between the benchmark checks and the preservation check.
struct Context {
    std::string data_dir;

    bool have_digits = false;
    std::vector<int> digit_truth;
    std::vector<int> digit_labeled;
    std::vector<int> digit_predictions;

    bool have_inpaint = false;
    wntv::ImageBuffer inpaint_input;  // carries the observation mask
    wntv::ImageBuffer inpaint_output;

    bool have_colorize = false;
    wntv::ImageBuffer colorize_samples;
    wntv::ImageBuffer colorize_output;
};

struct Instance {
    wntv::PointCloud cloud;
    wntv::SparseWeightGraph graph;
    wntv::LabelConstraint labels;
};

// Draws cloud, graph and labels until every point reaches a labeled one;
// sparse union graphs with few labels can be unreachable, so both the
// labels and the cloud are redrawn. Deterministic per seed. With
// indicator = true the label values alternate 1, 0 instead of uniform.
Instance random_instance(int n, int k, int r, int dim, int count, std::uint64_t seed,
                         bool indicator = false) {
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        wntv::PointCloud cloud = oracle::random_cloud(n, dim, seed + 977 * attempt);
        wntv::SparseWeightGraph graph = wntv::build_weight_graph(cloud, k, r);
        for (std::uint64_t lt = 0; lt < 20; ++lt) {
            const std::uint64_t label_seed = seed + 977 * attempt + 1000003 * (lt + 1);
            wntv::LabelConstraint labels;
            if (indicator) {
                std::mt19937_64 gen(label_seed);
                const std::vector<int> idx = wntv::sample_without_replacement(n, count, gen);
                Eigen::VectorXd values(count);
                for (int s = 0; s < count; ++s) values[s] = s % 2;
                labels = wntv::make_label_constraint(idx, values, n);
            } else {
                labels = oracle::random_labels(n, count, label_seed);
            }
            try {
                wntv::assemble_pinned_system(graph, labels, 1.0);
                return {std::move(cloud), std::move(graph), std::move(labels)};
            } catch (const wntv::SolverError&) {
            }
        }
    }
    throw wntv::SolverError("no reachable random instance found");
}

EdgeField random_edge_field(const wntv::SparseWeightGraph& graph, std::mt19937_64& gen) {
    EdgeField field(graph.edge_count());
    for (int e = 0; e < field.size(); ++e) field[e] = 2.0 * wntv::unit_double(gen) - 1.0;
    return field;
}

// ---- check 1: pinned subproblem vs dense normal equations -----------------

CheckResult check_subproblem_oracle() {
    std::mt19937_64 gen(101);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int n = 8 + (i * 7) % 23;  // 8..30
        const int k = 3 + i % 3;         // 3..5
        // sigma near the kth distance keeps retained weights order one, so
        // the pinned system stays well conditioned and the 1e-7 comparison
        // against the dense solve is meaningful.
        const int r = k - 1 + i % 2;
        const int dim = 2 + i % 3;
        const int count = 1 + (i * 3) % (n / 2);

        const Instance inst = random_instance(n, k, r, dim, count, 1000 + i);
        const wntv::SparseWeightGraph& graph = inst.graph;
        const wntv::LabelConstraint& labels = inst.labels;
        const double mu = (i % 3 == 0)   ? 1.0
                          : (i % 3 == 1) ? 3.0
                                         : static_cast<double>(n) / count;

        const EdgeField D = random_edge_field(graph, gen);
        const EdgeField Q = random_edge_field(graph, gen);

        SolverOptions opts;
        opts.cg_tol = 1e-12;
        opts.cg_max_iters = 100000;
        const Vector got = wntv::u_subproblem(graph, labels, D, Q, mu, opts);
        const Vector want = oracle::dense_pinned_least_squares(graph, labels, D - Q, mu);
        const double rel = (got - want).norm() / std::max(want.norm(), 1e-12);
        worst = std::max(worst, rel);
    }
    CheckResult r;
    r.pass = worst <= 1e-7;
    r.line = "worst relative error " + sci(worst) + " over 50 graphs (tol 1e-7)";
    return r;
}

// ---- check 2: solver reductions -------------------------------------------

CheckResult check_solver_reductions() {
    double worst_quad = 0.0;
    double worst_tv = 0.0;
    for (int i = 0; i < 20; ++i) {
        const int n = 10 + (i * 3) % 31;  // 10..40
        const int k = 3 + i % 3;
        const int r = 2 + i % 2;
        const int count = 2 + i % 5;

        const Instance inst = random_instance(n, k, r, 2 + i % 2, count, 300 + i);
        const wntv::SparseWeightGraph& graph = inst.graph;
        const wntv::LabelConstraint& labels = inst.labels;

        SolverOptions quad;
        quad.cg_tol = 1e-12;
        quad.cg_max_iters = 100000;
        const Vector gl = wntv::solve_gl(graph, labels, quad);
        const Vector wnll = wntv::solve_wnll(graph, labels, 1.0, quad);
        worst_quad = std::max(worst_quad, (gl - wnll).cwiseAbs().maxCoeff());

        SolverOptions tv = quad;
        tv.lambda = kLambdaSmallGraphs;
        tv.mu = 1.0;
        const auto [wntv_u, state] = wntv::solve_wntv(graph, labels, tv);
        const Vector ntv_u = wntv::solve_ntv(graph, labels, tv);
        worst_tv = std::max(worst_tv, (wntv_u - ntv_u).cwiseAbs().maxCoeff());
    }
    CheckResult r;
    r.pass = worst_quad <= 1e-10 && worst_tv <= 1e-10;
    r.line = "max |gl - wnll(1)| = " + sci(worst_quad) + ", max |wntv(1) - ntv| = " +
             sci(worst_tv) + " over 20 instances (tol 1e-10)";
    return r;
}

// ---- check 3: tv energy vs projected subgradient descent ------------------

CheckResult check_energy_oracle(ResidualRegistry& registry) {
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10; ++i) {
        const int n = 8 + i % 8;  // 8..15
        const int count = 3 + i % 3;

        // Indicator labels on a moderately dense graph: piecewise-constant
        // minimizers with real jumps, the regime the solver is built for.
        const Instance inst = random_instance(n, 5, 3, 3, count, 500 + i, true);
        const wntv::SparseWeightGraph& graph = inst.graph;
        const wntv::LabelConstraint& labels = inst.labels;

        SolverOptions opts;
        opts.mu = 1.0;
        opts.lambda = kLambdaSmallGraphs;
        opts.bregman_tol = 1e-6;  // run the full sweep budget; final residual still checked
        opts.cg_tol = 1e-10;
        opts.cg_max_iters = 50000;
        const auto [u, state] = wntv::solve_wntv(graph, labels, opts);
        registry.add("energy-graph-" + std::to_string(i), state);

        const double energy = wntv::wntv_energy(graph, u, labels, 1.0);
        const double best = oracle::subgradient_best_energy(graph, labels, 1.0, 100000,
                                                            {0.05, 0.2, 1.0});
        const double excess = (energy - best) / std::max(best, 1e-12);
        worst_excess = std::max(worst_excess, excess);
    }
    CheckResult r;
    r.pass = worst_excess <= 1e-3;
    r.line = "worst relative energy excess " + sci(worst_excess) +
             " over 10 graphs (tol 1e-3; negative means below the oracle)";
    return r;
}

// ---- check 4: shrink closed form -------------------------------------------

CheckResult check_shrink_properties() {
    std::mt19937_64 gen(700);
    double worst_norm = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const int dim = 2 + static_cast<int>(wntv::uniform_index(gen, 9));  // 2..10
        Eigen::VectorXd z(dim);
        for (int d = 0; d < dim; ++d) z[d] = 4.0 * wntv::unit_double(gen) - 2.0;
        double gamma = 1.5 * wntv::unit_double(gen);
        if (i % 7 == 0) gamma = 0.0;
        if (i % 10 == 0) gamma = z.norm();  // boundary of the dead zone
        const Eigen::VectorXd d = wntv::shrink(z, gamma);
        const double err = std::abs(d.norm() - std::max(z.norm() - gamma, 0.0));
        worst_norm = std::max(worst_norm, err);
    }

    double worst_gap = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const Eigen::Vector2d z(3.0 * wntv::unit_double(gen) - 1.5,
                                3.0 * wntv::unit_double(gen) - 1.5);
        const double gamma = 1.2 * wntv::unit_double(gen);
        const Eigen::Vector2d d = wntv::shrink(z, gamma);
        const double objective = gamma * d.norm() + 0.5 * (d - z).squaredNorm();
        const double grid_best = oracle::shrink_grid_best(z, gamma, 4.0, 400);
        worst_gap = std::max(worst_gap, objective - grid_best);
    }

    CheckResult r;
    r.pass = worst_norm <= 1e-12 && worst_gap <= 1e-4;
    r.line = "norm identity error " + sci(worst_norm) + " over 10000 vectors, objective gap " +
             sci(worst_gap) + " vs grid search over 100 two-vectors (tols 1e-12, 1e-4)";
    return r;
}

// ---- check 5: semi-supervised digit classification ------------------------

// 700 instances per digit class. WNTV_MNIST_DIR switches to a stratified
// subset of real handwritten digits in IDX format.
wntv::LabeledDataset benchmark_digits(std::string* source) {
    if (const char* dir = std::getenv("WNTV_MNIST_DIR")) {
        const std::string base = dir;
        const wntv::LabeledDataset full = wntv::load_mnist_idx(
            base + "/train-images-idx3-ubyte", base + "/train-labels-idx1-ubyte");
        const std::vector<int> keep = wntv::sample_label_set_per_class(full, 700, 99);
        wntv::LabeledDataset sub;
        sub.num_classes = full.num_classes;
        sub.cloud.points.resize(static_cast<int>(keep.size()), full.cloud.dim());
        sub.truth.reserve(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            sub.cloud.points.row(static_cast<int>(i)) = full.cloud.points.row(keep[i]);
            sub.truth.push_back(full.truth[keep[i]]);
        }
        *source = "idx files under " + base;
        return sub;
    }
    *source = "procedural corpus";
    // Wide pen/ink style spread plus a 15% share of ambiguous two-class
    // blends. Both push the classes into genuine overlap so that graph
    // quality, not raw separability, decides the outcome.
    synth::DigitCorpusOptions corpus;
    corpus.bridge_fraction = 0.15;
    return synth::make_digit_corpus(corpus);
}

CheckResult check_classification(ResidualRegistry& registry, Context& ctx) {
    std::string source;
    const wntv::LabeledDataset dataset = benchmark_digits(&source);
    const wntv::SparseWeightGraph graph = wntv::build_weight_graph(dataset.cloud, 20, 10);

    struct Budget {
        std::string name;
        std::vector<int> labeled;
    };
    const std::vector<Budget> budgets = {
        {"70-labels", wntv::sample_label_set(dataset, 70, 5)},
        {"10-per-class", wntv::sample_label_set_per_class(dataset, 10, 5)},
        {"5-per-class", wntv::sample_label_set_per_class(dataset, 5, 5)},
    };
    const std::vector<SolverKind> kinds = {SolverKind::GL, SolverKind::WNLL, SolverKind::NTV,
                                           SolverKind::WNTV};

    CheckResult r;
    r.extra.push_back("digit source: " + source + ", " + std::to_string(dataset.n()) +
                      " points, accuracy over all points");
    std::map<std::string, std::map<SolverKind, double>> acc;
    for (const Budget& budget : budgets) {
        std::string row = budget.name + " (" + std::to_string(budget.labeled.size()) + "):";
        for (SolverKind kind : kinds) {
            wntv::SslOptions opts;
            opts.solver = kind;
            opts.solver_options.lambda = kLambdaDigits;
            opts.solver_options.cg_max_iters = 20000;
            const wntv::SslResult result = wntv::run_ssl(graph, dataset, budget.labeled, opts);
            const double a = wntv::accuracy(result.predictions, dataset.truth);
            acc[budget.name][kind] = a;
            row += std::string(" ") + kind_name(kind) + "=" + fix(a);
            for (std::size_t c = 0; c < result.states.size(); ++c)
                registry.add("digits-" + budget.name + "-" + kind_name(kind) + "-class" +
                                 std::to_string(c),
                             result.states[c]);
            if (kind == SolverKind::WNTV && budget.name == "70-labels") {
                ctx.have_digits = true;
                ctx.digit_truth = dataset.truth;
                ctx.digit_labeled = budget.labeled;
                ctx.digit_predictions = result.predictions;
            }
        }
        r.extra.push_back(row);
    }

    const double anchor = acc["70-labels"][SolverKind::WNTV];
    bool gap_ok = true;
    double worst_gap = std::numeric_limits<double>::infinity();
    for (const std::string& name : {std::string("10-per-class"), std::string("5-per-class")}) {
        const double weighted = std::min(acc[name][SolverKind::WNTV], acc[name][SolverKind::WNLL]);
        const double unweighted = std::max(acc[name][SolverKind::GL], acc[name][SolverKind::NTV]);
        worst_gap = std::min(worst_gap, weighted - unweighted);
        gap_ok = gap_ok && (weighted - unweighted >= 20.0);
    }
    bool wntv_near_wnll = true;
    for (const Budget& budget : budgets)
        wntv_near_wnll = wntv_near_wnll && (acc[budget.name][SolverKind::WNTV] >=
                                            acc[budget.name][SolverKind::WNLL] - 1.0);

    r.pass = anchor >= 85.0 && gap_ok && wntv_near_wnll;
    r.line = "wntv@70=" + fix(anchor) + "% (need >= 85), weighted-over-unweighted margin " +
             fix(worst_gap) + " points at the low budgets (need >= 20), wntv >= wnll - 1 " +
             (wntv_near_wnll ? "holds" : "VIOLATED");
    return r;
}

// ---- check 6: inpainting benchmark ordering --------------------------------

CheckResult check_inpainting(ResidualRegistry& registry, Context& ctx) {
    const wntv::ImageBuffer truth = wntv::read_image(ctx.data_dir + "/camera64.pgm");
    const wntv::MaskImage mask = wntv::subsample_mask(truth.width, truth.height, 0.10, 11);
    wntv::ImageBuffer damaged = truth;
    wntv::apply_mask(damaged, mask);

    std::map<SolverKind, double> quality;
    CheckResult r;
    for (SolverKind kind : {SolverKind::WNTV, SolverKind::GL, SolverKind::NTV}) {
        wntv::InpaintOptions opts;
        opts.outer_iters = 10;
        opts.rng_seed = 17;
        opts.solver = kind;
        opts.solver_options.lambda = kLambdaImages;
        opts.solver_options.cg_max_iters = 20000;
        std::vector<wntv::MetricRecord> records;
        const wntv::ImageBuffer out = wntv::inpaint(damaged, opts, &truth, &records);
        quality[kind] = wntv::psnr(out, truth);
        if (kind != SolverKind::GL)
            for (const wntv::MetricRecord& rec : records)
                registry.add_final("camera-" + std::string(kind_name(kind)) + "-cycle" +
                                       std::to_string(rec.cycle),
                                   rec.bregman_residual);
        if (kind == SolverKind::WNTV) {
            ctx.have_inpaint = true;
            ctx.inpaint_input = damaged;
            ctx.inpaint_output = out;
            double first = std::numeric_limits<double>::quiet_NaN();
            double last = std::numeric_limits<double>::quiet_NaN();
            for (const wntv::MetricRecord& rec : records) {
                if (rec.cycle == 1) first = rec.psnr_db;
                if (rec.cycle == opts.outer_iters) last = rec.psnr_db;
            }
            r.extra.push_back("wntv psnr by cycle: " + fix(first) + " dB after 1, " + fix(last) +
                              " dB after " + std::to_string(opts.outer_iters));
        }
    }

    r.pass = quality[SolverKind::WNTV] > quality[SolverKind::GL] &&
             quality[SolverKind::WNTV] > quality[SolverKind::NTV];
    r.line = "64x64 crop, 10% observed: wntv=" + fix(quality[SolverKind::WNTV]) + " dB, gl=" +
             fix(quality[SolverKind::GL]) + " dB, ntv=" + fix(quality[SolverKind::NTV]) +
             " dB (need wntv above both)";
    return r;
}

// ---- check 7: colorization benchmark ordering -------------------------------

CheckResult check_colorization(ResidualRegistry& registry, Context& ctx) {
    const wntv::ImageBuffer truth = wntv::read_image(ctx.data_dir + "/astronaut64.ppm");
    wntv::ImageBuffer gray = wntv::make_image(truth.width, truth.height, 1);
    gray.values.col(0) = truth.values.rowwise().mean();
    const wntv::MaskImage mask = wntv::subsample_mask(truth.width, truth.height, 0.01, 23);
    wntv::ImageBuffer samples = truth;
    wntv::apply_mask(samples, mask);

    std::map<SolverKind, double> quality;
    for (SolverKind kind : {SolverKind::WNTV, SolverKind::GL}) {
        wntv::ColorizeOptions opts;
        opts.solver = kind;
        opts.solver_options.lambda = kLambdaImages;
        opts.solver_options.cg_max_iters = 20000;
        std::vector<wntv::MetricRecord> records;
        const wntv::ImageBuffer out = wntv::colorize(gray, samples, opts, &truth, &records);
        quality[kind] = wntv::psnr(out, truth);
        if (kind == SolverKind::WNTV) {
            for (const wntv::MetricRecord& rec : records)
                registry.add_final("astronaut-wntv-channel" + std::to_string(rec.channel),
                                   rec.bregman_residual);
            ctx.have_colorize = true;
            ctx.colorize_samples = samples;
            ctx.colorize_output = out;
        }
    }

    CheckResult r;
    r.pass = quality[SolverKind::WNTV] > quality[SolverKind::GL];
    r.line = "64x64 crop, 1% color samples: wntv=" + fix(quality[SolverKind::WNTV]) +
             " dB, gl=" + fix(quality[SolverKind::GL]) + " dB (need wntv above gl)";
    return r;
}

// ---- check 8: pinned values and determinism ---------------------------------

bool same_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

bool same_records(const std::vector<wntv::MetricRecord>& a,
                  const std::vector<wntv::MetricRecord>& b) {
    auto same_value = [](double x, double y) {
        return (std::isnan(x) && std::isnan(y)) || x == y;
    };
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].command != b[i].command || a[i].solver != b[i].solver ||
            a[i].cycle != b[i].cycle || a[i].channel != b[i].channel ||
            !same_value(a[i].psnr_db, b[i].psnr_db) ||
            !same_value(a[i].bregman_residual, b[i].bregman_residual))
            return false;
    }
    return true;
}

wntv::ImageBuffer crop_top_left(const wntv::ImageBuffer& src, int w, int h) {
    wntv::ImageBuffer out = wntv::make_image(w, h, src.channels);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < src.channels; ++c) out.at(x, y, c) = src.at(x, y, c);
    return out;
}

// Observed pixels of `input` must appear verbatim in `output`.
void require_pinned_pixels(const wntv::ImageBuffer& input, const wntv::ImageBuffer& output,
                           const std::string& what, std::vector<std::string>& problems) {
    if (input.mask != output.mask) {
        problems.push_back(what + ": observation mask changed");
        return;
    }
    for (int p = 0; p < input.pixel_count(); ++p) {
        if (!input.mask[p]) continue;
        for (int c = 0; c < input.channels; ++c) {
            if (input.values(p, c) != output.values(p, c)) {
                problems.push_back(what + ": observed pixel " + std::to_string(p) +
                                   " channel " + std::to_string(c) + " changed");
                return;
            }
        }
    }
}

CheckResult check_preservation_and_determinism(ResidualRegistry& registry, Context& ctx) {
    std::vector<std::string> problems;

    if (ctx.have_inpaint)
        require_pinned_pixels(ctx.inpaint_input, ctx.inpaint_output, "inpaint benchmark",
                              problems);
    else
        problems.push_back("inpaint benchmark output unavailable");
    if (ctx.have_colorize)
        require_pinned_pixels(ctx.colorize_samples, ctx.colorize_output, "colorize benchmark",
                              problems);
    else
        problems.push_back("colorize benchmark output unavailable");
    if (ctx.have_digits) {
        for (int i : ctx.digit_labeled)
            if (ctx.digit_predictions[i] != ctx.digit_truth[i]) {
                problems.push_back("classification benchmark: labeled point " +
                                   std::to_string(i) + " lost its class");
                break;
            }
    } else {
        problems.push_back("classification benchmark predictions unavailable");
    }

    // Determinism probes: identical configs twice, bit-identical outputs.
    const wntv::ImageBuffer truth32 = wntv::read_image(ctx.data_dir + "/camera32.pgm");
    const wntv::MaskImage mask32 = wntv::subsample_mask(truth32.width, truth32.height, 0.3, 3);
    wntv::ImageBuffer input32 = truth32;
    wntv::apply_mask(input32, mask32);
    auto run_inpaint = [&](std::vector<wntv::MetricRecord>* records) {
        wntv::InpaintOptions opts;
        opts.outer_iters = 2;
        opts.rng_seed = 9;
        opts.solver = SolverKind::WNTV;
        opts.solver_options.lambda = kLambdaImages;
        opts.solver_options.cg_max_iters = 20000;
        opts.patch_config.s1 = 5;
        opts.patch_config.s2 = 5;
        opts.k_sparsify = 20;
        opts.r_sigma = 8;
        return wntv::inpaint(input32, opts, &truth32, records);
    };
    std::vector<wntv::MetricRecord> rec_a, rec_b;
    const wntv::ImageBuffer in_a = run_inpaint(&rec_a);
    const wntv::ImageBuffer in_b = run_inpaint(&rec_b);
    if (!same_matrix(in_a.values, in_b.values) || !same_records(rec_a, rec_b))
        problems.push_back("inpaint probe: two identical runs disagree");
    require_pinned_pixels(input32, in_a, "inpaint probe", problems);
    for (const wntv::MetricRecord& rec : rec_a)
        registry.add_final("probe-inpaint-cycle" + std::to_string(rec.cycle),
                           rec.bregman_residual);

    const wntv::ImageBuffer astro = wntv::read_image(ctx.data_dir + "/astronaut64.ppm");
    const wntv::ImageBuffer astro24 = crop_top_left(astro, 24, 24);
    wntv::ImageBuffer gray24 = wntv::make_image(24, 24, 1);
    gray24.values.col(0) = astro24.values.rowwise().mean();
    const wntv::MaskImage mask24 = wntv::subsample_mask(24, 24, 0.05, 13);
    wntv::ImageBuffer samples24 = astro24;
    wntv::apply_mask(samples24, mask24);
    auto run_colorize = [&](std::vector<wntv::MetricRecord>* records) {
        wntv::ColorizeOptions opts;
        opts.solver = SolverKind::WNTV;
        opts.solver_options.lambda = kLambdaImages;
        opts.solver_options.cg_max_iters = 20000;
        opts.patch_config.s1 = 5;
        opts.patch_config.s2 = 5;
        opts.k_sparsify = 20;
        opts.r_sigma = 8;
        return wntv::colorize(gray24, samples24, opts, &astro24, records);
    };
    std::vector<wntv::MetricRecord> col_a, col_b;
    const wntv::ImageBuffer out_col_a = run_colorize(&col_a);
    const wntv::ImageBuffer out_col_b = run_colorize(&col_b);
    if (!same_matrix(out_col_a.values, out_col_b.values) || !same_records(col_a, col_b))
        problems.push_back("colorize probe: two identical runs disagree");
    require_pinned_pixels(samples24, out_col_a, "colorize probe", problems);
    for (const wntv::MetricRecord& rec : col_a)
        registry.add_final("probe-colorize-channel" + std::to_string(rec.channel),
                           rec.bregman_residual);

    synth::DigitCorpusOptions corpus;
    corpus.per_class = 30;
    corpus.seed = 2;
    const wntv::LabeledDataset small = synth::make_digit_corpus(corpus);
    const std::vector<int> labeled = wntv::sample_label_set_per_class(small, 3, 7);
    auto run_classify = [&]() {
        wntv::SslOptions opts;
        opts.solver = SolverKind::WNTV;
        opts.solver_options.lambda = kLambdaDigits;
        opts.solver_options.cg_max_iters = 20000;
        opts.k_sparsify = 30;
        opts.r_sigma = 10;
        return wntv::run_ssl(small, labeled, opts);
    };
    const wntv::SslResult ssl_a = run_classify();
    const wntv::SslResult ssl_b = run_classify();
    if (ssl_a.predictions != ssl_b.predictions || !same_matrix(ssl_a.scores, ssl_b.scores))
        problems.push_back("classification probe: two identical runs disagree");
    for (int i : labeled)
        if (ssl_a.predictions[i] != small.truth[i]) {
            problems.push_back("classification probe: labeled point lost its class");
            break;
        }
    for (std::size_t c = 0; c < ssl_a.states.size(); ++c)
        registry.add("probe-digits-class" + std::to_string(c), ssl_a.states[c]);

    CheckResult r;
    r.pass = problems.empty();
    r.line = problems.empty()
                 ? "pinned values intact in all outputs; three probe pipelines bit-identical "
                   "across reruns"
                 : std::to_string(problems.size()) + " problem(s)";
    r.extra = problems;
    return r;
}

// ---- check 9: psnr reference points -----------------------------------------

CheckResult check_psnr_references() {
    wntv::ImageBuffer zero = wntv::make_image(3, 2, 1);
    wntv::ImageBuffer full = zero;
    full.values.setConstant(255.0);
    wntv::ImageBuffer faint = zero;
    faint.values.setConstant(2.55);

    const double at255 = wntv::psnr(full, zero);
    const double at255b = wntv::psnr(zero, full);
    const double at001 = wntv::psnr(faint, zero);
    const double same = wntv::psnr(zero, zero);

    CheckResult r;
    r.pass = std::abs(at255) <= 1e-9 && std::abs(at255b) <= 1e-9 &&
             std::abs(at001 - 40.0) <= 1e-9 && std::isinf(same) && same > 0;
    r.line = "uniform 255 -> " + sci(at255) + " dB, uniform 2.55 -> " + fix(at001, 12) +
             " dB, identical -> +inf (tol 1e-9)";
    return r;
}

// ---- check 10: split feasibility residuals ----------------------------------

CheckResult check_feasibility(const ResidualRegistry& registry, const std::string& log_path) {
    const std::string path = std::filesystem::absolute(log_path).string();
    registry.write(path);

    CheckResult r;
    if (registry.entries().empty()) {
        r.pass = false;
        r.line = "no total-variation solves were recorded";
        return r;
    }
    double worst = -std::numeric_limits<double>::infinity();
    std::string worst_name = "none";
    std::vector<std::string> offenders;
    for (const ResidualRegistry::Entry& e : registry.entries()) {
        if (e.history.empty()) continue;  // fully labeled solve, nothing to enforce
        const double final = e.history.back();
        if (final > worst) {
            worst = final;
            worst_name = e.name;
        }
        if (!(final < 1e-4) && offenders.size() < 8)
            offenders.push_back(e.name + " final residual " + sci(final) + " after " +
                                std::to_string(e.iterations) + " sweeps");
        if (e.iterations > 50 && offenders.size() < 8)
            offenders.push_back(e.name + " ran " + std::to_string(e.iterations) + " sweeps");
    }
    r.pass = offenders.empty();
    r.line = std::to_string(registry.entries().size()) + " solves recorded, worst final residual " +
             sci(worst) + " (" + worst_name + ", tol 1e-4); histories in " + path;
    r.extra = offenders;
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    std::string data_dir = "data";
    std::string residual_log = "acceptance_residuals.log";
    std::set<int> only;  // empty: run everything
    for (int a = 1; a + 1 < argc; ++a) {
        if (std::string(argv[a]) == "--data-dir") data_dir = argv[a + 1];
        if (std::string(argv[a]) == "--residual-log") residual_log = argv[a + 1];
        if (std::string(argv[a]) == "--only") {
            std::istringstream list(argv[a + 1]);
            std::string token;
            while (std::getline(list, token, ',')) only.insert(std::stoi(token));
        }
    }

    Context ctx;
    ctx.data_dir = data_dir;
    ResidualRegistry registry;

    struct Check {
        int id;
        const char* name;
        double budget_s;  // < 0: no runtime bound
        std::function<CheckResult()> run;
    };
    const std::vector<Check> checks = {
        {1, "subproblem vs dense normal equations", 10.0, [&] { return check_subproblem_oracle(); }},
        {2, "wnll(mu=1) = gl and ntv = wntv(mu=1)", 10.0, [&] { return check_solver_reductions(); }},
        {3, "tv energy vs subgradient descent", 120.0, [&] { return check_energy_oracle(registry); }},
        {4, "shrink closed form", 30.0, [&] { return check_shrink_properties(); }},
        {5, "digit classification orderings", 900.0,
         [&] { return check_classification(registry, ctx); }},
        {6, "inpainting psnr ordering", 300.0, [&] { return check_inpainting(registry, ctx); }},
        {7, "colorization psnr ordering", 300.0, [&] { return check_colorization(registry, ctx); }},
        {8, "pinned values and determinism", -1.0,
         [&] { return check_preservation_and_determinism(registry, ctx); }},
        {9, "psnr reference points", -1.0, [&] { return check_psnr_references(); }},
        {10, "split feasibility residuals", -1.0,
         [&] { return check_feasibility(registry, residual_log); }},
    };

    int failures = 0;
    int ran = 0;
    for (const Check& check : checks) {
        if (!only.empty() && !only.count(check.id)) continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        CheckResult result;
        try {
            result = check.run();
        } catch (const std::exception& e) {
            result.pass = false;
            result.line = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool over_budget = check.budget_s > 0 && secs > check.budget_s;
        const bool pass = result.pass && !over_budget;
        failures += pass ? 0 : 1;
        std::printf("[%s] %2d %s (%.1fs%s): %s\n", pass ? "PASS" : "FAIL", check.id, check.name,
                    secs, over_budget ? ", over budget" : "", result.line.c_str());
        for (const std::string& extra : result.extra) std::printf("          %s\n", extra.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d checks passed\n", ran - failures, ran);
    return failures;
}
