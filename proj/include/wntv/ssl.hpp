#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "wntv/point_cloud.hpp"
#include "wntv/solvers.hpp"
#include "wntv/weight_graph.hpp"

namespace wntv {

struct LabeledDataset {
    PointCloud cloud;
    std::vector<int> truth;  // class id per point, in [0, num_classes)
    int num_classes = 0;

    int n() const { return cloud.n(); }
};

// IDX pair reader: images file (magic 0x00000803) flattened row-major to
// one point per record with raw intensities in [0, 255], labels file
// (magic 0x00000801) with one byte per record. Bad magic, truncation and
// a record-count mismatch raise distinct IoErrors.
LabeledDataset load_mnist_idx(const std::string& images_path,
                              const std::string& labels_path);

// Uniform label sample without replacement, deterministic per seed. With
// stratified = true every class receives at least one pick, which requires
// count >= num_classes (error otherwise).
std::vector<int> sample_label_set(const LabeledDataset& dataset, int count,
                                  std::uint64_t rng_seed, bool stratified = true);

// Exactly per_class picks from every class, uniform within each.
std::vector<int> sample_label_set_per_class(const LabeledDataset& dataset, int per_class,
                                            std::uint64_t rng_seed);

struct SslOptions {
    SolverKind solver = SolverKind::WNTV;
    SolverOptions solver_options;
    int k_sparsify = 20;
    int r_sigma = 10;
};

struct SslResult {
    std::vector<int> predictions;         // labeled points keep their truth
    Eigen::MatrixXd scores;               // n x num_classes indicator interpolants
    std::vector<SplitBregmanState> states;  // per class, TV solvers only
};

// One-vs-all interpolation: per class solve with g = 1 on that class's
// labels and 0 on the rest, then argmax across classes (ties to the
// smallest class id). The overload without a graph builds one from the
// dataset with opts.k_sparsify / opts.r_sigma.
SslResult run_ssl(const SparseWeightGraph& graph, const LabeledDataset& dataset,
                  const std::vector<int>& labeled, const SslOptions& opts);
SslResult run_ssl(const LabeledDataset& dataset, const std::vector<int>& labeled,
                  const SslOptions& opts);

// Percentage of agreeing entries, skipping indices listed in
// exclude; throws when nothing is left to evaluate.
double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth,
                const std::vector<int>& exclude = {});

}  // namespace wntv
