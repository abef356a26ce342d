#include "wntv/ssl.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>

#include "wntv/errors.hpp"
#include "wntv/labels.hpp"
#include "wntv/rng.hpp"

namespace wntv {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be_u32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) throw IoError(path + ": truncated header");
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

std::vector<std::uint8_t> read_bytes(std::istream& in, const std::string& path,
                                     size_t count) {
    std::vector<std::uint8_t> bytes(count);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
    if (static_cast<size_t>(in.gcount()) != count)
        throw IoError(path + ": truncated payload, expected " + std::to_string(count) +
                      " bytes, got " + std::to_string(in.gcount()));
    return bytes;
}

std::string hex(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%08x", v);
    return buf;
}

// Per-class member lists, ascending. Throws when a class id is out of
// range or a class is empty.
std::vector<std::vector<int>> class_members(const LabeledDataset& dataset) {
    if (dataset.num_classes < 1)
        throw std::invalid_argument("dataset declares no classes");
    std::vector<std::vector<int>> members(dataset.num_classes);
    for (int x = 0; x < dataset.n(); ++x) {
        const int c = dataset.truth[x];
        if (c < 0 || c >= dataset.num_classes)
            throw std::invalid_argument("class id " + std::to_string(c) + " at point " +
                                        std::to_string(x) + " is out of range");
        members[c].push_back(x);
    }
    return members;
}

}  // namespace

LabeledDataset load_mnist_idx(const std::string& images_path,
                              const std::string& labels_path) {
    std::ifstream img_in(images_path, std::ios::binary);
    if (!img_in) throw IoError(images_path + ": cannot open for reading");
    const std::uint32_t img_magic = read_be_u32(img_in, images_path);
    if (img_magic != kImagesMagic)
        throw IoError(images_path + ": bad magic number " + hex(img_magic) +
                      ", expected " + hex(kImagesMagic));
    const std::uint32_t img_count = read_be_u32(img_in, images_path);
    const std::uint32_t rows = read_be_u32(img_in, images_path);
    const std::uint32_t cols = read_be_u32(img_in, images_path);
    if (img_count == 0 || rows == 0 || cols == 0 || rows > 4096 || cols > 4096)
        throw IoError(images_path + ": implausible record geometry");

    std::ifstream lab_in(labels_path, std::ios::binary);
    if (!lab_in) throw IoError(labels_path + ": cannot open for reading");
    const std::uint32_t lab_magic = read_be_u32(lab_in, labels_path);
    if (lab_magic != kLabelsMagic)
        throw IoError(labels_path + ": bad magic number " + hex(lab_magic) +
                      ", expected " + hex(kLabelsMagic));
    const std::uint32_t lab_count = read_be_u32(lab_in, labels_path);
    if (lab_count != img_count)
        throw IoError("record count mismatch: " + images_path + " has " +
                      std::to_string(img_count) + " images, " + labels_path + " has " +
                      std::to_string(lab_count) + " labels");

    const size_t dim = static_cast<size_t>(rows) * cols;
    const std::vector<std::uint8_t> pixels =
        read_bytes(img_in, images_path, static_cast<size_t>(img_count) * dim);
    const std::vector<std::uint8_t> labels = read_bytes(lab_in, labels_path, lab_count);

    LabeledDataset ds;
    ds.num_classes = 10;
    ds.cloud.points.resize(static_cast<int>(img_count), static_cast<int>(dim));
    ds.truth.resize(img_count);
    size_t pos = 0;
    for (std::uint32_t i = 0; i < img_count; ++i) {
        for (size_t d = 0; d < dim; ++d)
            ds.cloud.points(static_cast<int>(i), static_cast<int>(d)) =
                static_cast<double>(pixels[pos++]);
        if (labels[i] > 9)
            throw IoError(labels_path + ": label " + std::to_string(int(labels[i])) +
                          " at record " + std::to_string(i) + " is not a digit");
        ds.truth[i] = labels[i];
    }
    return ds;
}

std::vector<int> sample_label_set(const LabeledDataset& dataset, int count,
                                  std::uint64_t rng_seed, bool stratified) {
    const int n = dataset.n();
    if (count < 1 || count > n)
        throw std::invalid_argument("label count " + std::to_string(count) +
                                    " out of range for " + std::to_string(n) + " points");
    std::mt19937_64 gen(rng_seed);
    std::vector<int> picked;
    if (!stratified) {
        picked = sample_without_replacement(n, count, gen);
    } else {
        if (count < dataset.num_classes)
            throw std::invalid_argument(
                "stratified sampling needs at least one label per class: count " +
                std::to_string(count) + " < " + std::to_string(dataset.num_classes) +
                " classes");
        const std::vector<std::vector<int>> members = class_members(dataset);
        std::vector<char> chosen(n, 0);
        for (int c = 0; c < dataset.num_classes; ++c) {
            if (members[c].empty())
                throw std::invalid_argument("class " + std::to_string(c) +
                                            " has no members to stratify over");
            const int pick =
                members[c][uniform_index(gen, static_cast<std::uint64_t>(members[c].size()))];
            chosen[pick] = 1;
            picked.push_back(pick);
        }
        std::vector<int> pool;
        pool.reserve(n - dataset.num_classes);
        for (int x = 0; x < n; ++x)
            if (!chosen[x]) pool.push_back(x);
        const int extra = count - dataset.num_classes;
        for (int i = 0; i < extra; ++i) {
            const int j =
                i + static_cast<int>(uniform_index(gen, static_cast<std::uint64_t>(pool.size() - i)));
            std::swap(pool[i], pool[j]);
            picked.push_back(pool[i]);
        }
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::vector<int> sample_label_set_per_class(const LabeledDataset& dataset, int per_class,
                                            std::uint64_t rng_seed) {
    if (per_class < 1) throw std::invalid_argument("per_class must be at least 1");
    const std::vector<std::vector<int>> members = class_members(dataset);
    std::mt19937_64 gen(rng_seed);
    std::vector<int> picked;
    for (int c = 0; c < dataset.num_classes; ++c) {
        std::vector<int> pool = members[c];
        if (static_cast<int>(pool.size()) < per_class)
            throw std::invalid_argument("class " + std::to_string(c) + " has only " +
                                        std::to_string(pool.size()) + " members, need " +
                                        std::to_string(per_class));
        for (int i = 0; i < per_class; ++i) {
            const int j =
                i + static_cast<int>(uniform_index(gen, static_cast<std::uint64_t>(pool.size() - i)));
            std::swap(pool[i], pool[j]);
            picked.push_back(pool[i]);
        }
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

SslResult run_ssl(const SparseWeightGraph& graph, const LabeledDataset& dataset,
                  const std::vector<int>& labeled, const SslOptions& opts) {
    const int n = dataset.n();
    if (graph.n != n)
        throw std::invalid_argument("graph size does not match dataset size");
    if (labeled.empty()) throw std::invalid_argument("labeled set is empty");
    const std::vector<std::vector<int>> members = class_members(dataset);  // validates truth
    (void)members;

    const int L = dataset.num_classes;
    SslResult result;
    result.scores.resize(n, L);

    const int ns = static_cast<int>(labeled.size());
    Eigen::VectorXd g(ns);
    for (int cls = 0; cls < L; ++cls) {
        for (int s = 0; s < ns; ++s)
            g[s] = dataset.truth[labeled[s]] == cls ? 1.0 : 0.0;
        const LabelConstraint constraint = make_label_constraint(labeled, g, n);
        SplitBregmanState state;
        result.scores.col(cls) =
            solve_interpolation(opts.solver, graph, constraint, opts.solver_options, &state);
        if (opts.solver == SolverKind::NTV || opts.solver == SolverKind::WNTV)
            result.states.push_back(std::move(state));
    }

    std::vector<char> is_labeled(n, 0);
    for (int s : labeled) is_labeled[s] = 1;
    result.predictions.resize(n);
    for (int x = 0; x < n; ++x) {
        if (is_labeled[x]) {
            result.predictions[x] = dataset.truth[x];
            continue;
        }
        int best = 0;
        for (int cls = 1; cls < L; ++cls)
            if (result.scores(x, cls) > result.scores(x, best)) best = cls;
        result.predictions[x] = best;
    }
    return result;
}

SslResult run_ssl(const LabeledDataset& dataset, const std::vector<int>& labeled,
                  const SslOptions& opts) {
    const SparseWeightGraph graph =
        build_weight_graph(dataset.cloud, opts.k_sparsify, opts.r_sigma);
    return run_ssl(graph, dataset, labeled, opts);
}

double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth,
                const std::vector<int>& exclude) {
    if (predictions.size() != truth.size())
        throw std::invalid_argument("prediction and truth lengths differ");
    std::vector<char> skip(predictions.size(), 0);
    for (int i : exclude) {
        if (i < 0 || static_cast<size_t>(i) >= predictions.size())
            throw std::invalid_argument("exclude index " + std::to_string(i) +
                                        " out of range");
        skip[i] = 1;
    }
    std::int64_t total = 0, correct = 0;
    for (size_t i = 0; i < predictions.size(); ++i) {
        if (skip[i]) continue;
        ++total;
        if (predictions[i] == truth[i]) ++correct;
    }
    if (total == 0) throw std::invalid_argument("accuracy over an empty evaluation set");
    return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace wntv
