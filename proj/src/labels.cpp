#include "wntv/labels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wntv {

LabelConstraint make_label_constraint(std::vector<int> indices, Eigen::VectorXd values, int n) {
    if (indices.empty()) throw std::invalid_argument("label constraint: S is empty");
    if (static_cast<int>(indices.size()) != values.size())
        throw std::invalid_argument("label constraint: index/value length mismatch");
    if (!values.allFinite()) throw std::invalid_argument("label constraint: non-finite value");

    std::vector<int> order(indices.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return indices[a] < indices[b]; });

    LabelConstraint out;
    out.indices.resize(indices.size());
    out.values.resize(values.size());
    for (size_t i = 0; i < order.size(); ++i) {
        out.indices[i] = indices[order[i]];
        out.values[static_cast<int>(i)] = values[order[i]];
    }
    for (size_t i = 0; i < out.indices.size(); ++i) {
        if (out.indices[i] < 0 || out.indices[i] >= n)
            throw std::invalid_argument("label constraint: index out of range");
        if (i > 0 && out.indices[i] == out.indices[i - 1])
            throw std::invalid_argument("label constraint: duplicate index");
    }
    return out;
}

std::vector<char> label_mask(const LabelConstraint& labels, int n) {
    std::vector<char> mask(n, 0);
    for (int s : labels.indices) mask[s] = 1;
    return mask;
}

}  // namespace wntv
