#pragma once

#include <Eigen/Dense>
#include <vector>

namespace wntv {

// The labeled subset S and its target values g, one scalar channel.
// Indices are sorted ascending and unique; values are finite.
struct LabelConstraint {
    std::vector<int> indices;
    Eigen::VectorXd values;

    int count() const { return static_cast<int>(indices.size()); }
};

// Validates and normalizes (sorts pairs by index). Throws
// std::invalid_argument on empty S, duplicates, out-of-range indices or
// non-finite values.
LabelConstraint make_label_constraint(std::vector<int> indices, Eigen::VectorXd values, int n);

// Per-point membership mask for S, built once per solve.
std::vector<char> label_mask(const LabelConstraint& labels, int n);

}  // namespace wntv
