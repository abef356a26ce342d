#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wntv/point_cloud.hpp"

namespace wntv {

// Sparse directed kNN graph with self-tuning Gaussian weights
//
//     w(x,y) = exp(-||x-y||^2 / sigma(x)^2),   sigma(x) = |x - x_r|,
//
// where x_r is the r_sigma-th nearest neighbor of x. Every point has exactly
// `k` out-edges (its k_sparsify nearest neighbors, ascending by distance), so
// directed edge (x, j) has the flat id x*k + j; per-edge values (gradients,
// split and Bregman variables) live in vectors with that alignment.
//
// `union_*` is the symmetrized sparsity pattern {(x,y): w(x,y)>0 or w(y,x)>0}
// in CSR form, rows sorted by neighbor index, carrying the flat edge id of
// each direction (-1 when that direction is not stored).
struct SparseWeightGraph {
    int n = 0;
    int k = 0;
    Eigen::MatrixXi neighbors;      // n x k
    Eigen::MatrixXd weights;        // n x k, in (0,1]
    Eigen::MatrixXd sqrt_weights;   // n x k, cached sqrt(w)
    Eigen::VectorXd sigma;          // n, > 0

    std::vector<int> union_ptr;       // n+1
    std::vector<int> union_idx;       // neighbor y
    std::vector<int> union_out_edge;  // id of x->y, or -1
    std::vector<int> union_in_edge;   // id of y->x, or -1

    int edge_count() const { return n * k; }
    int edge_id(int x, int j) const { return x * k + j; }
};

// Both directed weights between x and a union neighbor y; the missing
// direction reads as weight 0.
struct UnionNeighbor {
    int y;
    double w_out;  // w(x,y)
    double w_in;   // w(y,x)
};

// Builds the graph. Requires r_sigma <= k_sparsify <= n-1. Throws GraphError
// naming the offending point when sigma(x) = 0 (a duplicate cluster wider
// than r_sigma).
SparseWeightGraph build_weight_graph(const PointCloud& cloud, int k_sparsify, int r_sigma);

// The union_pattern row of x with both directed weights, ascending by y.
std::vector<UnionNeighbor> union_neighbors(const SparseWeightGraph& graph, int x);

}  // namespace wntv
