#pragma once

#include <Eigen/Dense>

namespace wntv {

// A set of n points in d-dimensional feature space, one point per row.
struct PointCloud {
    Eigen::MatrixXd points;

    PointCloud() = default;
    explicit PointCloud(Eigen::MatrixXd pts) : points(std::move(pts)) {}

    int n() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

// k nearest neighbors per point, ascending by distance, self excluded.
// Row x of `indices`/`distances` is the ordered neighbor list of point x;
// distances are Euclidean. Ties are broken by the smaller point index.
struct NeighborLists {
    Eigen::MatrixXi indices;
    Eigen::MatrixXd distances;

    int n() const { return static_cast<int>(indices.rows()); }
    int k() const { return static_cast<int>(indices.cols()); }
};

// Exact brute-force kNN over Euclidean distance. 1 <= k <= n-1; throws
// std::invalid_argument on bad k or non-finite coordinates.
NeighborLists knn_search(const PointCloud& cloud, int k);

}  // namespace wntv
