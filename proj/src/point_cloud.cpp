#include "wntv/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wntv {

// Distances are expanded as ||x||^2 + ||y||^2 - 2<x,y> so a whole block of
// queries becomes one GEMM. On integer-valued data (raw images, patches of
// them) every term is exactly representable, so the expansion is exact and
// the neighbor order matches the direct O(n^2 d) computation.
NeighborLists knn_search(const PointCloud& cloud, int k) {
    const int n = cloud.n();
    const int d = cloud.dim();
    if (n < 1 || d < 1) throw std::invalid_argument("knn_search: empty point cloud");
    if (!cloud.points.allFinite())
        throw std::invalid_argument("knn_search: non-finite coordinates in point cloud");
    if (k < 1) throw std::invalid_argument("knn_search: k must be positive");
    if (k >= n) throw std::invalid_argument("knn_search: k >= n, not enough neighbors");

    NeighborLists out;
    out.indices.resize(n, k);
    out.distances.resize(n, k);

    const Eigen::VectorXd sq_norms = cloud.points.rowwise().squaredNorm();

    constexpr int kBlock = 256;
    std::vector<std::pair<double, int>> cand(static_cast<size_t>(n));
    Eigen::MatrixXd block_d2;
    for (int lo = 0; lo < n; lo += kBlock) {
        const int rows = std::min(kBlock, n - lo);
        block_d2.noalias() = -2.0 * (cloud.points.middleRows(lo, rows) * cloud.points.transpose());
        block_d2.colwise() += sq_norms.segment(lo, rows);
        block_d2.rowwise() += sq_norms.transpose();

        for (int r = 0; r < rows; ++r) {
            const int x = lo + r;
            size_t m = 0;
            for (int y = 0; y < n; ++y) {
                if (y == x) continue;
                cand[m++] = {std::max(block_d2(r, y), 0.0), y};
            }
            std::partial_sort(cand.begin(), cand.begin() + k, cand.begin() + static_cast<long>(m));
            for (int j = 0; j < k; ++j) {
                out.indices(x, j) = cand[static_cast<size_t>(j)].second;
                out.distances(x, j) = std::sqrt(cand[static_cast<size_t>(j)].first);
            }
        }
    }
    return out;
}

}  // namespace wntv
