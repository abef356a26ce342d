#include "wntv/weight_graph.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wntv/errors.hpp"

namespace wntv {

namespace {

// Merges per-row out-edges with incoming edges into the symmetrized CSR
// pattern. Out-edges arrive in kNN (distance) order and are sorted by target
// here; in-edges are gathered by a counting pass over all directed edges and
// are already source-sorted because x scans ascending.
void build_union_pattern(SparseWeightGraph& g) {
    const int n = g.n;
    const int k = g.k;

    std::vector<int> in_ptr(n + 1, 0);
    for (int x = 0; x < n; ++x)
        for (int j = 0; j < k; ++j) ++in_ptr[g.neighbors(x, j) + 1];
    for (int y = 0; y < n; ++y) in_ptr[y + 1] += in_ptr[y];

    std::vector<int> in_src(n * k), in_eid(n * k);
    {
        std::vector<int> cursor(in_ptr.begin(), in_ptr.end() - 1);
        for (int x = 0; x < n; ++x) {
            for (int j = 0; j < k; ++j) {
                const int slot = cursor[g.neighbors(x, j)]++;
                in_src[slot] = x;
                in_eid[slot] = g.edge_id(x, j);
            }
        }
    }

    g.union_ptr.assign(n + 1, 0);
    g.union_idx.clear();
    g.union_out_edge.clear();
    g.union_in_edge.clear();
    g.union_idx.reserve(2 * n * k);
    g.union_out_edge.reserve(2 * n * k);
    g.union_in_edge.reserve(2 * n * k);

    std::vector<std::pair<int, int>> out_sorted(k);  // (target, edge id)
    for (int x = 0; x < n; ++x) {
        for (int j = 0; j < k; ++j) out_sorted[j] = {g.neighbors(x, j), g.edge_id(x, j)};
        std::sort(out_sorted.begin(), out_sorted.end());

        int oi = 0;
        int ii = in_ptr[x];
        const int iend = in_ptr[x + 1];
        while (oi < k || ii < iend) {
            const int oy = oi < k ? out_sorted[oi].first : INT_MAX;
            const int iy = ii < iend ? in_src[ii] : INT_MAX;
            if (oy < iy) {
                g.union_idx.push_back(oy);
                g.union_out_edge.push_back(out_sorted[oi].second);
                g.union_in_edge.push_back(-1);
                ++oi;
            } else if (iy < oy) {
                g.union_idx.push_back(iy);
                g.union_out_edge.push_back(-1);
                g.union_in_edge.push_back(in_eid[ii]);
                ++ii;
            } else {
                g.union_idx.push_back(oy);
                g.union_out_edge.push_back(out_sorted[oi].second);
                g.union_in_edge.push_back(in_eid[ii]);
                ++oi;
                ++ii;
            }
        }
        g.union_ptr[x + 1] = static_cast<int>(g.union_idx.size());
    }
}

}  // namespace

SparseWeightGraph build_weight_graph(const PointCloud& cloud, int k_sparsify, int r_sigma) {
    const int n = cloud.n();
    if (r_sigma < 1 || k_sparsify < r_sigma)
        throw std::invalid_argument("build_weight_graph: need 1 <= r_sigma <= k_sparsify");
    if (k_sparsify > n - 1)
        throw std::invalid_argument("build_weight_graph: k_sparsify > n-1");

    const NeighborLists nn = knn_search(cloud, k_sparsify);

    SparseWeightGraph g;
    g.n = n;
    g.k = k_sparsify;
    g.neighbors = nn.indices;
    g.sigma.resize(n);
    g.weights.resize(n, k_sparsify);
    g.sqrt_weights.resize(n, k_sparsify);

    for (int x = 0; x < n; ++x) {
        const double s = nn.distances(x, r_sigma - 1);
        if (s <= 0.0)
            throw GraphError("build_weight_graph: sigma(x) = 0 at point " + std::to_string(x) +
                                 "; at least " + std::to_string(r_sigma) +
                                 " duplicates of it exist, deduplicate the input",
                             x);
        g.sigma(x) = s;
        for (int j = 0; j < k_sparsify; ++j) {
            const double dist = nn.distances(x, j);
            const double w = std::exp(-(dist * dist) / (s * s));
            g.weights(x, j) = w;
            g.sqrt_weights(x, j) = std::sqrt(w);
        }
    }

    build_union_pattern(g);
    return g;
}

std::vector<UnionNeighbor> union_neighbors(const SparseWeightGraph& graph, int x) {
    if (x < 0 || x >= graph.n) throw std::invalid_argument("union_neighbors: index out of range");
    std::vector<UnionNeighbor> row;
    row.reserve(graph.union_ptr[x + 1] - graph.union_ptr[x]);
    for (int e = graph.union_ptr[x]; e < graph.union_ptr[x + 1]; ++e) {
        const int oe = graph.union_out_edge[e];
        const int ie = graph.union_in_edge[e];
        row.push_back({graph.union_idx[e],
                       oe >= 0 ? graph.weights(oe / graph.k, oe % graph.k) : 0.0,
                       ie >= 0 ? graph.weights(ie / graph.k, ie % graph.k) : 0.0});
    }
    return row;
}

}  // namespace wntv
