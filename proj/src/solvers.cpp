#include "wntv/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "wntv/cg.hpp"
#include "wntv/errors.hpp"

namespace wntv {

namespace {

void check_edge_field(const SparseWeightGraph& graph, const EdgeField& field,
                      const char* name) {
    if (field.size() != graph.edge_count())
        throw std::invalid_argument(std::string(name) + ": expected " +
                                    std::to_string(graph.edge_count()) + " edge values, got " +
                                    std::to_string(field.size()));
}

void check_function(const SparseWeightGraph& graph, const Vector& u) {
    if (u.size() != graph.n)
        throw std::invalid_argument("u: expected " + std::to_string(graph.n) +
                                    " values, got " + std::to_string(u.size()));
}

double default_mu(const SparseWeightGraph& graph, const LabelConstraint& labels) {
    return static_cast<double>(graph.n) / static_cast<double>(labels.count());
}

// Every unlabeled point must reach a labeled one through the symmetrized
// adjacency, otherwise the pinned system has a zero-energy mode.
void check_reachability(const SparseWeightGraph& graph, const std::vector<char>& labeled) {
    std::vector<char> seen(graph.n, 0);
    std::deque<int> queue;
    for (int x = 0; x < graph.n; ++x) {
        if (labeled[x]) {
            seen[x] = 1;
            queue.push_back(x);
        }
    }
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int e = graph.union_ptr[x]; e < graph.union_ptr[x + 1]; ++e) {
            const int y = graph.union_idx[e];
            if (!seen[y]) {
                seen[y] = 1;
                queue.push_back(y);
            }
        }
    }
    for (int x = 0; x < graph.n; ++x) {
        if (!seen[x])
            throw SolverError("singular system: point " + std::to_string(x) +
                              " has no path to a labeled point");
    }
}

Vector solve_pinned(const PinnedSystem& sys, const LabelConstraint& labels,
                    const Vector& rhs, const SolverOptions& opts,
                    const Vector* guess) {
    if (sys.free_count() == 0)
        return sys.scatter(Vector(), labels);
    Vector u_free = cg_solve([&sys](const Vector& v) { return sys.apply(v); }, rhs,
                             opts.cg_tol, opts.cg_max_iters,
                             [&sys](const Vector& r) { return sys.jacobi(r); }, guess);
    return sys.scatter(u_free, labels);
}

}  // namespace

SolverKind solver_kind_from_string(const std::string& name) {
    if (name == "gl") return SolverKind::GL;
    if (name == "wnll") return SolverKind::WNLL;
    if (name == "ntv") return SolverKind::NTV;
    if (name == "wntv") return SolverKind::WNTV;
    throw std::invalid_argument("unknown solver '" + name + "' (expected gl, wnll, ntv or wntv)");
}

std::string to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::GL: return "gl";
        case SolverKind::WNLL: return "wnll";
        case SolverKind::NTV: return "ntv";
        case SolverKind::WNTV: return "wntv";
    }
    throw std::invalid_argument("unknown solver kind");
}

Vector PinnedSystem::apply(const Vector& v) const {
    const int nf = free_count();
    Vector out(nf);
    for (int r = 0; r < nf; ++r) {
        double acc = diag[r] * v[r];
        for (int e = row_ptr[r]; e < row_ptr[r + 1]; ++e)
            acc -= coeff[e] * v[col[e]];
        out[r] = acc;
    }
    return out;
}

Vector PinnedSystem::jacobi(const Vector& r) const {
    return r.cwiseQuotient(diag);
}

Vector PinnedSystem::rhs_from_labels(const Vector& g) const {
    const int nf = free_count();
    Vector rhs = Vector::Zero(nf);
    for (int r = 0; r < nf; ++r) {
        double acc = 0.0;
        for (int e = lab_ptr[r]; e < lab_ptr[r + 1]; ++e)
            acc += lab_coeff[e] * g[lab_slot_of[e]];
        rhs[r] = acc;
    }
    return rhs;
}

Vector PinnedSystem::scatter(const Vector& u_free, const LabelConstraint& labels) const {
    Vector u(static_cast<int>(pos.size()));
    for (int r = 0; r < free_count(); ++r)
        u[free_idx[r]] = u_free[r];
    for (int s = 0; s < labels.count(); ++s)
        u[labels.indices[s]] = labels.values[s];
    return u;
}

Vector PinnedSystem::gather(const Vector& u_full) const {
    Vector u_free(free_count());
    for (int r = 0; r < free_count(); ++r)
        u_free[r] = u_full[free_idx[r]];
    return u_free;
}

Vector PinnedSystem::source_from_edges(const EdgeField& D, const EdgeField& Q,
                                       double mu) const {
    const SparseWeightGraph& g = *graph;
    check_edge_field(g, D, "D");
    check_edge_field(g, Q, "Q");
    const int nf = free_count();
    Vector src = Vector::Zero(nf);
    for (int r = 0; r < nf; ++r) {
        const int z = free_idx[r];
        double acc = 0.0;
        for (int e = g.union_ptr[z]; e < g.union_ptr[z + 1]; ++e) {
            const int y = g.union_idx[e];
            const int out_e = g.union_out_edge[e];
            const int in_e = g.union_in_edge[e];
            if (out_e >= 0)
                acc += g.sqrt_weights(z, out_e - z * g.k) * (D[out_e] - Q[out_e]);
            if (in_e >= 0) {
                const double rho = labeled[y] ? mu : 1.0;
                acc -= rho * g.sqrt_weights(y, in_e - y * g.k) * (D[in_e] - Q[in_e]);
            }
        }
        src[r] = acc;
    }
    return src;
}

PinnedSystem assemble_pinned_system(const SparseWeightGraph& graph,
                                    const LabelConstraint& labels, double back_scale) {
    if (!(back_scale > 0.0))
        throw std::invalid_argument("back_scale must be positive");
    const int n = graph.n;
    if (labels.indices.empty() || labels.indices.back() >= n)
        throw std::invalid_argument("label constraint does not match graph size");

    PinnedSystem sys;
    sys.graph = &graph;
    sys.labeled = label_mask(labels, n);
    check_reachability(graph, sys.labeled);

    sys.pos.assign(n, -1);
    sys.label_slot.assign(n, -1);
    for (int s = 0; s < labels.count(); ++s)
        sys.label_slot[labels.indices[s]] = s;
    for (int x = 0; x < n; ++x) {
        if (!sys.labeled[x]) {
            sys.pos[x] = static_cast<int>(sys.free_idx.size());
            sys.free_idx.push_back(x);
        }
    }

    const int nf = sys.free_count();
    sys.diag = Vector::Zero(nf);
    sys.row_ptr.assign(nf + 1, 0);
    sys.lab_ptr.assign(nf + 1, 0);
    for (int r = 0; r < nf; ++r) {
        const int z = sys.free_idx[r];
        double dsum = 0.0;
        for (int e = graph.union_ptr[z]; e < graph.union_ptr[z + 1]; ++e) {
            const int y = graph.union_idx[e];
            const int out_e = graph.union_out_edge[e];
            const int in_e = graph.union_in_edge[e];
            const double w_out = out_e >= 0 ? graph.weights(z, out_e - z * graph.k) : 0.0;
            const double w_in = in_e >= 0 ? graph.weights(y, in_e - y * graph.k) : 0.0;
            // Coupling seen from row z; symmetric across (z, y) because the
            // labeled scaling depends only on the labeled endpoint.
            const double c = sys.labeled[y] ? (w_out + back_scale * w_in) : (w_out + w_in);
            dsum += c;
            if (sys.labeled[y]) {
                sys.lab_slot_of.push_back(sys.label_slot[y]);
                sys.lab_coeff.push_back(c);
            } else {
                sys.col.push_back(sys.pos[y]);
                sys.coeff.push_back(c);
            }
        }
        sys.diag[r] = dsum;
        sys.row_ptr[r + 1] = static_cast<int>(sys.col.size());
        sys.lab_ptr[r + 1] = static_cast<int>(sys.lab_coeff.size());
    }
    return sys;
}

EdgeField nonlocal_gradient(const SparseWeightGraph& graph, const Vector& u,
                            const LabelConstraint& labels, double mu) {
    check_function(graph, u);
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
    const std::vector<char> labeled = label_mask(labels, graph.n);
    EdgeField field(graph.edge_count());
    for (int x = 0; x < graph.n; ++x) {
        const double rho = labeled[x] ? mu : 1.0;
        const double ux = u[x];
        for (int j = 0; j < graph.k; ++j)
            field[graph.edge_id(x, j)] =
                rho * graph.sqrt_weights(x, j) * (ux - u[graph.neighbors(x, j)]);
    }
    return field;
}

EdgeField shrink_rows(const SparseWeightGraph& graph, const EdgeField& field, double gamma) {
    check_edge_field(graph, field, "field");
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
    EdgeField out(field.size());
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> rows(field.data(), graph.n, graph.k);
    Eigen::Map<RowMajor> shrunk(out.data(), graph.n, graph.k);
    for (int x = 0; x < graph.n; ++x) {
        const double norm = rows.row(x).norm();
        if (norm == 0.0 || norm <= gamma)
            shrunk.row(x).setZero();
        else
            shrunk.row(x) = rows.row(x) * ((norm - gamma) / norm);
    }
    return out;
}

EdgeField q_update(const EdgeField& Q, const EdgeField& D_NG_u, const EdgeField& D) {
    if (Q.size() != D_NG_u.size() || Q.size() != D.size())
        throw std::invalid_argument("q_update: edge field sizes differ");
    return Q + D_NG_u - D;
}

double wntv_energy(const SparseWeightGraph& graph, const Vector& u,
                   const LabelConstraint& labels, double mu) {
    check_function(graph, u);
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
    const std::vector<char> labeled = label_mask(labels, graph.n);
    double energy = 0.0;
    for (int x = 0; x < graph.n; ++x) {
        double acc = 0.0;
        const double ux = u[x];
        for (int j = 0; j < graph.k; ++j) {
            const double diff = ux - u[graph.neighbors(x, j)];
            acc += graph.weights(x, j) * diff * diff;
        }
        energy += (labeled[x] ? mu : 1.0) * std::sqrt(acc);
    }
    return energy;
}

Vector solve_gl(const SparseWeightGraph& graph, const LabelConstraint& labels,
                const SolverOptions& opts) {
    const PinnedSystem sys = assemble_pinned_system(graph, labels, 1.0);
    return solve_pinned(sys, labels, sys.rhs_from_labels(labels.values), opts, nullptr);
}

Vector solve_wnll(const SparseWeightGraph& graph, const LabelConstraint& labels,
                  double mu, const SolverOptions& opts) {
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
    const PinnedSystem sys = assemble_pinned_system(graph, labels, mu);
    return solve_pinned(sys, labels, sys.rhs_from_labels(labels.values), opts, nullptr);
}

Vector solve_wnll(const SparseWeightGraph& graph, const LabelConstraint& labels,
                  const SolverOptions& opts) {
    return solve_wnll(graph, labels, opts.mu.value_or(default_mu(graph, labels)), opts);
}

Vector u_subproblem(const SparseWeightGraph& graph, const LabelConstraint& labels,
                    const EdgeField& D, const EdgeField& Q, double mu,
                    const SolverOptions& opts) {
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
    const PinnedSystem sys = assemble_pinned_system(graph, labels, mu * mu);
    const Vector rhs = sys.rhs_from_labels(labels.values) + sys.source_from_edges(D, Q, mu);
    return solve_pinned(sys, labels, rhs, opts, nullptr);
}

EdgeField d_subproblem(const SparseWeightGraph& graph, const Vector& u, const EdgeField& Q,
                       const LabelConstraint& labels, double mu, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    check_edge_field(graph, Q, "Q");
    return shrink_rows(graph, nonlocal_gradient(graph, u, labels, mu) + Q, 1.0 / lambda);
}

std::pair<Vector, SplitBregmanState> solve_wntv(const SparseWeightGraph& graph,
                                                const LabelConstraint& labels,
                                                const SolverOptions& opts) {
    if (!(opts.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double mu = opts.mu.value_or(default_mu(graph, labels));
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");

    const PinnedSystem sys = assemble_pinned_system(graph, labels, mu * mu);
    const Vector base_rhs = sys.rhs_from_labels(labels.values);

    SplitBregmanState state;
    state.u = sys.scatter(Vector::Zero(sys.free_count()), labels);
    state.D = EdgeField::Zero(graph.edge_count());
    state.Q = EdgeField::Zero(graph.edge_count());

    if (sys.free_count() == 0) return {state.u, state};

    constexpr double kEps = 1e-12;
    Vector u_free = sys.gather(state.u);
    for (int it = 0; it < opts.max_bregman_iters; ++it) {
        const Vector rhs = base_rhs + sys.source_from_edges(state.D, state.Q, mu);
        u_free = cg_solve([&sys](const Vector& v) { return sys.apply(v); }, rhs,
                          opts.cg_tol, opts.cg_max_iters,
                          [&sys](const Vector& r) { return sys.jacobi(r); }, &u_free);
        state.u = sys.scatter(u_free, labels);

        const EdgeField grad = nonlocal_gradient(graph, state.u, labels, mu);
        state.D = shrink_rows(graph, grad + state.Q, 1.0 / opts.lambda);
        state.Q = q_update(state.Q, grad, state.D);
        state.iterations = it + 1;

        const double residual =
            (state.D - grad).norm() / std::max(grad.norm(), kEps);
        state.residual_history.push_back(residual);
        if (!std::isfinite(residual) || !state.u.allFinite())
            throw SolverError("split Bregman diverged at iteration " + std::to_string(it + 1));
        if (residual < opts.bregman_tol) break;
    }
    return {state.u, state};
}

Vector solve_ntv(const SparseWeightGraph& graph, const LabelConstraint& labels,
                 const SolverOptions& opts) {
    SolverOptions ntv_opts = opts;
    ntv_opts.mu = 1.0;
    return solve_wntv(graph, labels, ntv_opts).first;
}

Vector solve_interpolation(SolverKind kind, const SparseWeightGraph& graph,
                           const LabelConstraint& labels, const SolverOptions& opts,
                           SplitBregmanState* state) {
    switch (kind) {
        case SolverKind::GL:
            return solve_gl(graph, labels, opts);
        case SolverKind::WNLL:
            return solve_wnll(graph, labels, opts);
        case SolverKind::NTV: {
            SolverOptions ntv_opts = opts;
            ntv_opts.mu = 1.0;
            auto [u, st] = solve_wntv(graph, labels, ntv_opts);
            if (state) *state = std::move(st);
            return u;
        }
        case SolverKind::WNTV: {
            auto [u, st] = solve_wntv(graph, labels, opts);
            if (state) *state = std::move(st);
            return u;
        }
    }
    throw std::invalid_argument("unknown solver kind");
}

}  // namespace wntv
