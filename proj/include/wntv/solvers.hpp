#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wntv/labels.hpp"
#include "wntv/weight_graph.hpp"

namespace wntv {

using Vector = Eigen::VectorXd;

// Per-directed-edge scalar values, aligned with SparseWeightGraph's flat
// edge ids (length graph.edge_count()). Holds the nonlocal gradient, the
// split variable D and the Bregman variable Q.
using EdgeField = Vector;

enum class SolverKind { GL, WNLL, NTV, WNTV };

SolverKind solver_kind_from_string(const std::string& name);
std::string to_string(SolverKind kind);

struct SolverOptions {
    double lambda = 1.0;            // split Bregman penalty
    std::optional<double> mu;       // label-row weight; defaults to |V|/|S|
    int max_bregman_iters = 50;
    double bregman_tol = 1e-4;      // relative constraint residual
    double cg_tol = 1e-6;
    int cg_max_iters = 1000;
};

struct SplitBregmanState {
    Vector u;
    EdgeField D;
    EdgeField Q;
    int iterations = 0;
    // ||D - D_NG u|| / max(||D_NG u||, eps) after each iteration.
    std::vector<double> residual_history;
};

// -------------------------------------------------------------------------
// Pinned quadratic systems
//
// GL, WNLL and the split-Bregman u-subproblem all reduce to the same shape:
// for every unlabeled x,
//
//   sum_y [ w(x,y) + beta(y) w(y,x) ] (u(x) - u(y)) = b(x),
//
// with u pinned to g on S and beta(y) = back_scale for labeled y, 1
// otherwise (GL: back_scale 1, WNLL: mu, u-subproblem: mu^2). The operator
// restricted to the unlabeled unknowns is sparse, symmetric and positive
// definite whenever every unlabeled component touches a labeled point.
// -------------------------------------------------------------------------
struct PinnedSystem {
    const SparseWeightGraph* graph = nullptr;
    std::vector<char> labeled;     // point -> in S
    std::vector<int> free_idx;     // unlabeled points, ascending
    std::vector<int> pos;          // point -> free position, -1 if labeled
    std::vector<int> label_slot;   // point -> position in labels.indices, -1 if free
    Vector diag;                   // free row sums (Jacobi preconditioner)

    std::vector<int> row_ptr;      // free-free couplings, CSR
    std::vector<int> col;
    std::vector<double> coeff;

    std::vector<int> lab_ptr;      // free-labeled couplings, CSR
    std::vector<int> lab_slot_of;  // slot into labels.values
    std::vector<double> lab_coeff;

    int free_count() const { return static_cast<int>(free_idx.size()); }

    Vector apply(const Vector& v) const;
    Vector jacobi(const Vector& r) const;
    // sum_{y in S} c(x,y) g(y) per free row.
    Vector rhs_from_labels(const Vector& g) const;
    // Full-length u from free values plus pinned labels.
    Vector scatter(const Vector& u_free, const LabelConstraint& labels) const;
    Vector gather(const Vector& u_full) const;
    // Split-Bregman source terms from R = D - Q per free row.
    Vector source_from_edges(const EdgeField& D, const EdgeField& Q, double mu) const;
};

// Assembles the pinned system. Throws SolverError (singular system) when an
// unlabeled component has no labeled point. The graph must outlive the
// returned system.
PinnedSystem assemble_pinned_system(const SparseWeightGraph& graph,
                                    const LabelConstraint& labels, double back_scale);

// Weighted nonlocal gradient: per edge (x,y),
//   sqrt(w(x,y)) (u(x) - u(y)), scaled by mu when x is labeled.
EdgeField nonlocal_gradient(const SparseWeightGraph& graph, const Vector& u,
                            const LabelConstraint& labels, double mu);

/// Soft shrinkage: z * max(||z|| - gamma, 0) / ||z||, the minimizer of
/// gamma ||d|| + 1/2 ||d - z||^2; the zero vector when ||z|| = 0.
template <typename Derived>
typename Derived::PlainObject shrink(const Eigen::MatrixBase<Derived>& z,
                                     typename Derived::Scalar gamma) {
    using Scalar = typename Derived::Scalar;
    using Plain = typename Derived::PlainObject;
    const Scalar norm = z.norm();
    if (norm == Scalar(0) || norm <= gamma)
        return Plain::Zero(z.rows(), z.cols());
    return z * ((norm - gamma) / norm);
}

// Rowwise shrink over a per-point edge field: row x holds the k out-edge
// values of point x.
EdgeField shrink_rows(const SparseWeightGraph& graph, const EdgeField& field, double gamma);

// One Bregman multiplier update: Q + D_NG u - D.
EdgeField q_update(const EdgeField& Q, const EdgeField& D_NG_u, const EdgeField& D);

// The weighted nonlocal TV energy
//   sum_{x not in S} ||row_x|| + mu sum_{x in S} ||row_x||,
//   row_x(y) = sqrt(w(x,y)) (u(x) - u(y)).
double wntv_energy(const SparseWeightGraph& graph, const Vector& u,
                   const LabelConstraint& labels, double mu);

// Quadratic interpolants. solve_wnll with mu = 1 coincides with solve_gl.
Vector solve_gl(const SparseWeightGraph& graph, const LabelConstraint& labels,
                const SolverOptions& opts = {});
Vector solve_wnll(const SparseWeightGraph& graph, const LabelConstraint& labels,
                  double mu, const SolverOptions& opts = {});
Vector solve_wnll(const SparseWeightGraph& graph, const LabelConstraint& labels,
                  const SolverOptions& opts = {});

// Exact solution of min_u ||D - D_NG u - Q||^2 with u pinned to g on S,
// by conjugate gradient on the unlabeled unknowns.
Vector u_subproblem(const SparseWeightGraph& graph, const LabelConstraint& labels,
                    const EdgeField& D, const EdgeField& Q, double mu,
                    const SolverOptions& opts = {});

// Rowwise shrink step: shrink(D_NG u(x,:) + Q(x,:), 1/lambda).
EdgeField d_subproblem(const SparseWeightGraph& graph, const Vector& u, const EdgeField& Q,
                       const LabelConstraint& labels, double mu, double lambda);

// Split Bregman iteration for the weighted nonlocal TV model. Starts from
// u = g on S and 0 elsewhere, D = Q = 0; stops when the relative constraint
// residual drops below bregman_tol or at max_bregman_iters.
std::pair<Vector, SplitBregmanState> solve_wntv(const SparseWeightGraph& graph,
                                                const LabelConstraint& labels,
                                                const SolverOptions& opts = {});

// Unweighted nonlocal TV: solve_wntv with mu forced to 1.
Vector solve_ntv(const SparseWeightGraph& graph, const LabelConstraint& labels,
                 const SolverOptions& opts = {});

// Uniform entry point used by the pipelines; fills *state for the TV
// solvers when given.
Vector solve_interpolation(SolverKind kind, const SparseWeightGraph& graph,
                           const LabelConstraint& labels, const SolverOptions& opts,
                           SplitBregmanState* state = nullptr);

}  // namespace wntv
