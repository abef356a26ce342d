#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "wntv/errors.hpp"

namespace wntv {

using Vector = Eigen::VectorXd;

namespace detail {
struct IdentityPrecond {
    const Vector& operator()(const Vector& r) const { return r; }
};
}  // namespace detail

/// Preconditioned conjugate gradient for a symmetric positive definite
/// operator given as a callback `apply(v) -> A v`. Returns x with
/// ||A x - rhs|| / ||rhs|| <= tol. rhs == 0 returns the zero vector.
/// Throws CgFailure (carrying the achieved residual) at the iteration cap.
/// `precond(r)` must apply an SPD approximation of A^-1; `guess`, when
/// given, is the starting iterate.
template <typename Op, typename Precond = detail::IdentityPrecond>
Vector cg_solve(Op&& apply, const Vector& rhs, double tol, int max_iters,
                Precond&& precond = Precond{}, const Vector* guess = nullptr) {
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) return Vector::Zero(rhs.size());
    const double target = tol * rhs_norm;

    Vector x;
    Vector r;
    if (guess != nullptr && guess->size() == rhs.size()) {
        x = *guess;
        r = rhs - apply(x);
    } else {
        x = Vector::Zero(rhs.size());
        r = rhs;
    }
    double res_norm = r.norm();
    if (res_norm <= target) return x;

    Vector z = precond(r);
    Vector p = z;
    double rho = r.dot(z);

    for (int it = 0; it < max_iters; ++it) {
        const Vector ap = apply(p);
        const double denom = p.dot(ap);
        if (!(denom > 0.0) || !std::isfinite(denom))
            throw SolverError("cg_solve: operator not positive definite along search direction");
        const double alpha = rho / denom;
        x += alpha * p;
        r -= alpha * ap;
        res_norm = r.norm();
        if (res_norm <= target) return x;
        z = precond(r);
        const double rho_next = r.dot(z);
        p = z + (rho_next / rho) * p;
        rho = rho_next;
    }
    throw CgFailure("cg_solve: iteration cap reached before tolerance",
                    res_norm / rhs_norm, max_iters);
}

}  // namespace wntv
