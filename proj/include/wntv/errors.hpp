#pragma once

#include <stdexcept>
#include <string>

namespace wntv {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File format / filesystem problems (PGM/PPM, IDX, config files).
struct IoError : Error {
    using Error::Error;
};

// Degenerate graph construction (duplicate clusters, bad neighbor counts).
// point is the offending point index when one exists, -1 otherwise; callers
// that know more about the cloud (e.g. patch grids) use it to attach
// coordinates.
struct GraphError : Error {
    explicit GraphError(const std::string& what, int point = -1)
        : Error(what), point(point) {}
    int point;
};

// Solver-level failures: singular systems, divergence.
struct SolverError : Error {
    using Error::Error;
};

// Conjugate gradient hit its iteration cap; carries the residual it reached.
struct CgFailure : SolverError {
    CgFailure(const std::string& msg, double achieved, int iters)
        : SolverError(msg), achieved_residual(achieved), iterations(iters) {}
    double achieved_residual;
    int iterations;
};

}  // namespace wntv
