#pragma once

#include "rdafem/fem.hpp"

namespace rdafem {

class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

enum class SolverMethod {
    lu,        // sparse direct factorization
    cg,        // conjugate gradient, diagonal preconditioner
    bicgstab,  // BiCGSTAB, diagonal preconditioner (handles indefinite shifts)
};

struct SolverConfig {
    SolverMethod method = SolverMethod::lu;
    double rtol = 1e-10;
    int max_iterations = 10000;
};

SolverMethod solver_method_from_name(const std::string& name);
std::string solver_method_name(SolverMethod m);

/// Solves A x = b to ||Ax - b|| <= rtol ||b||. Iterative breakdown or
/// non-convergence raises SolverError with the iteration count and final
/// residual.
Eigen::VectorXd solve_linear(const SparseOperator& A, const Eigen::VectorXd& b,
                             const SolverConfig& cfg);

}  // namespace rdafem
