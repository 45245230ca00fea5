#include "rdafem/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <sstream>

namespace rdafem {

SolverMethod solver_method_from_name(const std::string& name) {
    if (name == "lu") return SolverMethod::lu;
    if (name == "cg") return SolverMethod::cg;
    if (name == "bicgstab") return SolverMethod::bicgstab;
    throw SolverError("unknown solver method '" + name + "' (expected lu, cg or bicgstab)");
}

std::string solver_method_name(SolverMethod m) {
    switch (m) {
        case SolverMethod::lu: return "lu";
        case SolverMethod::cg: return "cg";
        case SolverMethod::bicgstab: return "bicgstab";
    }
    return "?";
}

namespace {

template <typename Solver>
Eigen::VectorXd solve_iterative(Solver& solver, const SparseOperator& A, const Eigen::VectorXd& b,
                                const SolverConfig& cfg, const char* name) {
    solver.setTolerance(0.5 * cfg.rtol);
    solver.setMaxIterations(cfg.max_iterations);
    solver.compute(A.matrix());
    Eigen::VectorXd x = solver.solve(b);
    const double residual = (A.matrix() * x - b).norm();
    if (!x.allFinite() || residual > cfg.rtol * b.norm()) {
        std::ostringstream os;
        os << name << " did not converge: " << solver.iterations() << " iterations, residual "
           << residual << " (rtol " << cfg.rtol << ", ||b|| = " << b.norm() << ")";
        throw SolverError(os.str());
    }
    return x;
}

}  // namespace

Eigen::VectorXd solve_linear(const SparseOperator& A, const Eigen::VectorXd& b,
                             const SolverConfig& cfg) {
    if (A.dim() != b.size()) throw SolverError("solve_linear: dimension mismatch");
    if (!b.allFinite()) throw SolverError("solve_linear: right-hand side is not finite");
    if (b.norm() == 0.0) return Eigen::VectorXd::Zero(b.size());

    switch (cfg.method) {
        case SolverMethod::lu: {
            Eigen::SparseMatrix<double> a = A.matrix();  // SparseLU wants column-major
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
            lu.compute(a);
            if (lu.info() != Eigen::Success)
                throw SolverError("sparse LU factorization failed (singular system?)");
            Eigen::VectorXd x = lu.solve(b);
            const double residual = (A.matrix() * x - b).norm();
            if (!x.allFinite() || residual > std::max(cfg.rtol, 1e-10) * b.norm()) {
                std::ostringstream os;
                os << "sparse LU residual " << residual << " exceeds tolerance";
                throw SolverError(os.str());
            }
            return x;
        }
        case SolverMethod::cg: {
            Eigen::ConjugateGradient<SparseOperator::Matrix, Eigen::Lower | Eigen::Upper,
                                     Eigen::DiagonalPreconditioner<double>>
                cg;
            return solve_iterative(cg, A, b, cfg, "CG");
        }
        case SolverMethod::bicgstab: {
            Eigen::BiCGSTAB<SparseOperator::Matrix, Eigen::DiagonalPreconditioner<double>> bi;
            return solve_iterative(bi, A, b, cfg, "BiCGSTAB");
        }
    }
    throw SolverError("unreachable solver method");
}

}  // namespace rdafem
