#pragma once

#include <optional>

#include <Eigen/Core>

#include "splinefit/singularity.hpp"

namespace splinefit {

enum class SolveMethod { normal_equations, orthogonal, min_norm };

const char* to_string(SolveMethod method);

struct LsqSolution {
    Eigen::VectorXd coeffs;
    SolveMethod method = SolveMethod::orthogonal;
    double residual_sse = 0.0;
    std::optional<double> condition_estimate;
    /// True when the fast path failed and the minimum-norm solver took over.
    bool used_fallback = false;
};

/// Solve min ||Bx - y|| through the normal equations (Cholesky on B^T B,
/// plus iterative refinement). Throws solver_error when the factorization
/// breaks down; the caller should fall back to a rank-robust solver.
LsqSolution solve_normal_equations(const Eigen::MatrixXd& B, const Eigen::VectorXd& y);

/// Least-squares solution via column-pivoted orthogonal-triangular
/// factorization; tolerates rank deficiency (basic solution).
LsqSolution solve_orthogonal(const Eigen::MatrixXd& B, const Eigen::VectorXd& y);

/// Minimum-norm least-squares solution via singular value decomposition,
/// truncating singular values at eps_rank * sigma_max * max(rows, cols).
LsqSolution solve_min_norm(const Eigen::MatrixXd& B, const Eigen::VectorXd& y, double eps_rank);

/// Verdict-driven solver selection: certified full rank takes the fast
/// normal-equations path (falling back to minimum-norm if it breaks),
/// certified deficient goes straight to minimum-norm, unknown takes the
/// orthogonal middle road.
LsqSolution dispatch_solve(const Eigen::MatrixXd& B, const Eigen::VectorXd& y,
                           const SingularityVerdict& verdict, const Tolerances& tol);

}  // namespace splinefit
