#include "splinefit/solvers.hpp"

#include <algorithm>

#include <Eigen/Dense>

#include "splinefit/errors.hpp"

namespace splinefit {

namespace {

double sse_of(const Eigen::MatrixXd& B, const Eigen::VectorXd& y, const Eigen::VectorXd& x) {
    return (B * x - y).squaredNorm();
}

}  // namespace

const char* to_string(SolveMethod method) {
    switch (method) {
        case SolveMethod::normal_equations: return "normal-equations";
        case SolveMethod::orthogonal: return "orthogonal";
        case SolveMethod::min_norm: return "min-norm";
    }
    return "?";
}

LsqSolution solve_normal_equations(const Eigen::MatrixXd& B, const Eigen::VectorXd& y) {
    if (B.rows() != y.size()) throw invalid_input("matrix and right-hand side sizes differ");

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(B.cols(), B.cols());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(B.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(gram.selfadjointView<Eigen::Lower>());
    if (llt.info() != Eigen::Success)
        throw solver_error("normal equations failed; matrix not certified full rank");

    Eigen::VectorXd x = llt.solve(B.transpose() * y);
    // Two refinement sweeps with the residual formed through B itself; this
    // recovers the accuracy the squared condition number of B^T B costs.
    for (int sweep = 0; sweep < 2; ++sweep) x += llt.solve(B.transpose() * (y - B * x));

    const Eigen::VectorXd d = llt.matrixLLT().diagonal();
    const double dmax = d.maxCoeff();
    const double dmin = d.minCoeff();

    LsqSolution sol;
    sol.coeffs = std::move(x);
    sol.method = SolveMethod::normal_equations;
    sol.residual_sse = sse_of(B, y, sol.coeffs);
    sol.condition_estimate = (dmax / dmin) * (dmax / dmin);
    return sol;
}

LsqSolution solve_orthogonal(const Eigen::MatrixXd& B, const Eigen::VectorXd& y) {
    if (B.rows() != y.size()) throw invalid_input("matrix and right-hand side sizes differ");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);

    // Basic solution: solve the leading triangle over the revealed rank and
    // zero the remaining pivoted coordinates. The rank cut uses the library's
    // default relative policy rather than a machine-epsilon knife edge.
    const auto& factors = qr.matrixQR();
    const Eigen::Index diag_size = std::min(B.rows(), B.cols());
    const double top = std::abs(factors(0, 0));
    const double threshold =
        Tolerances{}.eps_rank * top * static_cast<double>(std::max(B.rows(), B.cols()));
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < diag_size; ++i)
        if (std::abs(factors(i, i)) > threshold) ++rank;

    LsqSolution sol;
    sol.method = SolveMethod::orthogonal;
    if (rank == 0 || top == 0.0) {
        sol.coeffs = Eigen::VectorXd::Zero(B.cols());
        sol.residual_sse = y.squaredNorm();
        return sol;
    }
    Eigen::VectorXd c = qr.householderQ().adjoint() * y;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(B.cols());
    z.head(rank) =
        factors.topLeftCorner(rank, rank).triangularView<Eigen::Upper>().solve(c.head(rank));
    sol.coeffs = qr.colsPermutation() * z;
    sol.residual_sse = sse_of(B, y, sol.coeffs);
    return sol;
}

LsqSolution solve_min_norm(const Eigen::MatrixXd& B, const Eigen::VectorXd& y, double eps_rank) {
    if (B.rows() != y.size()) throw invalid_input("matrix and right-hand side sizes differ");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();

    const double threshold =
        sv.size() == 0 ? 0.0
                       : eps_rank * sv[0] * static_cast<double>(std::max(B.rows(), B.cols()));
    Eigen::VectorXd uty = svd.matrixU().transpose() * y;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        uty[i] = sv[i] > threshold ? uty[i] / sv[i] : 0.0;

    LsqSolution sol;
    sol.coeffs = svd.matrixV() * uty;
    sol.method = SolveMethod::min_norm;
    sol.residual_sse = sse_of(B, y, sol.coeffs);
    return sol;
}

LsqSolution dispatch_solve(const Eigen::MatrixXd& B, const Eigen::VectorXd& y,
                           const SingularityVerdict& verdict, const Tolerances& tol) {
    switch (verdict.status) {
        case RankStatus::certified_full_rank:
            try {
                return solve_normal_equations(B, y);
            } catch (const solver_error&) {
                LsqSolution sol = solve_min_norm(B, y, tol.eps_rank);
                sol.used_fallback = true;
                return sol;
            }
        case RankStatus::certified_deficient:
            return solve_min_norm(B, y, tol.eps_rank);
        case RankStatus::unknown:
            break;
    }
    return solve_orthogonal(B, y);
}

}  // namespace splinefit
