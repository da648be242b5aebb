#include "splinefit/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "splinefit/errors.hpp"

namespace splinefit {

namespace {

// Certification thresholds are tied to the scale of the whole matrix, not
// the block under test, and carry an extra safety factor. A block that is
// negligible against the full matrix (e.g. the prototype is nearly constant
// on one subinterval) must not certify, even if it is well conditioned
// relative to its own tiny scale: the certificate claims something about
// the numeric rank of the full matrix.
constexpr double kEliminationSafety = 100.0;

std::vector<IntervalDiag> count_diagnostics(const SplineSpec& spec,
                                            const IntervalAssignment& assignment,
                                            const PrototypeSamples& samples, double eps_zero) {
    const auto zeros = count_zero_samples(samples, assignment, eps_zero);
    const int m = spec.degree();
    std::vector<IntervalDiag> diags;
    diags.reserve(static_cast<std::size_t>(assignment.n_intervals()));
    for (int k = 1; k <= assignment.n_intervals(); ++k) {
        const std::size_t nk = assignment.counts()[static_cast<std::size_t>(k) - 1];
        const std::size_t zk = zeros[static_cast<std::size_t>(k) - 1];
        const std::size_t required = static_cast<std::size_t>(k == 1 ? m + 1 : m);
        IntervalDiag d;
        d.interval = k;
        d.samples = nk;
        d.zeros = zk;
        d.required = required;
        d.margin = static_cast<std::ptrdiff_t>(nk) - static_cast<std::ptrdiff_t>(zk) -
                   static_cast<std::ptrdiff_t>(required);
        diags.push_back(d);
    }
    return diags;
}

}  // namespace

const char* to_string(RankStatus status) {
    switch (status) {
        case RankStatus::certified_full_rank: return "certified-full-rank";
        case RankStatus::certified_deficient: return "certified-deficient";
        case RankStatus::unknown: return "unknown";
    }
    return "?";
}

const char* to_string(CertMethod method) {
    switch (method) {
        case CertMethod::none: return "none";
        case CertMethod::sample_count: return "sample-count";
        case CertMethod::block_elimination: return "block-elimination";
        case CertMethod::numeric_rank: return "numeric-rank";
    }
    return "?";
}

SingularityVerdict check_sample_counts(const SplineSpec& spec,
                                       const IntervalAssignment& assignment,
                                       const PrototypeSamples& samples, double eps_zero) {
    SingularityVerdict verdict;
    verdict.tolerances.eps_zero = eps_zero;
    verdict.intervals = count_diagnostics(spec, assignment, samples, eps_zero);

    for (const auto& d : verdict.intervals) {
        if (d.margin < 0) {
            verdict.status = RankStatus::unknown;
            verdict.reason = "subinterval " + std::to_string(d.interval) + " keeps only " +
                             std::to_string(d.samples - d.zeros) + " nonzero-prototype samples, " +
                             std::to_string(d.required) + " required";
            return verdict;
        }
    }
    verdict.status = RankStatus::certified_full_rank;
    verdict.method = CertMethod::sample_count;
    return verdict;
}

std::pair<SingularityVerdict, EliminationCertificate> check_block_elimination(
    const DesignMatrix& dm, const SplineSpec& spec, const IntervalAssignment& assignment,
    const PrototypeSamples& samples, const Tolerances& tol) {
    if (dm.model() != ModelKind::modulated_with_shift || !dm.interleaved())
        throw invalid_input("block elimination needs the interleaved two-spline matrix");
    if (static_cast<std::size_t>(dm.rows()) != assignment.n_samples())
        throw invalid_input("matrix rows do not match the interval assignment");

    SingularityVerdict verdict;
    verdict.tolerances = tol;
    EliminationCertificate cert;

    const auto& alpha = samples.alpha();
    const double alpha_spread = alpha.maxCoeff() - alpha.minCoeff();
    const double alpha_scale = alpha.cwiseAbs().maxCoeff();
    const int m = spec.degree();
    const int n = assignment.n_intervals();

    if (alpha_spread <= tol.eps_zero * alpha_scale) {
        // Constant prototype: the modulated columns are a scalar multiple of
        // the shift columns, so at most half the columns are independent.
        verdict.status = RankStatus::certified_deficient;
        verdict.method = CertMethod::block_elimination;
        verdict.reason = "constant prototype duplicates the two column families";
        const auto zeros = count_zero_samples(samples, assignment, tol.eps_zero);
        for (int k = 1; k <= n; ++k) {
            const std::size_t nk = assignment.counts()[static_cast<std::size_t>(k) - 1];
            const std::size_t required = 2 * static_cast<std::size_t>(k == 1 ? m + 1 : m);
            verdict.intervals.push_back({k, nk, zeros[static_cast<std::size_t>(k) - 1], required,
                                         static_cast<std::ptrdiff_t>(nk) -
                                             static_cast<std::ptrdiff_t>(required)});
        }
        return {std::move(verdict), std::move(cert)};
    }
    const double scale = dm.data().norm();  // Frobenius norm of the full matrix
    const double threshold = kEliminationSafety * tol.eps_rank * scale *
                             static_cast<double>(std::max(dm.rows(), dm.cols()));

    const auto zeros = count_zero_samples(samples, assignment, tol.eps_zero);
    std::string first_failure;

    for (int k = 1; k <= n; ++k) {
        const auto [row_begin, row_end] = assignment.row_range(k);
        const auto nk = static_cast<Eigen::Index>(row_end - row_begin);
        const Eigen::Index ck = k == 1 ? m + 1 : m;

        IntervalDiag diag;
        diag.interval = k;
        diag.samples = static_cast<std::size_t>(nk);
        diag.zeros = zeros[static_cast<std::size_t>(k) - 1];
        diag.required = static_cast<std::size_t>(2 * ck);
        diag.margin = static_cast<std::ptrdiff_t>(nk) - static_cast<std::ptrdiff_t>(2 * ck);
        verdict.intervals.push_back(diag);

        if (nk < 2 * ck) {
            if (first_failure.empty())
                first_failure = "insufficient rows in subinterval " + std::to_string(k) +
                                " (have " + std::to_string(nk) + ", need " +
                                std::to_string(2 * ck) + ")";
            continue;
        }

        const ColumnBlock& mod = dm.layout().block(ColumnFamily::modulated, k);
        const ColumnBlock& shift = dm.layout().block(ColumnFamily::shift, k);
        const auto top = nk - ck;
        const auto r0 = static_cast<Eigen::Index>(row_begin);

        const Eigen::MatrixXd top_mod = dm.data().block(r0, mod.offset, top, ck);
        const Eigen::MatrixXd top_shift = dm.data().block(r0, shift.offset, top, ck);
        const Eigen::MatrixXd bottom_mod = dm.data().block(r0 + top, mod.offset, ck, ck);
        const Eigen::MatrixXd bottom_shift = dm.data().block(r0 + top, shift.offset, ck, ck);

        // The bottom shift block is a Vandermonde-type square; it must be
        // invertible on the scale of the full matrix for the elimination to
        // mean anything numerically.
        Eigen::JacobiSVD<Eigen::MatrixXd> bottom_svd(bottom_shift);
        if (bottom_svd.singularValues().minCoeff() <= threshold) {
            if (first_failure.empty())
                first_failure = "bottom block of subinterval " + std::to_string(k) +
                                " is numerically singular";
            continue;
        }

        // Multipliers: top_shift = lambda^T * bottom_shift, one column per top row.
        Eigen::MatrixXd lambda =
            bottom_shift.transpose().colPivHouseholderQr().solve(top_shift.transpose());
        Eigen::MatrixXd residual = top_mod - lambda.transpose() * bottom_mod;

        Eigen::JacobiSVD<Eigen::MatrixXd> res_svd(residual);
        const auto& sv = res_svd.singularValues();
        Eigen::Index residual_rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > threshold) ++residual_rank;

        cert.intervals.push_back({k, row_begin + static_cast<std::size_t>(top),
                                  static_cast<std::size_t>(ck), std::move(lambda),
                                  residual_rank});

        if (residual_rank < ck && first_failure.empty())
            first_failure = "eliminated block of subinterval " + std::to_string(k) +
                            " has numeric rank " + std::to_string(residual_rank) + " of " +
                            std::to_string(ck);
    }

    if (first_failure.empty()) {
        verdict.status = RankStatus::certified_full_rank;
        verdict.method = CertMethod::block_elimination;
    } else {
        verdict.status = RankStatus::unknown;
        verdict.reason = first_failure;
    }
    return {std::move(verdict), std::move(cert)};
}

Eigen::Index numeric_rank(const Eigen::MatrixXd& matrix, double eps_rank) {
    if (matrix.size() == 0) throw invalid_input("numeric rank of an empty matrix");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    const double threshold =
        eps_rank * sv[0] * static_cast<double>(std::max(matrix.rows(), matrix.cols()));
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > threshold) ++rank;
    return rank;
}

SingularityVerdict analyze(ModelKind model, const SplineSpec& spec, const TimeGrid& grid,
                           const PrototypeSamples& samples, const Tolerances& tol,
                           RankResolution resolution) {
    SingularityVerdict verdict;
    std::optional<DesignMatrix> built;

    if (model == ModelKind::modulated) {
        // The count condition needs no matrix at all; build lazily below.
        require_bound(spec, grid);
        const IntervalAssignment assignment = assign_intervals(grid, spec);
        verdict = check_sample_counts(spec, assignment, samples, tol.eps_zero);
        verdict.tolerances = tol;
    } else {
        built = interleave_blocks(build_design_matrix(model, spec, grid, samples));
        auto [v, cert] = check_block_elimination(*built, spec, built->assignment(), samples, tol);
        verdict = std::move(v);
    }

    if (verdict.status == RankStatus::unknown && resolution == RankResolution::resolve_unknown) {
        if (!built) built = build_design_matrix(model, spec, grid, samples);
        const Eigen::Index rank = numeric_rank(built->data(), tol.eps_rank);
        verdict.rank = rank;
        verdict.method = CertMethod::numeric_rank;
        if (rank == built->cols()) {
            verdict.status = RankStatus::certified_full_rank;
            verdict.reason.clear();
        } else {
            verdict.status = RankStatus::certified_deficient;
            verdict.reason = "numeric rank " + std::to_string(rank) + " of " +
                             std::to_string(built->cols()) + " columns";
        }
    }
    return verdict;
}

}  // namespace splinefit
