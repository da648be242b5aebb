#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "splinefit/design_matrix.hpp"

namespace splinefit {

struct Tolerances {
    /// Relative threshold for treating a prototype sample as zero.
    double eps_zero = 1e-12;
    /// Relative threshold for numeric rank decisions.
    double eps_rank = 1e-10;
};

enum class RankStatus { certified_full_rank, certified_deficient, unknown };

/// How a verdict was reached: the per-interval sample-count condition,
/// the per-interval block-elimination condition, or a direct numeric
/// rank computation.
enum class CertMethod { none, sample_count, block_elimination, numeric_rank };

const char* to_string(RankStatus status);
const char* to_string(CertMethod method);

/// Per-subinterval diagnostics behind a verdict.
struct IntervalDiag {
    int interval = 0;           // 1-based
    std::size_t samples = 0;    // N_k
    std::size_t zeros = 0;      // Z_k, prototype zero-samples
    std::size_t required = 0;   // usable samples the check needs
    std::ptrdiff_t margin = 0;  // slack over the requirement (may be negative)
};

struct SingularityVerdict {
    RankStatus status = RankStatus::unknown;
    CertMethod method = CertMethod::none;
    std::string reason;  // set for deficient / unknown outcomes
    std::vector<IntervalDiag> intervals;
    std::optional<Eigen::Index> rank;  // filled when the numeric oracle ran
    Tolerances tolerances;

    bool certified_full_rank() const { return status == RankStatus::certified_full_rank; }
    bool certified_deficient() const { return status == RankStatus::certified_deficient; }
};

/// Row-elimination data produced by the block-elimination check:
/// for each subinterval, the multipliers expressing the top shift-family
/// rows through the bottom Vandermonde rows, and the numeric rank of the
/// eliminated modulated block.
struct EliminationCertificate {
    struct IntervalBlock {
        int interval = 0;
        std::size_t bottom_begin = 0;  // global row index of the first bottom row
        std::size_t bottom_count = 0;
        Eigen::MatrixXd lambda;  // c_k x (N_k - c_k); column j holds row j's multipliers
        Eigen::Index residual_rank = 0;
    };
    std::vector<IntervalBlock> intervals;
};

/// Sufficient full-rank condition for the one-spline model: every
/// subinterval must keep enough samples where the prototype is nonzero
/// (m+1 in the first subinterval, m elsewhere). Certifies full rank or
/// returns unknown; failing a sufficient condition proves nothing.
SingularityVerdict check_sample_counts(const SplineSpec& spec,
                                       const IntervalAssignment& assignment,
                                       const PrototypeSamples& samples, double eps_zero);

/// Sufficient full-rank condition for the two-spline model, applied to the
/// interleaved matrix. Per subinterval, eliminates the shift-family columns
/// of the top rows using the bottom unmodulated Vandermonde rows and
/// demands the residual modulated block keep full column rank. A constant
/// prototype makes the two column families proportional and is certified
/// deficient outright.
std::pair<SingularityVerdict, EliminationCertificate> check_block_elimination(
    const DesignMatrix& dm, const SplineSpec& spec, const IntervalAssignment& assignment,
    const PrototypeSamples& samples, const Tolerances& tol);

/// Number of singular values above eps_rank * sigma_max * max(rows, cols);
/// 0 for an all-zero matrix.
Eigen::Index numeric_rank(const Eigen::MatrixXd& matrix, double eps_rank);

enum class RankResolution {
    trust_conditions,  // leave unknown verdicts unknown
    resolve_unknown    // settle unknown verdicts with the numeric rank oracle
};

/// Run the applicable sufficient condition for the model; optionally settle
/// an unknown outcome by computing the numeric rank of the assembled matrix.
SingularityVerdict analyze(ModelKind model, const SplineSpec& spec, const TimeGrid& grid,
                           const PrototypeSamples& samples, const Tolerances& tol,
                           RankResolution resolution = RankResolution::trust_conditions);

}  // namespace splinefit
