#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "splinefit/prototype.hpp"
#include "splinefit/spline.hpp"

namespace splinefit {

/// Which approximation model a matrix (or fit) belongs to.
///  - modulated:            f(t) = S(x, t) * g(t)
///  - modulated_with_shift: f(t) = S(x1, t) * g(t) + S(x2, t)
enum class ModelKind { modulated = 1, modulated_with_shift = 2 };

enum class ColumnFamily { modulated, shift };

/// One contiguous block of columns: a family restricted to one subinterval.
/// Width is m+1 for the first subinterval and m for the others.
struct ColumnBlock {
    ColumnFamily family;
    int interval;  // 1-based
    Eigen::Index offset;
    Eigen::Index width;
};

struct ColumnLayout {
    std::vector<ColumnBlock> blocks;
    Eigen::Index total_width = 0;
    bool interleaved = false;

    const ColumnBlock& block(ColumnFamily family, int interval) const;
};

/// Affine map u = (t - offset) / scale used to precondition the basis;
/// identity by default.
struct TimeMap {
    double offset = 0.0;
    double scale = 1.0;

    double apply(double t) const { return (t - offset) / scale; }
    bool is_identity() const { return offset == 0.0 && scale == 1.0; }
};

/// Map the full sample range onto [0, 1].
TimeMap normalization_map(const TimeGrid& grid);

/// Check that the knot chain spans exactly the sample range
/// (theta_0 = t_1, theta_n = t_N up to 1e-9 relative slack); throws
/// invalid_input otherwise.
void require_bound(const SplineSpec& spec, const TimeGrid& grid);

/// Apply a time map to a grid and a spec bound to it.
std::pair<TimeGrid, SplineSpec> apply_time_map(const TimeMap& map, const TimeGrid& grid,
                                               const SplineSpec& spec);

/// Dense least-squares system matrix with block metadata. Rows follow the
/// (increasing) sample order, so each subinterval's rows are contiguous.
class DesignMatrix {
public:
    DesignMatrix(Eigen::MatrixXd data, ColumnLayout layout, IntervalAssignment assignment,
                 ModelKind model);

    const Eigen::MatrixXd& data() const { return data_; }
    const ColumnLayout& layout() const { return layout_; }
    const IntervalAssignment& assignment() const { return assignment_; }
    ModelKind model() const { return model_; }
    bool interleaved() const { return layout_.interleaved; }
    Eigen::Index rows() const { return data_.rows(); }
    Eigen::Index cols() const { return data_.cols(); }

private:
    Eigen::MatrixXd data_;
    ColumnLayout layout_;
    IntervalAssignment assignment_;
    ModelKind model_;
};

/// The plain truncated-power basis matrix (no prototype modulation):
/// columns (1, t, ..., t^m, beta_1, ..., beta_1^m, ..., beta_{n-1}^m)
/// with beta_j = max(0, t - theta_j). This is the shift half of the
/// two-spline model's matrix.
Eigen::MatrixXd build_unmodulated_basis(const SplineSpec& spec, const TimeGrid& grid);

/// Assemble the model's system matrix. The spec must be bound to the grid
/// (theta_0 = t_1, theta_n = t_N) and every subinterval must own at least
/// one sample; otherwise invalid_input is thrown.
DesignMatrix build_design_matrix(ModelKind model, const SplineSpec& spec, const TimeGrid& grid,
                                 const PrototypeSamples& samples);

/// Assemble from a precomputed unmodulated basis and assignment. This is
/// the cached path for grid sweeps, where neither depends on (omega, tau).
DesignMatrix assemble_design_matrix(ModelKind model, const SplineSpec& spec,
                                    const Eigen::MatrixXd& basis,
                                    const IntervalAssignment& assignment,
                                    const PrototypeSamples& samples);

/// Permute columns into per-interval family-interleaved order, exposing
/// the block lower triangular structure. Rank is unchanged. For the
/// one-spline model the column order is already the interleaved order.
DesignMatrix interleave_blocks(const DesignMatrix& dm);

/// Plain-text debug dump: row-major, one row per line, %.17g entries.
void dump_matrix(std::ostream& os, const Eigen::MatrixXd& matrix);

}  // namespace splinefit
