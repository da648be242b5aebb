#include "splinefit/design_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "splinefit/errors.hpp"

namespace splinefit {

namespace {

ColumnLayout family_layout(const SplineSpec& spec, bool with_shift) {
    ColumnLayout layout;
    const int m = spec.degree();
    const int n = spec.n_intervals();
    Eigen::Index offset = 0;
    const int n_families = with_shift ? 2 : 1;
    for (int f = 0; f < n_families; ++f) {
        const auto family = f == 0 ? ColumnFamily::modulated : ColumnFamily::shift;
        for (int k = 1; k <= n; ++k) {
            const Eigen::Index width = k == 1 ? m + 1 : m;
            layout.blocks.push_back({family, k, offset, width});
            offset += width;
        }
    }
    layout.total_width = offset;
    layout.interleaved = false;
    return layout;
}

}  // namespace

void require_bound(const SplineSpec& spec, const TimeGrid& grid) {
    const double slack = 1e-9 * grid.span();
    if (std::abs(spec.knots().front() - grid.front()) > slack ||
        std::abs(spec.knots().back() - grid.back()) > slack)
        throw invalid_input("spline knots must span exactly the sample range");
}

const ColumnBlock& ColumnLayout::block(ColumnFamily family, int interval) const {
    for (const auto& b : blocks)
        if (b.family == family && b.interval == interval) return b;
    throw invalid_input("no such column block");
}

TimeMap normalization_map(const TimeGrid& grid) {
    return TimeMap{grid.front(), grid.span()};
}

std::pair<TimeGrid, SplineSpec> apply_time_map(const TimeMap& map, const TimeGrid& grid,
                                               const SplineSpec& spec) {
    std::vector<double> times(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) times[i] = map.apply(grid[i]);
    std::vector<double> knots(spec.knots().size());
    for (std::size_t k = 0; k < knots.size(); ++k) knots[k] = map.apply(spec.knots()[k]);
    return {TimeGrid(std::move(times)), SplineSpec(spec.degree(), std::move(knots))};
}

DesignMatrix::DesignMatrix(Eigen::MatrixXd data, ColumnLayout layout,
                           IntervalAssignment assignment, ModelKind model)
    : data_(std::move(data)),
      layout_(std::move(layout)),
      assignment_(std::move(assignment)),
      model_(model) {
    if (data_.cols() != layout_.total_width)
        throw invalid_input("design matrix width does not match its layout");
}

Eigen::MatrixXd build_unmodulated_basis(const SplineSpec& spec, const TimeGrid& grid) {
    const int m = spec.degree();
    const int n = spec.n_intervals();
    const auto& theta = spec.knots();
    const auto rows = static_cast<Eigen::Index>(grid.size());

    Eigen::MatrixXd basis(rows, spec.basis_size());
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double t = grid[static_cast<std::size_t>(i)];
        basis(i, 0) = 1.0;
        double p = 1.0;
        for (int j = 1; j <= m; ++j) {
            p *= t;
            basis(i, j) = p;
        }
        for (int l = 2; l <= n; ++l) {
            const Eigen::Index base = 1 + static_cast<Eigen::Index>(l - 1) * m;
            const double d = t - theta[static_cast<std::size_t>(l) - 1];
            if (d <= 0.0) {
                basis.row(i).segment(base, m).setZero();
                continue;
            }
            double q = 1.0;
            for (int j = 1; j <= m; ++j) {
                q *= d;
                basis(i, base + j - 1) = q;
            }
        }
    }
    return basis;
}

DesignMatrix build_design_matrix(ModelKind model, const SplineSpec& spec, const TimeGrid& grid,
                                 const PrototypeSamples& samples) {
    if (samples.size() != grid.size())
        throw invalid_input("prototype samples do not match the grid");
    require_bound(spec, grid);

    IntervalAssignment assignment = assign_intervals(grid, spec);
    for (int k = 1; k <= assignment.n_intervals(); ++k) {
        if (assignment.counts()[static_cast<std::size_t>(k) - 1] == 0)
            throw invalid_input("subinterval " + std::to_string(k) + " contains no samples");
    }
    return assemble_design_matrix(model, spec, build_unmodulated_basis(spec, grid), assignment,
                                  samples);
}

DesignMatrix assemble_design_matrix(ModelKind model, const SplineSpec& spec,
                                    const Eigen::MatrixXd& basis,
                                    const IntervalAssignment& assignment,
                                    const PrototypeSamples& samples) {
    if (basis.rows() != static_cast<Eigen::Index>(assignment.n_samples()) ||
        basis.cols() != spec.basis_size() ||
        samples.size() != assignment.n_samples())
        throw invalid_input("basis, assignment and samples sizes disagree");

    const auto& alpha = samples.alpha();
    if (model == ModelKind::modulated) {
        Eigen::MatrixXd data = basis;
        data.array().colwise() *= alpha.array();
        return DesignMatrix(std::move(data), family_layout(spec, false), assignment, model);
    }
    Eigen::MatrixXd data(basis.rows(), 2 * basis.cols());
    data.leftCols(basis.cols()) = basis;
    data.leftCols(basis.cols()).array().colwise() *= alpha.array();
    data.rightCols(basis.cols()) = basis;
    return DesignMatrix(std::move(data), family_layout(spec, true), assignment, model);
}

DesignMatrix interleave_blocks(const DesignMatrix& dm) {
    if (dm.interleaved())
        throw invalid_input("matrix is already in interleaved order");

    ColumnLayout layout;
    layout.interleaved = true;
    layout.total_width = dm.cols();

    if (dm.model() == ModelKind::modulated) {
        // Single family: the canonical order is already block lower triangular.
        layout.blocks = dm.layout().blocks;
        return DesignMatrix(dm.data(), std::move(layout), dm.assignment(), dm.model());
    }

    const int n = dm.assignment().n_intervals();
    Eigen::MatrixXd data(dm.rows(), dm.cols());
    Eigen::Index offset = 0;
    for (int k = 1; k <= n; ++k) {
        for (const auto family : {ColumnFamily::modulated, ColumnFamily::shift}) {
            const ColumnBlock& src = dm.layout().block(family, k);
            data.middleCols(offset, src.width) = dm.data().middleCols(src.offset, src.width);
            layout.blocks.push_back({family, k, offset, src.width});
            offset += src.width;
        }
    }
    return DesignMatrix(std::move(data), std::move(layout), dm.assignment(), dm.model());
}

void dump_matrix(std::ostream& os, const Eigen::MatrixXd& matrix) {
    char buf[64];
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", matrix(i, j));
            if (j > 0) os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace splinefit
