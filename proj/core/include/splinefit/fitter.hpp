#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "splinefit/solvers.hpp"

namespace splinefit {

/// A sampled signal: values y_i over a strictly increasing time grid.
struct Signal {
    TimeGrid grid;
    Eigen::VectorXd values;

    Signal(TimeGrid g, Eigen::VectorXd v);
    std::size_t size() const { return grid.size(); }
};

/// Rectangular (omega, tau) search grid. Cells are visited omega-outer,
/// tau-inner; cell values are start + i * step.
struct GridConfig {
    double omega_start = 1.0;
    double omega_end = 16.0;
    double omega_step = 1.0;
    double tau_start = 0.0;
    double tau_end = 6.283185307179586;
    double tau_step = 0.39269908169872414;  // pi/8

    void validate() const;
    std::size_t omega_count() const;
    std::size_t tau_count() const;
    std::size_t cell_count() const { return omega_count() * tau_count(); }
    double omega_at(std::size_t i) const { return omega_start + static_cast<double>(i) * omega_step; }
    double tau_at(std::size_t j) const { return tau_start + static_cast<double>(j) * tau_step; }
};

struct FitOptions {
    Tolerances tolerances;
    /// Map times onto [0, 1] before assembling the basis (better conditioned);
    /// reported coefficients live in the mapped domain.
    bool normalize_time = true;
    /// Evaluate grid cells on multiple threads; results are merged by cell
    /// index, so the outcome is identical to the sequential sweep.
    bool parallel = false;
};

struct FitResult {
    ModelKind model = ModelKind::modulated;
    double omega = 0.0;
    double tau = 0.0;
    LsqSolution solution;
    SingularityVerdict verdict;
    double sse = 0.0;
    TimeMap time_map;
    SplineSpec spec;  // in the mapped time domain

    /// Coefficients of the modulated spline (all of them for the one-spline model).
    Eigen::VectorXd modulated_coeffs() const;
    /// Coefficients of the vertical-shift spline (empty for the one-spline model).
    Eigen::VectorXd shift_coeffs() const;
    /// Model value at a raw (unmapped) time.
    double evaluate(double t) const;
};

/// One row of the grid-search table.
struct GridCell {
    double omega = 0.0;
    double tau = 0.0;
    double sse = 0.0;
    SolveMethod method = SolveMethod::orthogonal;
    bool used_fallback = false;
};

/// Fit the model at fixed (omega, tau): sample g(t) = sin(omega t + tau),
/// assemble the system, run the singularity analysis, and solve through the
/// verdict-selected method.
FitResult fit_fixed(ModelKind model, const Signal& signal, const SplineSpec& spec, double omega,
                    double tau, const FitOptions& opts = {});

/// Sweep every (omega, tau) cell and return the best fit plus the full
/// table. Ties break toward the first cell in sweep order. The interval
/// assignment and the unmodulated basis are computed once and shared.
std::pair<FitResult, std::vector<GridCell>> grid_search(ModelKind model, const Signal& signal,
                                                        const SplineSpec& spec,
                                                        const GridConfig& cfg,
                                                        const FitOptions& opts = {});

/// Evaluate the wave model on a grid: S(x1, u) * sin(omega t + tau), plus
/// S(x2, u) for the two-spline model. Coefficients are interpreted in the
/// same (optionally normalized) domain the fitter reports.
Eigen::VectorXd synthesize(ModelKind model, const SplineSpec& spec, const TimeGrid& grid,
                           const SplineCoeffs& x1, const SplineCoeffs& x2, double omega,
                           double tau, bool normalize_time = true);

}  // namespace splinefit
