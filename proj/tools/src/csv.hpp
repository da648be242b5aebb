#pragma once

#include <string>
#include <vector>

#include "splinefit/fitter.hpp"

namespace splinefit::cli {

/// Read a "t,y" signal file. Throws invalid_input with a distinct message
/// for a bad header, non-numeric fields, non-finite values, and a
/// non-increasing time column.
Signal read_signal_csv(const std::string& path);

/// Write a "t,y" signal file, full precision.
void write_signal_csv(const std::string& path, const TimeGrid& grid, const Eigen::VectorXd& y);

/// Write per-sample fit columns: t, y, model_value, residual.
void write_fit_csv(const std::string& path, const Signal& signal, const FitResult& fit);

/// Write the sweep table: omega, tau, sse, solver_method.
void write_grid_csv(const std::string& path, const std::vector<GridCell>& table);

}  // namespace splinefit::cli
