#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "splinefit/errors.hpp"

namespace splinefit {

/// Strictly increasing sample times t_1 < t_2 < ... < t_N.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times);

    std::size_t size() const { return times_.size(); }
    double operator[](std::size_t i) const { return times_[i]; }
    double front() const { return times_.front(); }
    double back() const { return times_.back(); }
    double span() const { return times_.back() - times_.front(); }
    const std::vector<double>& times() const { return times_; }

private:
    std::vector<double> times_;
};

/// Fixed-knot polynomial spline of degree m over n subintervals.
/// The knot chain theta_0 <= theta_1 <= ... <= theta_n carries the
/// boundary knots; basis dimension is m*n + 1.
class SplineSpec {
public:
    SplineSpec(int degree, std::vector<double> knots);

    /// Equidistant knots theta_k = t0 + k*(t1 - t0)/n, with exact endpoints.
    static SplineSpec equidistant(int degree, int n_intervals, double t0, double t1);

    int degree() const { return degree_; }
    int n_intervals() const { return static_cast<int>(knots_.size()) - 1; }
    const std::vector<double>& knots() const { return knots_; }
    Eigen::Index basis_size() const {
        return static_cast<Eigen::Index>(degree_) * n_intervals() + 1;
    }

private:
    int degree_;
    std::vector<double> knots_;
};

/// Spline coefficients in canonical order:
/// (x_0, x_11..x_1m, x_21..x_2m, ..., x_n1..x_nm), length m*n + 1.
using SplineCoeffs = Eigen::VectorXd;

/// Sample-to-subinterval map. Subinterval 1 is [theta_0, theta_1];
/// subinterval k > 1 is (theta_{k-1}, theta_k]. Since sample times are
/// increasing, each subinterval owns a contiguous row range.
class IntervalAssignment {
public:
    IntervalAssignment(std::vector<std::size_t> counts, std::size_t n_samples);

    int n_intervals() const { return static_cast<int>(counts_.size()); }
    std::size_t n_samples() const { return n_samples_; }
    const std::vector<std::size_t>& counts() const { return counts_; }

    /// 1-based subinterval index of sample i (0-based).
    int interval_of(std::size_t i) const;

    /// Half-open row range [begin, end) of subinterval k (1-based).
    std::pair<std::size_t, std::size_t> row_range(int k) const;

private:
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> offsets_;  // prefix sums, size n+1
    std::size_t n_samples_;
};

/// (t - knot)^j for t > knot, else exactly 0. Requires j >= 1.
double truncated_power(double t, double knot, int j);

/// Evaluate S_m(x, theta, t) over the truncated power basis.
/// Throws invalid_input if coeffs length does not match the spec.
double eval_spline(const SplineSpec& spec, const SplineCoeffs& coeffs, double t);

/// Assign every sample to its subinterval; throws invalid_input when a
/// sample falls outside [theta_0, theta_n].
IntervalAssignment assign_intervals(const TimeGrid& grid, const SplineSpec& spec);

}  // namespace splinefit
