#include "splinefit/spline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace splinefit {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2)
        throw invalid_input("time grid needs at least two samples");
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        if (!(times_[i] < times_[i + 1]))
            throw invalid_input("time grid must be strictly increasing (violated at index " +
                                std::to_string(i + 1) + ")");
    }
    if (!std::isfinite(times_.front()) || !std::isfinite(times_.back()))
        throw invalid_input("time grid contains non-finite values");
}

SplineSpec::SplineSpec(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
    if (degree_ < 1) throw invalid_input("spline degree must be >= 1");
    if (knots_.size() < 2) throw invalid_input("knot chain needs at least two knots");
    for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
        if (knots_[k] > knots_[k + 1])
            throw invalid_input("knots must be non-decreasing");
    }
}

SplineSpec SplineSpec::equidistant(int degree, int n_intervals, double t0, double t1) {
    if (n_intervals < 1) throw invalid_input("need at least one subinterval");
    if (!(t0 < t1)) throw invalid_input("equidistant knots need t0 < t1");
    std::vector<double> knots(static_cast<std::size_t>(n_intervals) + 1);
    for (int k = 0; k <= n_intervals; ++k)
        knots[static_cast<std::size_t>(k)] = t0 + k * (t1 - t0) / n_intervals;
    knots.front() = t0;
    knots.back() = t1;  // exact endpoints regardless of rounding
    return SplineSpec(degree, std::move(knots));
}

IntervalAssignment::IntervalAssignment(std::vector<std::size_t> counts, std::size_t n_samples)
    : counts_(std::move(counts)), n_samples_(n_samples) {
    offsets_.resize(counts_.size() + 1, 0);
    for (std::size_t k = 0; k < counts_.size(); ++k) offsets_[k + 1] = offsets_[k] + counts_[k];
    if (offsets_.back() != n_samples_)
        throw invalid_input("interval counts do not sum to the sample count");
}

int IntervalAssignment::interval_of(std::size_t i) const {
    assert(i < n_samples_);
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), i);
    return static_cast<int>(it - offsets_.begin());
}

std::pair<std::size_t, std::size_t> IntervalAssignment::row_range(int k) const {
    assert(k >= 1 && k <= n_intervals());
    return {offsets_[static_cast<std::size_t>(k) - 1], offsets_[static_cast<std::size_t>(k)]};
}

double truncated_power(double t, double knot, int j) {
    assert(j >= 1);
    if (t <= knot) return 0.0;
    const double d = t - knot;
    double p = d;
    for (int i = 1; i < j; ++i) p *= d;
    return p;
}

double eval_spline(const SplineSpec& spec, const SplineCoeffs& coeffs, double t) {
    if (coeffs.size() != spec.basis_size())
        throw invalid_input("coefficient vector length does not match the spline spec");
    const int m = spec.degree();
    const int n = spec.n_intervals();
    const auto& theta = spec.knots();

    double value = coeffs[0];
    double p = 1.0;
    for (int j = 1; j <= m; ++j) {
        p *= t;
        value += coeffs[j] * p;
    }
    for (int l = 2; l <= n; ++l) {
        const double d = t - theta[static_cast<std::size_t>(l) - 1];
        if (d <= 0.0) break;  // later knots are no smaller; all remaining terms vanish
        const Eigen::Index base = 1 + static_cast<Eigen::Index>(l - 1) * m;
        double q = 1.0;
        for (int j = 1; j <= m; ++j) {
            q *= d;
            value += coeffs[base + j - 1] * q;
        }
    }
    return value;
}

IntervalAssignment assign_intervals(const TimeGrid& grid, const SplineSpec& spec) {
    const auto& theta = spec.knots();
    const int n = spec.n_intervals();
    if (grid.front() < theta.front() || grid.back() > theta.back())
        throw invalid_input("sample times fall outside [theta_0, theta_n]");

    std::vector<std::size_t> counts(static_cast<std::size_t>(n), 0);
    int k = 1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        while (k < n && t > theta[static_cast<std::size_t>(k)]) ++k;
        ++counts[static_cast<std::size_t>(k) - 1];
    }
    return IntervalAssignment(std::move(counts), grid.size());
}

}  // namespace splinefit
