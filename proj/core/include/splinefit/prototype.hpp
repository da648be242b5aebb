#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "splinefit/spline.hpp"

namespace splinefit {

/// g(t) = sin(omega * t + tau); omega is the angular coefficient applied
/// directly to the raw time axis.
struct Sinusoid {
    double omega = 1.0;
    double tau = 0.0;
};

/// g(t) = value.
struct Constant {
    double value = 1.0;
};

/// g given as per-sample values aligned with a specific grid.
struct Tabulated {
    std::vector<double> values;
};

using PrototypeFn = std::variant<Sinusoid, Constant, Tabulated>;

/// Prototype values alpha_i = g(t_i) on a grid.
class PrototypeSamples {
public:
    explicit PrototypeSamples(Eigen::VectorXd alpha) : alpha_(std::move(alpha)) {}

    const Eigen::VectorXd& alpha() const { return alpha_; }
    std::size_t size() const { return static_cast<std::size_t>(alpha_.size()); }

private:
    Eigen::VectorXd alpha_;
};

/// Evaluate the prototype on the grid. A tabulated prototype must match
/// the grid length exactly.
PrototypeSamples sample(const PrototypeFn& proto, const TimeGrid& grid);

/// Z_k = number of samples in subinterval k with |alpha_i| <= eps_zero * max|alpha|.
/// An identically zero prototype yields Z_k = N_k.
std::vector<std::size_t> count_zero_samples(const PrototypeSamples& samples,
                                            const IntervalAssignment& assignment,
                                            double eps_zero);

/// A-priori bound on the number of zeros of sin(omega*t + tau) over any
/// window of the given duration: ceil(2 * omega * duration) + 1.
long sinusoid_zero_bound(double omega, double duration);

}  // namespace splinefit
