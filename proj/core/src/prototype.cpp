#include "splinefit/prototype.hpp"

#include <cassert>
#include <cmath>

#include "splinefit/errors.hpp"

namespace splinefit {

PrototypeSamples sample(const PrototypeFn& proto, const TimeGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd alpha(n);
    if (const auto* s = std::get_if<Sinusoid>(&proto)) {
        for (Eigen::Index i = 0; i < n; ++i)
            alpha[i] = std::sin(s->omega * grid[static_cast<std::size_t>(i)] + s->tau);
    } else if (const auto* c = std::get_if<Constant>(&proto)) {
        alpha.setConstant(c->value);
    } else {
        const auto& tab = std::get<Tabulated>(proto);
        if (tab.values.size() != grid.size())
            throw invalid_input("tabulated prototype length does not match the grid");
        for (Eigen::Index i = 0; i < n; ++i) alpha[i] = tab.values[static_cast<std::size_t>(i)];
    }
    return PrototypeSamples(std::move(alpha));
}

std::vector<std::size_t> count_zero_samples(const PrototypeSamples& samples,
                                            const IntervalAssignment& assignment,
                                            double eps_zero) {
    assert(eps_zero >= 0.0);
    if (samples.size() != assignment.n_samples())
        throw invalid_input("prototype samples do not match the interval assignment");

    const auto& alpha = samples.alpha();
    const double threshold = eps_zero * alpha.cwiseAbs().maxCoeff();
    std::vector<std::size_t> zeros(static_cast<std::size_t>(assignment.n_intervals()), 0);
    for (int k = 1; k <= assignment.n_intervals(); ++k) {
        auto [begin, end] = assignment.row_range(k);
        for (std::size_t i = begin; i < end; ++i) {
            if (std::abs(alpha[static_cast<Eigen::Index>(i)]) <= threshold)
                ++zeros[static_cast<std::size_t>(k) - 1];
        }
    }
    return zeros;
}

long sinusoid_zero_bound(double omega, double duration) {
    assert(omega >= 0.0 && duration > 0.0);
    return static_cast<long>(std::ceil(2.0 * omega * duration)) + 1;
}

}  // namespace splinefit
