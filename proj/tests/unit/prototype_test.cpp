#include "splinefit/prototype.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "splinefit/errors.hpp"

using namespace splinefit;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Sample, ConstantGivesAllOnes) {
    TimeGrid grid({0.0, 1.0, 2.5, 7.0});
    const auto s = sample(Constant{1.0}, grid);
    for (Eigen::Index i = 0; i < s.alpha().size(); ++i) EXPECT_EQ(s.alpha()[i], 1.0);
}

TEST(Sample, SinusoidAtIntegerMultiplesOfPi) {
    TimeGrid grid({0.0, 1.0, 2.0});
    const auto s = sample(Sinusoid{kPi, 0.0}, grid);
    EXPECT_EQ(s.alpha()[0], 0.0);
    EXPECT_NEAR(s.alpha()[1], 0.0, 1e-15);
    EXPECT_NEAR(s.alpha()[2], 0.0, 1e-15);
}

TEST(Sample, SinusoidQuarterPeriod) {
    TimeGrid grid({0.0, 1.0});
    const auto s = sample(Sinusoid{kPi / 2.0, 0.0}, grid);
    EXPECT_DOUBLE_EQ(s.alpha()[1], 1.0);
}

TEST(Sample, TabulatedLengthMustMatch) {
    TimeGrid grid({0.0, 1.0, 2.0});
    EXPECT_THROW(sample(Tabulated{{1.0, 2.0}}, grid), invalid_input);
    EXPECT_NO_THROW(sample(Tabulated{{1.0, 2.0, 3.0}}, grid));
}

TEST(CountZeroSamples, ZeroPrototypeCountsEverySample) {
    TimeGrid grid({0.0, 0.5, 1.0, 1.5, 2.0});
    SplineSpec spec(1, {0.0, 1.0, 2.0});
    const auto assignment = assign_intervals(grid, spec);
    const auto zeros = count_zero_samples(sample(Constant{0.0}, grid), assignment, 1e-12);
    EXPECT_EQ(zeros, (std::vector<std::size_t>{3, 2}));
}

TEST(CountZeroSamples, NonzeroConstantCountsNothing) {
    TimeGrid grid({0.0, 0.5, 1.0, 1.5, 2.0});
    SplineSpec spec(1, {0.0, 1.0, 2.0});
    const auto assignment = assign_intervals(grid, spec);
    const auto zeros = count_zero_samples(sample(Constant{5.0}, grid), assignment, 1e-12);
    EXPECT_EQ(zeros, (std::vector<std::size_t>{0, 0}));
}

// Expected counts enumerated independently: sin(pi t) at t = 0, 0.5, 1, 1.5, 2
// vanishes (relative to max |alpha| = 1) at t = 0, 1 in the first subinterval
// and t = 2 in the second.
TEST(CountZeroSamples, SinusoidZerosLandWhereEnumerated) {
    TimeGrid grid({0.0, 0.5, 1.0, 1.5, 2.0});
    SplineSpec spec(1, {0.0, 1.0, 2.0});
    const auto assignment = assign_intervals(grid, spec);
    const auto samples = sample(Sinusoid{kPi, 0.0}, grid);

    std::vector<std::size_t> enumerated(2, 0);
    const double max_abs = samples.alpha().cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(samples.alpha()[static_cast<Eigen::Index>(i)]) <= 1e-9 * max_abs)
            ++enumerated[static_cast<std::size_t>(assignment.interval_of(i)) - 1];
    }
    EXPECT_EQ(enumerated, (std::vector<std::size_t>{2, 1}));
    EXPECT_EQ(count_zero_samples(samples, assignment, 1e-9), enumerated);
}

TEST(CountZeroSamples, MonotoneInThreshold) {
    TimeGrid grid({0.0, 0.3, 0.9, 1.4, 1.9, 2.6, 3.0});
    SplineSpec spec(1, {0.0, 1.5, 3.0});
    const auto assignment = assign_intervals(grid, spec);
    const auto samples = sample(Sinusoid{2.7, 0.4}, grid);
    std::vector<std::size_t> previous(2, 0);
    for (double eps : {0.0, 1e-12, 1e-6, 1e-2, 0.5, 1.0}) {
        const auto zeros = count_zero_samples(samples, assignment, eps);
        for (std::size_t k = 0; k < zeros.size(); ++k) EXPECT_GE(zeros[k], previous[k]);
        previous = zeros;
    }
}

TEST(SinusoidZeroBound, Examples) {
    EXPECT_EQ(sinusoid_zero_bound(16.0, 2.0), 65);
    EXPECT_EQ(sinusoid_zero_bound(0.0, 10.0), 1);
    EXPECT_EQ(sinusoid_zero_bound(1.0, 1.0), 3);
}

TEST(SinusoidZeroBound, BoundsGridZeroCounts) {
    for (int trial = 0; trial < 60; ++trial) {
        const double omega = 0.3 + 2.9 * trial;
        const double tau = 0.37 * trial;
        std::vector<double> times(201);
        for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i) / 40.0;
        TimeGrid grid(times);
        SplineSpec spec = SplineSpec::equidistant(1, 4, grid.front(), grid.back());
        const auto assignment = assign_intervals(grid, spec);
        const auto zeros = count_zero_samples(sample(Sinusoid{omega, tau}, grid), assignment, 0.0);
        std::size_t total = 0;
        for (auto z : zeros) total += z;
        EXPECT_LE(static_cast<long>(total), sinusoid_zero_bound(omega, grid.span()));
    }
}
