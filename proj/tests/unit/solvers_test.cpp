#include "splinefit/solvers.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "splinefit/errors.hpp"
#include "support/instance.hpp"

using namespace splinefit;
using splinefit::testing::make_instance;

namespace {

SingularityVerdict verdict_with(RankStatus status) {
    SingularityVerdict v;
    v.status = status;
    return v;
}

void expect_examples(LsqSolution (*solve)(const Eigen::MatrixXd&, const Eigen::VectorXd&)) {
    {
        Eigen::MatrixXd b(2, 1);
        b << 1, 1;
        Eigen::VectorXd y(2);
        y << 1, 3;
        EXPECT_NEAR(solve(b, y).coeffs[0], 2.0, 1e-12);
    }
    {
        const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(4, 4);
        Eigen::VectorXd y(4);
        y << -1, 0.5, 2, 7;
        EXPECT_TRUE(solve(b, y).coeffs.isApprox(y, 1e-12));
    }
    {
        Eigen::MatrixXd b(3, 2);
        b << 1, 0, 1, 1, 1, 2;
        Eigen::VectorXd y(3);
        y << 0, 1, 2;
        const auto sol = solve(b, y);
        EXPECT_NEAR(sol.coeffs[0], 0.0, 1e-10);
        EXPECT_NEAR(sol.coeffs[1], 1.0, 1e-10);
        EXPECT_NEAR(sol.residual_sse, 0.0, 1e-18);
    }
}

}  // namespace

TEST(SolveNormalEquations, Examples) {
    expect_examples(&solve_normal_equations);
}

TEST(SolveOrthogonal, Examples) {
    expect_examples(&solve_orthogonal);
}

TEST(SolveNormalEquations, ReportsConditionEstimate) {
    Eigen::MatrixXd b(3, 2);
    b << 1, 0, 1, 1, 1, 2;
    Eigen::VectorXd y(3);
    y << 0, 1, 2;
    const auto sol = solve_normal_equations(b, y);
    ASSERT_TRUE(sol.condition_estimate.has_value());
    EXPECT_GE(*sol.condition_estimate, 1.0);
}

TEST(SolveNormalEquations, BreaksDownOnSingularSystem) {
    Eigen::MatrixXd b(3, 2);
    b << 1, 1, 1, 1, 1, 1;  // duplicated column
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    EXPECT_THROW(solve_normal_equations(b, y), solver_error);
}

TEST(SolveNormalEquations, NormalResidualIsSmall) {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> gauss;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = make_instance(seed, {.model = ModelKind::modulated});
        const Eigen::MatrixXd b = inst.matrix().data();
        Eigen::VectorXd y(b.rows());
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = gauss(rng);
        const auto sol = solve_normal_equations(b, y);
        const Eigen::VectorXd bty = b.transpose() * y;
        const Eigen::VectorXd res = b.transpose() * (b * sol.coeffs) - bty;
        EXPECT_LE(res.norm(), 1e-8 * bty.norm());
    }
}

TEST(SolveMinNorm, PicksSmallestSolutionOnRankDeficientSystem) {
    Eigen::MatrixXd b(2, 2);
    b << 1, 1, 1, 1;
    Eigen::VectorXd y(2);
    y << 2, 2;
    const auto sol = solve_min_norm(b, y, 1e-10);
    EXPECT_NEAR(sol.coeffs[0], 1.0, 1e-12);
    EXPECT_NEAR(sol.coeffs[1], 1.0, 1e-12);
}

TEST(SolveMinNorm, AgreesWithOrthogonalOnFullRankSystems) {
    std::mt19937_64 rng(43);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd b(6, 3);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = gauss(rng);
    Eigen::VectorXd y(6);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = gauss(rng);
    const auto mn = solve_min_norm(b, y, 1e-10);
    const auto qr = solve_orthogonal(b, y);
    EXPECT_LE((mn.coeffs - qr.coeffs).norm(), 1e-8 * qr.coeffs.norm());
}

TEST(SolveMinNorm, ZeroMatrixGivesZeroSolution) {
    const Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 2);
    Eigen::VectorXd y(3);
    y << 1, 2, 2;
    const auto sol = solve_min_norm(b, y, 1e-10);
    EXPECT_TRUE(sol.coeffs.isZero(0.0));
    EXPECT_DOUBLE_EQ(sol.residual_sse, y.squaredNorm());
}

TEST(SolveMinNorm, NeverLongerThanOrthogonalSolution) {
    std::mt19937_64 rng(47);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd b(8, 4);
        for (Eigen::Index i = 0; i < b.rows(); ++i)
            for (Eigen::Index j = 0; j < 2; ++j) b(i, j) = gauss(rng);
        b.col(2) = 2.0 * b.col(0) - b.col(1);  // force deficiency
        b.col(3) = b.col(0) + b.col(1);
        Eigen::VectorXd y(8);
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = gauss(rng);
        const auto mn = solve_min_norm(b, y, 1e-10);
        const auto qr = solve_orthogonal(b, y);
        EXPECT_LE(mn.coeffs.norm(), qr.coeffs.norm() + 1e-10);
        EXPECT_NEAR(mn.residual_sse, qr.residual_sse, 1e-8 * std::max(1.0, qr.residual_sse));
    }
}

// First-order optimality probe: nudging the solution along random
// directions must not reduce the residual beyond rounding.
TEST(Solvers, PerturbationNeverImprovesResidual) {
    std::mt19937_64 rng(53);
    std::normal_distribution<double> gauss;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = make_instance(seed, {.model = ModelKind::modulated});
        const Eigen::MatrixXd b = inst.matrix().data();
        Eigen::VectorXd y(b.rows());
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = gauss(rng);

        const LsqSolution solutions[] = {solve_normal_equations(b, y), solve_orthogonal(b, y),
                                         solve_min_norm(b, y, 1e-10)};
        for (const auto& sol : solutions) {
            const double delta = 1e-4 * sol.coeffs.norm() + 1e-8;
            for (int dir = 0; dir < 20; ++dir) {
                Eigen::VectorXd step(sol.coeffs.size());
                for (Eigen::Index i = 0; i < step.size(); ++i) step[i] = gauss(rng);
                step *= delta / step.norm();
                for (const double sign : {1.0, -1.0}) {
                    const double perturbed = (b * (sol.coeffs + sign * step) - y).squaredNorm();
                    EXPECT_GE(perturbed, sol.residual_sse * (1.0 - 1e-12));
                }
            }
        }
    }
}

TEST(Solvers, AgreeOnCertifiedFullRankSystems) {
    std::mt19937_64 rng(59);
    std::normal_distribution<double> gauss;
    int tested = 0;
    for (std::uint64_t seed = 0; seed < 30 && tested < 15; ++seed) {
        const auto inst = make_instance(seed, {.model = ModelKind::modulated});
        const auto dm = inst.matrix();
        const auto verdict = check_sample_counts(inst.spec(), dm.assignment(),
                                                 inst.proto_samples(), 1e-12);
        if (!verdict.certified_full_rank()) continue;
        ++tested;
        Eigen::VectorXd y(dm.rows());
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = gauss(rng);

        const auto ne = solve_normal_equations(dm.data(), y);
        const auto qr = solve_orthogonal(dm.data(), y);
        const auto mn = solve_min_norm(dm.data(), y, 1e-10);
        EXPECT_LE((ne.coeffs - mn.coeffs).norm(), 1e-6 * mn.coeffs.norm());
        EXPECT_LE((qr.coeffs - mn.coeffs).norm(), 1e-6 * mn.coeffs.norm());
        const double scale = std::max({ne.residual_sse, mn.residual_sse, 1e-300});
        EXPECT_LE(std::abs(ne.residual_sse - mn.residual_sse), 1e-8 * scale);
    }
    EXPECT_GE(tested, 15);
}

TEST(DispatchSolve, FollowsTheVerdict) {
    Eigen::MatrixXd b(3, 2);
    b << 1, 0, 1, 1, 1, 2;
    Eigen::VectorXd y(3);
    y << 0.5, 1.0, 2.5;
    EXPECT_EQ(dispatch_solve(b, y, verdict_with(RankStatus::certified_full_rank), {}).method,
              SolveMethod::normal_equations);
    EXPECT_EQ(dispatch_solve(b, y, verdict_with(RankStatus::certified_deficient), {}).method,
              SolveMethod::min_norm);
    EXPECT_EQ(dispatch_solve(b, y, verdict_with(RankStatus::unknown), {}).method,
              SolveMethod::orthogonal);
}

TEST(DispatchSolve, FallsBackWhenTheFastPathBreaks) {
    Eigen::MatrixXd b(3, 2);
    b << 1, 1, 1, 1, 1, 1;  // a wrong certificate: the system is singular
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    const auto sol = dispatch_solve(b, y, verdict_with(RankStatus::certified_full_rank), {});
    EXPECT_EQ(sol.method, SolveMethod::min_norm);
    EXPECT_TRUE(sol.used_fallback);
    EXPECT_NEAR(sol.coeffs[0], sol.coeffs[1], 1e-12);
}
