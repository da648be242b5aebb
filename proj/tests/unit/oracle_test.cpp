#include "support/oracle.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

using namespace splinefit;
using namespace splinefit::testing;

TEST(VandermondeDet, Examples) {
    EXPECT_DOUBLE_EQ(vandermonde_det({0.0, 1.0}), 1.0);
    EXPECT_DOUBLE_EQ(vandermonde_det({0.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(vandermonde_det({0.5, 0.5, 1.0}), 0.0);
}

TEST(VandermondeDet, MatchesCofactorExpansion) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t size = 2 + static_cast<std::size_t>(trial % 5);
        std::vector<double> nodes(size);
        for (auto& x : nodes) x = u(rng);

        Eigen::MatrixXd v(size, size);
        for (std::size_t i = 0; i < size; ++i) {
            double p = 1.0;
            for (std::size_t j = 0; j < size; ++j) {
                v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p;
                p *= nodes[i];
            }
        }
        const double product = vandermonde_det(nodes);
        const double direct = static_cast<double>(det_cofactor(v));
        EXPECT_NEAR(product, direct, 1e-8 * std::max(std::abs(product), std::abs(direct)))
            << "trial " << trial;
    }
}

TEST(DetCofactor, KnownSmallMatrices) {
    Eigen::MatrixXd a(2, 2);
    a << 3, 1, -2, 4;
    EXPECT_DOUBLE_EQ(static_cast<double>(det_cofactor(a)), 14.0);

    Eigen::MatrixXd p(3, 3);
    p << 0, 1, 0, 0, 0, 1, 1, 0, 0;  // cyclic permutation, determinant +1
    EXPECT_DOUBLE_EQ(static_cast<double>(det_cofactor(p)), 1.0);

    EXPECT_DOUBLE_EQ(static_cast<double>(det_cofactor(Eigen::MatrixXd::Identity(5, 5))), 1.0);
}

TEST(QrRank, AgreesWithSvdRouteAwayFromThreshold) {
    std::mt19937_64 rng(67);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index rows = 6 + trial % 6;
        const Eigen::Index cols = 4 + trial % 3;
        Eigen::MatrixXd a(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = gauss(rng);
        if (trial % 4 == 0) a.col(1) = 0.5 * a.col(0);
        if (trial % 4 == 1) a.col(cols - 1).setZero();
        EXPECT_EQ(qr_rank(a, 1e-10), numeric_rank(a, 1e-10)) << "trial " << trial;
        EXPECT_EQ(qr_rank(a.transpose(), 1e-10), qr_rank(a, 1e-10)) << "trial " << trial;
    }
}

TEST(ExhaustiveRankCompare, DenseSinePresetIsCertifiedAndConfirmed) {
    RandomInstance inst;
    inst.model = ModelKind::modulated;
    inst.degree = 4;
    inst.n_intervals = 5;
    inst.times.resize(1000);
    for (std::size_t i = 0; i < 1000; ++i) inst.times[i] = static_cast<double>(i) / 999.0;
    inst.times.back() = 1.0;
    inst.knots = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    inst.omega = 16.0;
    inst.tau = 0.4;

    const auto rec = exhaustive_rank_compare(inst, Tolerances{});
    EXPECT_TRUE(rec.verdict.certified_full_rank());
    EXPECT_EQ(rec.svd_rank, 21);
    EXPECT_EQ(rec.oracle_rank, 21);
    EXPECT_TRUE(rec.consistent);
}

TEST(ExhaustiveRankCompare, ConstantPrototypeTwoSplineInstance) {
    auto inst = make_instance(33, {.model = ModelKind::modulated_with_shift});
    inst.constant_value = 2.0;
    const auto rec = exhaustive_rank_compare(inst, Tolerances{});
    EXPECT_TRUE(rec.verdict.certified_deficient());
    EXPECT_LE(rec.svd_rank, (rec.full_rank - 1) / 2 + 1);  // at most one column family
    EXPECT_TRUE(rec.consistent);
}

TEST(ExhaustiveRankCompare, ZeroPrototypeIsUnknownWithRankZero) {
    auto inst = make_instance(34, {.model = ModelKind::modulated});
    inst.constant_value = 0.0;
    const auto rec = exhaustive_rank_compare(inst, Tolerances{});
    EXPECT_EQ(rec.verdict.status, RankStatus::unknown);
    EXPECT_EQ(rec.svd_rank, 0);
    EXPECT_TRUE(rec.consistent);
}
