#include <gtest/gtest.h>

#include "oracles.hpp"
#include "suprb/linalg.hpp"

using namespace suprb;

namespace {

struct System {
    DesignMatrix X;
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
};

System random_system(Rng& rng, std::size_t n, std::size_t p)
{
    System s{DesignMatrix(n, p), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> r(p);
        for (std::size_t j = 0; j < p; ++j) s.X(i, j) = r[j] = uniform(rng, -1.0, 1.0);
        s.rows.push_back(r);
        s.y.push_back(uniform(rng, -3.0, 3.0));
    }
    return s;
}

} // namespace

TEST(Ols, RecoversExactLinearRelation)
{
    const DesignMatrix X{{1.0}, {2.0}, {3.0}};
    const std::vector<double> y{2.0, 4.0, 6.0};
    const auto r = ols_fit(X, y);
    EXPECT_NEAR(r.intercept, 0.0, 1e-12);
    EXPECT_NEAR(r.coefficients[0], 2.0, 1e-12);
}

TEST(Ols, ConstantColumnPredictsExactly)
{
    const DesignMatrix X{{1.0}, {1.0}, {1.0}};
    const std::vector<double> y{5.0, 5.0, 5.0};
    const auto r = ols_fit(X, y, 1e-8);
    EXPECT_NEAR(r.intercept + r.coefficients[0], 5.0, 1e-6);
}

TEST(Ols, CollinearColumnsStayFinite)
{
    // x2 is constant and therefore collinear with the intercept
    DesignMatrix X(6, 2);
    std::vector<double> y;
    for (std::size_t i = 0; i < 6; ++i) {
        X(i, 0) = 0.1 * static_cast<double>(i);
        X(i, 1) = 0.5;
        y.push_back(2.0 + 3.0 * X(i, 0));
    }
    const auto r = ols_fit(X, y);
    for (std::size_t i = 0; i < 6; ++i) {
        const double pred = r.intercept + r.coefficients[0] * X(i, 0) + r.coefficients[1] * X(i, 1);
        EXPECT_NEAR(pred, y[i], 1e-6);
    }
    EXPECT_NEAR(r.coefficients[0], 3.0, 1e-6);
}

TEST(Ols, MatchesNormalEquationsOracle)
{
    Rng rng(21);
    const auto s = random_system(rng, 20, 4);
    const auto r = ols_fit(s.X, s.y);
    const auto o = oracle::normal_equations(s.rows, s.y);
    EXPECT_NEAR(r.intercept, o.intercept, 1e-8);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(r.coefficients[j], o.w[j], 1e-8);
}

TEST(Ols, ResidualOrthogonalityProperty)
{
    Rng rng(22);
    for (int t = 0; t < 200; ++t) {
        const std::size_t p = 1 + uniform_index(rng, 6);
        const std::size_t n = p + 2 + uniform_index(rng, 40);
        const auto s = random_system(rng, n, p);
        const auto r = ols_fit(s.X, s.y);
        std::vector<double> resid(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double pred = r.intercept;
            for (std::size_t j = 0; j < p; ++j) pred += r.coefficients[j] * s.X(i, j);
            resid[i] = s.y[i] - pred;
            sum += resid[i];
        }
        ASSERT_NEAR(sum, 0.0, 1e-9);
        for (std::size_t j = 0; j < p; ++j) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += resid[i] * s.X(i, j);
            ASSERT_NEAR(dot, 0.0, 1e-9);
        }
    }
}

TEST(Ols, UnderdeterminedUsesRidgeAndStaysFinite)
{
    Rng rng(23);
    const auto s = random_system(rng, 3, 6);
    const auto r = ols_fit(s.X, s.y);
    EXPECT_TRUE(std::isfinite(r.intercept));
    for (double c : r.coefficients) EXPECT_TRUE(std::isfinite(c));
    // with more unknowns than rows the fit interpolates
    for (std::size_t i = 0; i < 3; ++i) {
        double pred = r.intercept;
        for (std::size_t j = 0; j < 6; ++j) pred += r.coefficients[j] * s.X(i, j);
        EXPECT_NEAR(pred, s.y[i], 1e-6);
    }
    const auto cod = ols_fit(s.X, s.y, 0.0);
    for (double c : cod.coefficients) EXPECT_TRUE(std::isfinite(c));
}

TEST(Ols, InputErrors)
{
    const DesignMatrix X(0, 2);
    EXPECT_THROW(ols_fit(X, std::vector<double>{}), EmptyDataError);
    const DesignMatrix Y{{1.0}, {2.0}};
    EXPECT_THROW(ols_fit(Y, std::vector<double>{1.0}), DimensionError);
    EXPECT_THROW(ols_fit(Y, std::vector<double>{1.0, 2.0}, -1.0), UsageError);
}

TEST(Psd, DegenerateRangeGivesZeroMatrix)
{
    Rng rng(31);
    const auto p = random_psd_2x2(rng, 0.0, 0.0);
    EXPECT_EQ(p.m(0, 0), 0.0);
    EXPECT_EQ(p.m(0, 1), 0.0);
    EXPECT_EQ(p.m(1, 1), 0.0);
}

TEST(Psd, ZeroRotationIsDiagonal)
{
    const auto p = Psd2x2::from_rotation(0.0, 2.0, 5.0);
    EXPECT_NEAR(p.m(0, 0), 2.0, 1e-15);
    EXPECT_NEAR(p.m(1, 1), 5.0, 1e-15);
    EXPECT_NEAR(p.m(0, 1), 0.0, 1e-15);
    EXPECT_EQ(p.m(0, 1), p.m(1, 0));
}

TEST(Psd, EigenvaluesInRangeProperty)
{
    Rng rng(32);
    Rng probe(33);
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_psd_2x2(rng, 0.0, 30.0);
        ASSERT_EQ(p.m(0, 1), p.m(1, 0));
        const auto ev = oracle::sym2_eigenvalues(p.m(0, 0), p.m(0, 1), p.m(1, 1));
        ASSERT_GE(ev[0], -1e-9);
        ASSERT_LE(ev[1], 30.0 + 1e-9);
        for (int v = 0; v < 5; ++v) {
            const double a = uniform(probe, -2.0, 2.0), b = uniform(probe, -2.0, 2.0);
            ASSERT_GE(p.quad(a, b), -1e-12);
        }
    }
}
