#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "suprb/dataset_io.hpp"
#include "suprb/problems.hpp"

using namespace suprb;

namespace {

/// Straight-line re-evaluation of one Gaussian term from its matrix entries.
double term_value(const AmGaussTerm& t, const std::vector<double>& y)
{
    const double u = y[t.j] - t.shift[0];
    const double v = y[t.k] - t.shift[1];
    const double p00 = t.p.m(0, 0), p01 = t.p.m(0, 1), p10 = t.p.m(1, 0), p11 = t.p.m(1, 1);
    return std::exp(-(u * (p00 * u + p01 * v) + v * (p10 * u + p11 * v)));
}

std::vector<double> random_point(Rng& rng)
{
    std::vector<double> y(kAmGaussDims);
    for (double& v : y) v = uniform(rng, -1.0, 1.0);
    return y;
}

AmGaussInstance single_term(std::size_t j, std::size_t k, double l1, double l2, std::array<double, 2> s)
{
    AmGaussInstance inst;
    AmGaussTerm t;
    t.j = j;
    t.k = k;
    t.p = Psd2x2::from_rotation(0.0, l1, l2);
    t.shift = s;
    inst.terms.push_back(t);
    return inst;
}

} // namespace

TEST(Frog, PayoffBranches)
{
    EXPECT_NEAR(frog_quality(0.3, 0.4), 0.7, 1e-15);
    EXPECT_EQ(frog_quality(0.5, 0.5), 1.0);
    EXPECT_NEAR(frog_quality(0.8, 0.6), 0.6, 1e-15);
}

TEST(Frog, SymmetricAndBoundedProperty)
{
    Rng rng(81);
    for (int t = 0; t < 10000; ++t) {
        const double x = uniform(rng, 0.0, 1.0), a = uniform(rng, 0.0, 1.0);
        ASSERT_EQ(frog_quality(x, a), frog_quality(a, x));
        ASSERT_GE(frog_quality(x, a), 0.0);
        ASSERT_LE(frog_quality(x, a), 1.0);
    }
}

TEST(Frog, OptimalAction)
{
    EXPECT_NEAR(frog_optimal(0.3), 0.7, 1e-15);
    EXPECT_EQ(frog_optimal(1.0), 0.0);
    Rng rng(82);
    for (int t = 0; t < 100; ++t) {
        const double x = uniform(rng, 0.0, 1.0);
        EXPECT_NEAR(frog_quality(x, frog_optimal(x)), 1.0, 1e-15);
    }
}

TEST(Frog, DatasetRangesAndDeterminism)
{
    Rng rng(83), again(83);
    const auto d = frog_dataset(100, rng);
    ASSERT_EQ(d.size(), 100u);
    for (const auto& e : d) {
        EXPECT_TRUE(e.x[0] >= -1.0 && e.x[0] <= 1.0);
        EXPECT_TRUE(e.a[0] >= -1.0 && e.a[0] <= 1.0);
        EXPECT_TRUE(e.q >= 0.0 && e.q <= 1.0);
    }
    std::ostringstream s1, s2;
    write_dataset_csv(s1, d);
    write_dataset_csv(s2, frog_dataset(100, again));
    EXPECT_EQ(s1.str(), s2.str());
}

TEST(Frog, DenseSamplingNearlyReachesPeak)
{
    Rng rng(84);
    const auto d = frog_dataset(100000, rng);
    double best = 0.0;
    for (const auto& e : d) best = std::max(best, e.q);
    EXPECT_GE(best, 0.99);
}

TEST(Frog, ProblemViewUsesNormalizedInputs)
{
    const Problem p = FrogProblem{};
    // native x = 0.2, a = 0.2 normalize to -0.6
    EXPECT_NEAR(true_quality(p, Situation{-0.6}, Parametrization{-0.6}), 0.4, 1e-15);
    const auto opt = optimum(p, Situation{-0.6});
    EXPECT_NEAR(opt.a[0], 0.6, 1e-15);
    EXPECT_NEAR(opt.q, 1.0, 1e-15);
}

TEST(AmGauss, InstanceInvariants)
{
    for (std::uint64_t seed : {0ULL, 1ULL, 17ULL}) {
        const auto inst = am_gauss_generate(seed);
        ASSERT_EQ(inst.terms.size(), 110u);
        std::set<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& t : inst.terms) {
            ASSERT_NE(t.j, t.k);
            ASSERT_LT(t.j, kAmGaussDims);
            ASSERT_LT(t.k, kAmGaussDims);
            pairs.insert({t.j, t.k});
            const double b = t.p.m(0, 1);
            const double mean = 0.5 * (t.p.m(0, 0) + t.p.m(1, 1));
            const double r = std::sqrt(0.25 * std::pow(t.p.m(0, 0) - t.p.m(1, 1), 2) + b * b);
            ASSERT_GE(mean - r, -1e-9);
            ASSERT_LE(mean + r, 30.0 + 1e-9);
            for (double s : t.shift) ASSERT_TRUE(s >= -1.0 && s <= 1.0);
        }
        ASSERT_EQ(pairs.size(), 110u);
    }
}

TEST(AmGauss, ConsecutiveSeedsDiffer)
{
    std::set<double> firsts;
    for (std::uint64_t seed = 0; seed < 30; ++seed) firsts.insert(am_gauss_generate(seed).terms[0].shift[0]);
    EXPECT_EQ(firsts.size(), 30u);
}

TEST(AmGauss, SameSeedSameInstance)
{
    std::ostringstream a, b;
    write_am_gauss_instance(a, am_gauss_generate(5));
    write_am_gauss_instance(b, am_gauss_generate(5));
    EXPECT_EQ(a.str(), b.str());
}

TEST(AmGauss, ZeroMatricesGiveOneHundredTen)
{
    auto inst = am_gauss_generate(3);
    for (auto& t : inst.terms) t.p = Psd2x2{};
    Rng rng(85);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(am_gauss_quality(inst, random_point(rng)), 110.0);
}

TEST(AmGauss, TermAtItsShiftContributesOne)
{
    const auto inst = am_gauss_generate(4);
    const auto& t = inst.terms[37];
    Rng rng(86);
    auto y = random_point(rng);
    y[t.j] = t.shift[0];
    y[t.k] = t.shift[1];
    EXPECT_EQ(t.value(y[t.j], y[t.k]), 1.0);
}

TEST(AmGauss, MatchesTermByTermOracle)
{
    Rng rng(87);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = am_gauss_generate(seed);
        for (int i = 0; i < 200; ++i) {
            const auto y = random_point(rng);
            double ref = 0.0;
            for (const auto& t : inst.terms) ref += term_value(t, y);
            const double q = am_gauss_quality(inst, y);
            ASSERT_NEAR(q, ref, 1e-12);
            ASSERT_GT(q, 0.0);
            ASSERT_LE(q, 110.0);
        }
    }
}

TEST(AmGauss, GradientMatchesCentralDifferences)
{
    Rng rng(88);
    const double h = 1e-5;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto inst = am_gauss_generate(seed);
        for (int i = 0; i < 50; ++i) {
            const auto y = random_point(rng);
            const auto g = am_gauss_gradient(inst, y);
            for (std::size_t d = 0; d < kAmGaussDims; ++d) {
                auto yp = y, ym = y;
                yp[d] += h;
                ym[d] -= h;
                const double fd = (am_gauss_quality(inst, yp) - am_gauss_quality(inst, ym)) / (2.0 * h);
                ASSERT_LE(std::abs(g[d] - fd), 1e-5 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST(AmGauss, DatasetShapeAndDeterminism)
{
    const auto inst = am_gauss_generate(2);
    Rng a(89), b(89);
    const auto d = am_gauss_dataset(inst, 3000, a);
    EXPECT_EQ(d.size(), 3000u);
    EXPECT_EQ(d.dx(), 5u);
    EXPECT_EQ(d.da(), 6u);
    for (const auto& e : d) ASSERT_TRUE(e.q > 0.0 && e.q <= 110.0);
    EXPECT_EQ(d, am_gauss_dataset(inst, 3000, b));
}

TEST(AmGauss, InstanceFileRoundTripsBitExactly)
{
    const auto inst = am_gauss_generate(11);
    std::stringstream ss;
    write_am_gauss_instance(ss, inst);
    const auto back = read_am_gauss_instance(ss);
    ASSERT_EQ(back.seed, 11u);
    ASSERT_EQ(back.terms.size(), inst.terms.size());
    for (std::size_t i = 0; i < inst.terms.size(); ++i) {
        EXPECT_EQ(back.terms[i].j, inst.terms[i].j);
        EXPECT_EQ(back.terms[i].k, inst.terms[i].k);
        EXPECT_EQ(back.terms[i].p.m, inst.terms[i].p.m);
        EXPECT_EQ(back.terms[i].shift, inst.terms[i].shift);
    }
}

TEST(AmGauss, InstanceParseErrorOffsets)
{
    const std::string head = "am-gauss-instance 1\nseed 3\nterms 2\n";
    const std::string good = "1 2 1 0 0 1 0.5 0.5\n";
    std::istringstream in(head + good + "1 2 1 0 zero 1 0.5 0.5\n");
    try {
        read_am_gauss_instance(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), head.size() + good.size());
    }
    std::istringstream bad_header("not an instance\n");
    EXPECT_THROW(read_am_gauss_instance(bad_header), ParseError);
    std::istringstream truncated(head + good);
    EXPECT_THROW(read_am_gauss_instance(truncated), ParseError);
}

TEST(Oracle, RecoversSingleTermPeak)
{
    // peak at (a1, a2) = (0.3, -0.4); y indices 5 and 6
    const auto inst = single_term(5, 6, 2.0, 3.0, {0.3, -0.4});
    Rng rng(90);
    const auto opt = oracle_argmax(inst, Situation(5, 0.0), 16, 1e-10, rng);
    EXPECT_NEAR(opt.a[0], 0.3, 1e-4);
    EXPECT_NEAR(opt.a[1], -0.4, 1e-4);
    EXPECT_NEAR(opt.q, 1.0, 1e-8);
}

TEST(Oracle, DominatesRandomProbes)
{
    const auto inst = am_gauss_generate(0);
    Rng rng(91);
    Situation x(5);
    for (std::size_t i = 0; i < 5; ++i) x[i] = uniform(rng, -1.0, 1.0);
    const auto opt = oracle_argmax(inst, x, 64, 1e-8, rng);
    for (double v : opt.a) ASSERT_TRUE(v >= -1.0 && v <= 1.0);
    EXPECT_NEAR(am_gauss_quality(inst, stack(x, opt.a)), opt.q, 1e-12);
    Parametrization a(6);
    for (int t = 0; t < 10000; ++t) {
        for (std::size_t k = 0; k < 6; ++k) a[k] = uniform(rng, -1.0, 1.0);
        ASSERT_GE(opt.q, am_gauss_quality(inst, stack(x, a)));
    }
}

TEST(Oracle, MoreRestartsNeverWorse)
{
    const auto inst = am_gauss_generate(1);
    Rng pick(92);
    for (int t = 0; t < 5; ++t) {
        Situation x(5);
        for (std::size_t i = 0; i < 5; ++i) x[i] = uniform(pick, -1.0, 1.0);
        // same stream, so the 64-restart run starts with the 1-restart run
        Rng r1(t), r64(t);
        EXPECT_GE(oracle_argmax(inst, x, 64, 1e-8, r64).q, oracle_argmax(inst, x, 1, 1e-8, r1).q);
    }
}

TEST(Oracle, OptimumIsIndependentOfCallOrder)
{
    const Problem p = AmGaussProblem{am_gauss_generate(2), 8, 1e-8};
    const Situation x{0.1, -0.2, 0.3, -0.4, 0.5};
    const Situation z{0.0, 0.0, 0.0, 0.0, 0.0};
    const auto first = optimum(p, x);
    (void)optimum(p, z);
    EXPECT_EQ(optimum(p, x).a, first.a);
}
