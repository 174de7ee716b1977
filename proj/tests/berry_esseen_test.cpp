#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "ridgelab/berry_esseen.hpp"
#include "ridgelab/marcinkiewicz_verify.hpp"

using namespace ridgelab;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST(Integrand, NormalIsZero)
{
    for (double x : {-3.0, -0.5, 0.0, 1.0, 7.0})
        EXPECT_NEAR(be_integrand(CharFn::normal(), x), 0.0, 1e-16);
}

TEST(Integrand, FairBernoulli)
{
    const auto cf = CharFn::standardized(LatticeDist::binomial(1, 0.5));
    EXPECT_EQ(be_integrand(cf, 0.0), 0.0);
    EXPECT_NEAR(be_integrand(cf, 1.0), oracle::kBernoulliBeIntegrandAt1, 1e-15);
    EXPECT_NEAR(be_integrand(cf, -1.0), oracle::kBernoulliBeIntegrandAt1, 1e-15);
}

TEST(Bound, NormalIsPureConstantTerm)
{
    const auto b = be_bound(CharFn::normal(), 10.0, kDefaultCbe);
    EXPECT_LE(b.integral, 1e-10);
    EXPECT_NEAR(b.rhs, 0.30463, 1e-12);
}

TEST(Bound, FairBernoulliDominatesK)
{
    const auto cf = CharFn::standardized(LatticeDist::binomial(1, 0.5));
    const auto b = be_bound(cf, 2.0, kDefaultCbe);
    EXPECT_GT(b.integral, 0.0);
    EXPECT_LE(oracle::kBernoulliK, b.rhs);
}

TEST(Bound, DoublingT)
{
    const auto cf = CharFn::standardized(LatticeDist::binomial(16, 0.5));
    const auto a = be_bound(cf, 2.0, kDefaultCbe);
    const auto b = be_bound(cf, 4.0, kDefaultCbe);
    EXPECT_NEAR(b.rhs - b.integral / pi, 0.5 * (a.rhs - a.integral / pi), 1e-15);
    EXPECT_GE(b.integral, a.integral - 1e-10);
}

TEST(Bound, SplitAdditivity)
{
    const auto cf = CharFn::standardized(LatticeDist::binomial(64, 0.5));
    const auto whole = be_bound(cf, 3.0, kDefaultCbe);
    const auto split = be_bound(cf, 3.0, kDefaultCbe, 1.7);
    EXPECT_NEAR(split.core + split.tail, split.integral, 1e-15);
    EXPECT_NEAR(whole.integral, split.integral, 1e-10);
    EXPECT_GT(split.tail, 0.0);
}

TEST(Bound, RejectsBadT)
{
    EXPECT_THROW((void)be_bound(CharFn::normal(), 0.0, kDefaultCbe), std::invalid_argument);
    EXPECT_THROW((void)be_bound(CharFn::normal(), INFINITY, kDefaultCbe), std::invalid_argument);
}

TEST(SmoothingInequality, HoldsOnBinomialsAndRandomLaws)
{
    gen::Source src(301);
    std::vector<LatticeDist> laws;
    for (int n : {1, 4, 16, 64, 256})
        laws.push_back(LatticeDist::binomial(n, 0.5));
    for (int i = 0; i < 10; ++i)
        laws.push_back(src.poisson_binomial(64));
    for (int i = 0; i < 10; ++i)
        laws.push_back(src.raw(10));
    for (const auto& d : laws) {
        const auto s = moments(d);
        const auto cf = CharFn::standardized(d);
        const double K = kolmogorov_to_normal(d, s).distance;
        const double Delta = strip_report(d).Delta;
        for (double T : {1.0, 2.0, 5.0, 10.0, Delta / 4.0})
            EXPECT_LE(K, be_bound(cf, T, kDefaultCbe).rhs) << "T=" << T;
    }
}

TEST(Chain, Binomial256)
{
    const auto r = theorem2_chain(LatticeDist::binomial(256, 0.5), 1.0);
    EXPECT_NEAR(r.strip.Delta, 8.0 * pi, 1e-8);
    EXPECT_NEAR(r.T, 2.0 * pi, 1e-8);
    EXPECT_NEAR(r.a, std::cbrt(8.0 * pi), 1e-12);
    EXPECT_TRUE(r.satisfied);
    EXPECT_NEAR(r.K, oracle::kBinomial256K, 1e-13);
    EXPECT_NEAR(r.c1_hat, oracle::kBinomial256K * 8.0 * pi, 1e-10);
    EXPECT_NEAR(r.integral_core + r.integral_tail, r.integral_total, 1e-10);
    EXPECT_GE(r.rhs_bound, 0.0);
}

TEST(Chain, FairBernoulli)
{
    const auto r = theorem2_chain(LatticeDist::binomial(1, 0.5), 1.0);
    EXPECT_NEAR(r.strip.Delta, pi / 2.0, 1e-15);
    EXPECT_TRUE(r.satisfied);
}

TEST(Chain, StripTooNarrow)
{
    EXPECT_THROW((void)theorem2_chain(LatticeDist::binomial(1, 0.5), 2.0), StripTooNarrow);
    EXPECT_THROW((void)theorem2_chain(LatticeDist::binomial(16, 0.5), 0.0), std::invalid_argument);
}

TEST(Chain, BinomialC1Trend)
{
    double prev = 0.0;
    for (int n : {16, 64, 256}) {
        const auto r = theorem2_chain(LatticeDist::binomial(n, 0.5), 1.0);
        EXPECT_LE(r.c1_hat, 2.0);
        EXPECT_TRUE(r.satisfied);
        if (n == 256) {
            EXPECT_LE(r.c1_hat, 1.1 * prev);
        }
        prev = r.c1_hat;
    }
}

TEST(TailDomination, IntegrandBelowGaussianEnvelope)
{
    for (int n : {16, 64, 256}) {
        const auto d = LatticeDist::binomial(n, 0.5);
        const auto cf = CharFn::standardized(d);
        const double Delta = strip_report(d).Delta;
        const auto t1 = theorem1_verify(cf, Delta, 100);
        const double c0 = std::max(t1.sup_ratio, 1.0);
        const double a = std::cbrt(Delta / c0);
        const double T = Delta / (4.0 * c0);
        // The sweep certifies |R(x)| <= c0 |x|^3 / Delta <= x^2 / 4 for |x| <= T.
        ASSERT_LE(c0 * T / Delta, 0.25);
        if (!(a < T))
            continue;
        for (int i = 0; i < 100; ++i) {
            const double x = a + (T - a) * i / 99.0;
            EXPECT_LE(be_integrand(cf, x), 4.0 * std::exp(-x * x / 4.0) / x) << n << " " << x;
        }
    }
}
