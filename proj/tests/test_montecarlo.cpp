#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <set>

#include "perron/corpus.hpp"
#include "perron/montecarlo.hpp"
#include "perron/oracle.hpp"
#include "perron/series.hpp"
#include "support/test_oracles.hpp"

using namespace perron;
using perron::test_support::golden;
using perron::test_support::golden_lambda;
using perron::test_support::ones2;
using perron::test_support::stochastic2;

namespace {

bool same_bits(double x, double y) { return std::memcmp(&x, &y, sizeof(double)) == 0; }

} // namespace

TEST(Rng, SplitMix64ReferenceStream)
{
    SplitMix64 g(0);
    EXPECT_EQ(g(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(g(), 0x6E789E6AA1B965F4ULL);
    EXPECT_EQ(g(), 0x06C45D188009454FULL);
}

TEST(Rng, UniformInUnitInterval)
{
    SplitMix64 g(123);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double u = g.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, SampleStreamsArePureAndDistinct)
{
    EXPECT_EQ(sample_stream(7, 3).state(), sample_stream(7, 3).state());
    std::set<std::uint64_t> first;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        auto g = sample_stream(42, s);
        first.insert(g());
    }
    EXPECT_EQ(first.size(), 1000u);
    auto a = sample_stream(1, 0), b = sample_stream(2, 0);
    EXPECT_NE(a(), b());
}

TEST(SimulateExcursion, SingleStateReturnsImmediately)
{
    const auto a = PositiveMatrix::from_rows({{5}});
    const auto m = normalize(a);
    SplitMix64 g(1);
    const auto rec = simulate_excursion(m, a.row_sums(), 0, g, default_horizon, 2.0);
    EXPECT_EQ(rec.tau, 1u);
    EXPECT_FALSE(rec.truncated);
    EXPECT_EQ(rec.occupation, std::vector<std::uint64_t>{1});
    EXPECT_DOUBLE_EQ(rec.weight_at(a.row_sums(), 2.0), 2.5);
    EXPECT_EQ(rec.visit_weights, std::vector<double>{1.0});
}

TEST(SimulateExcursion, PathInvariants)
{
    std::mt19937_64 gen(4);
    const auto a = test_support::random_positive(5, gen, 0.1, 10.0);
    const auto m = normalize(a);
    const double lambda = perron_pair(a, 1e-10).lambda;
    for (std::uint64_t s = 0; s < 2000; ++s) {
        auto g = sample_stream(9, s);
        const auto rec = simulate_excursion(m, a.row_sums(), 2, g, default_horizon, lambda);
        ASSERT_FALSE(rec.truncated);
        EXPECT_GE(rec.tau, 1u);
        EXPECT_EQ(rec.occupation[2], 1u); // the anchor is visited only at time 0
        std::uint64_t total = 0;
        for (auto c : rec.occupation) total += c;
        EXPECT_EQ(total, rec.tau);
        EXPECT_EQ(rec.visit_weights[2], 1.0);
        for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(rec.visit_weights[j] > 0.0, rec.occupation[j] > 0);
    }
}

TEST(SimulateExcursion, FairCoinReturnTimeIsGeometric)
{
    const auto a = test_support::ones2();
    const auto m = normalize(a);
    // exhaustive enumeration of first-return paths under M
    for (std::size_t k = 1; k <= 20; ++k)
        EXPECT_NEAR(test_support::brute_force_coefficient(m.as_matrix(), 0, k), std::ldexp(1.0, -int(k)), 1e-15);

    const std::uint64_t n = 200000;
    std::vector<std::uint64_t> hist(10, 0);
    for (std::uint64_t s = 0; s < n; ++s) {
        auto g = sample_stream(42, s);
        const auto rec = simulate_excursion(m, a.row_sums(), 0, g);
        if (rec.tau < hist.size()) ++hist[rec.tau];
    }
    for (std::size_t k = 1; k < hist.size(); ++k) {
        const double p = test_support::brute_force_coefficient(m.as_matrix(), 0, k);
        const double sigma = std::sqrt(p * (1 - p) / double(n));
        EXPECT_NEAR(double(hist[k]) / double(n), p, 5 * sigma) << "k=" << k;
    }
}

TEST(SimulateExcursion, HorizonTruncates)
{
    const auto a = golden();
    const auto m = normalize(a);
    int truncated = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        auto g = sample_stream(3, s);
        const auto rec = simulate_excursion(m, a.row_sums(), 0, g, 1);
        EXPECT_EQ(rec.tau, 1u);
        truncated += rec.truncated;
    }
    EXPECT_GT(truncated, 0);
    EXPECT_LT(truncated, 200);
}

TEST(McPhi, GoldenAtSix)
{
    const auto e = mc_phi(golden(), 0, 6.0, 100000, 42);
    EXPECT_EQ(e.n_samples, 100000u);
    EXPECT_EQ(e.seed, 42u);
    EXPECT_GT(e.std_error, 0.0);
    EXPECT_NEAR(e.mean, 2.0 / 3.0, 4 * e.std_error);
    EXPECT_EQ(e.truncated_fraction, 0.0);
    EXPECT_FALSE(e.heavy_tail_warning);
}

TEST(McPhi, ConstantRowSumsAreExact)
{
    const auto e = mc_phi(ones2(), 0, 2.0, 1000, 1);
    EXPECT_EQ(e.mean, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_TRUE(e.degenerate_variance);

    const auto one = mc_phi(PositiveMatrix::from_rows({{5}}), 0, 2.0, 100, 1);
    EXPECT_EQ(one.mean, 2.5);
    EXPECT_EQ(one.std_error, 0.0);
}

TEST(McPhi, DeterministicForSeedAndThreadCount)
{
    std::mt19937_64 gen(2);
    const auto a = test_support::random_positive(6, gen, 0.1, 10.0);
    const double lambda = 1.2 * a.max_row_sum();
    const auto serial = mc_phi(a, 1, lambda, 20000, 42, default_horizon, 1);
    const auto again = mc_phi(a, 1, lambda, 20000, 42, default_horizon, 1);
    const auto parallel = mc_phi(a, 1, lambda, 20000, 42, default_horizon, 4);
    EXPECT_TRUE(same_bits(serial.mean, again.mean));
    EXPECT_TRUE(same_bits(serial.mean, parallel.mean));
    EXPECT_TRUE(same_bits(serial.std_error, parallel.std_error));
    EXPECT_FALSE(same_bits(serial.mean, mc_phi(a, 1, lambda, 20000, 43, default_horizon, 1).mean));
}

TEST(McPhi, UnbiasedAcrossSeeds)
{
    std::mt19937_64 gen(6);
    const auto a = test_support::random_positive(3, gen, 0.5, 2.0);
    const std::size_t i = 0;
    const double lambda = 1.5 * convergence_radius(a, i, 1e-12);
    ASSERT_TRUE(std::isfinite(excursion_weight_second_moment(a, i, lambda)));
    const double exact = phi_eval(a, i, lambda, 1e-14).value;

    const int seeds = 50;
    double mean = 0.0, var = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const auto e = mc_phi(a, i, lambda, 2000, 1000 + s);
        mean += e.mean / seeds;
        var += e.std_error * e.std_error / (double(seeds) * seeds);
    }
    EXPECT_NEAR(mean, exact, 4 * std::sqrt(var));
}

TEST(McPhi, CommonRandomNumbersGiveMonotoneEstimates)
{
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = test_support::random_positive(2 + trial, gen, 0.1, 10.0);
        const double rho = convergence_radius(a, 0, 1e-12);
        double previous = std::numeric_limits<double>::infinity();
        for (int g = 0; g < 10; ++g) {
            const double lambda = 1.1 * rho + g * 0.2 * a.max_row_sum();
            const double v = mc_phi(a, 0, lambda, 5000, 11).mean;
            EXPECT_LT(v, previous);
            previous = v;
        }
    }
}

TEST(McPhi, HeavyTailWarningNearRadius)
{
    EXPECT_TRUE(mc_phi(golden(), 0, 4.2, 1000, 1).heavy_tail_warning);
    EXPECT_FALSE(mc_phi(golden(), 0, 4.5, 1000, 1).heavy_tail_warning);
}

TEST(McPhi, RejectsBadArguments)
{
    EXPECT_THROW(mc_phi(golden(), 0, 6.0, 0, 1), Error);
    EXPECT_THROW(mc_phi(golden(), 0, 0.0, 10, 1), Error);
    EXPECT_THROW(mc_phi(golden(), 2, 6.0, 10, 1), Error);
    EXPECT_THROW(mc_phi(golden(), 0, 6.0, 10, 1, 0), Error);
}

TEST(McPhi, NoTruncationOnCorpus)
{
    for (std::size_t k = 0; k < corpus_size; ++k) {
        const auto a = corpus_matrix(k);
        const auto e = mc_phi(a, 0, a.max_row_sum(), 500, 5);
        EXPECT_EQ(e.truncated_fraction, 0.0) << "corpus matrix " << k;
    }
}

TEST(McSolveLambda, ConstantRowSumsAreExact)
{
    const auto r = mc_solve_lambda(ones2(), 0, 1000, 3, 1e-10);
    EXPECT_EQ(r.lambda, 2.0);
    EXPECT_EQ(r.ci_halfwidth, 0.0);

    const auto c = PositiveMatrix::from_rows({{1, 2, 3}, {3, 2, 1}, {2, 2, 2}});
    for (std::size_t i = 0; i < 3; ++i) {
        const auto ri = mc_solve_lambda(c, i, 1000, 3, 1e-10);
        EXPECT_EQ(ri.lambda, 6.0);
        EXPECT_EQ(ri.ci_halfwidth, 0.0);
    }

    const auto s = mc_solve_lambda(stochastic2(), 1, 1000, 3, 1e-10);
    EXPECT_EQ(s.lambda, 1.0);
    EXPECT_EQ(s.ci_halfwidth, 0.0);
}

TEST(McSolveLambda, GoldenWithinInterval)
{
    const auto r = mc_solve_lambda(golden(), 0, 100000, 42, 1e-10);
    EXPECT_GT(r.ci_halfwidth, 0.0);
    EXPECT_LT(r.derivative, 0.0);
    EXPECT_NEAR(r.lambda, golden_lambda, 4 * r.ci_halfwidth);
    EXPECT_GT(r.lambda, 3.0);
    EXPECT_LT(r.lambda, 7.0);
    // the root of the sample average
    EXPECT_NEAR(r.phi.mean, 1.0, 1e-8);
}

TEST(McSolveLambda, Deterministic)
{
    const auto x = mc_solve_lambda(golden(), 1, 20000, 7, 1e-10, default_horizon, 1);
    const auto y = mc_solve_lambda(golden(), 1, 20000, 7, 1e-10, default_horizon, 3);
    EXPECT_TRUE(same_bits(x.lambda, y.lambda));
    EXPECT_TRUE(same_bits(x.ci_halfwidth, y.ci_halfwidth));
}

TEST(McMu, AnchorComponentIsOne)
{
    std::mt19937_64 gen(10);
    const auto a = test_support::random_positive(4, gen, 0.1, 10.0);
    const double lambda = perron_pair(a, 1e-10).lambda;
    const auto mu = mc_mu(a, 2, lambda, 5000, 1);
    ASSERT_EQ(mu.size(), 4u);
    EXPECT_EQ(mu[2].mean, 1.0);
    EXPECT_EQ(mu[2].std_error, 0.0);
    for (const auto &e : mu) EXPECT_GT(e.mean, 0.0);
}

TEST(McMu, GoldenSecondComponent)
{
    const auto mu = mc_mu(golden(), 0, golden_lambda, 100000, 42);
    EXPECT_EQ(mu[0].mean, 1.0);
    EXPECT_NEAR(mu[1].mean, 2.0 / (golden_lambda - 4.0), 4 * mu[1].std_error);
    EXPECT_NEAR(mu[1].mean, 1.4574271078, 4 * mu[1].std_error);
}

TEST(McMu, MatchesSeriesOnRandomMatrix)
{
    std::mt19937_64 gen(12);
    const auto a = test_support::random_positive(4, gen, 0.5, 2.0);
    const double lambda = perron_pair(a, 1e-12).lambda;
    ASSERT_TRUE(std::isfinite(excursion_weight_second_moment(a, 1, lambda)));
    const auto exact = mu_anchor(a, 1, lambda, 1e-14);
    const auto mu = mc_mu(a, 1, lambda, 50000, 77);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(mu[j].mean, exact[j], 5 * mu[j].std_error + 1e-14);
}

TEST(McReturnTime, Examples)
{
    const auto fair = mc_return_time(normalize(ones2()), 0, 100000, 1);
    EXPECT_NEAR(fair.mean, 2.0, 4 * fair.std_error);

    const auto one = mc_return_time(normalize(PositiveMatrix::from_rows({{5}})), 0, 100, 1);
    EXPECT_EQ(one.mean, 1.0);
    EXPECT_EQ(one.std_error, 0.0);

    // stationary law (1/3, 2/3)
    const auto m = normalize(stochastic2());
    const auto t0 = mc_return_time(m, 0, 100000, 2);
    const auto t1 = mc_return_time(m, 1, 100000, 2);
    EXPECT_NEAR(t0.mean, 3.0, 4 * t0.std_error);
    EXPECT_NEAR(t1.mean, 1.5, 4 * t1.std_error);
}

TEST(McReturnTime, KacFormula)
{
    std::mt19937_64 gen(14);
    const auto a = test_support::random_positive(5, gen, 0.1, 10.0);
    const auto m = normalize(a);
    const auto pi = power_iteration(m.as_matrix(), 1e-13).left_vector;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto t = mc_return_time(m, i, 50000, 20 + i);
        EXPECT_EQ(t.truncated_fraction, 0.0);
        // delta method: sd(1/T) ~ sd(T)/T^2
        EXPECT_NEAR(1.0 / t.mean, pi[i], 4 * t.std_error / (t.mean * t.mean)) << "i=" << i;
    }
}

TEST(WeightSecondMoment, GoldenClosedForm)
{
    // D_S A = [[3,6],[21,28]] at lambda^2 = 36: 3/36 + 126/(36*8)
    EXPECT_NEAR(excursion_weight_second_moment(golden(), 0, 6.0), 3.0 / 36.0 + 126.0 / 288.0, 1e-12);
    // rho(D_S B) = 28 > 5.2^2: infinite variance although phi(5.2) is finite
    EXPECT_TRUE(std::isinf(excursion_weight_second_moment(golden(), 0, 5.2)));
    EXPECT_TRUE(std::isfinite(excursion_weight_second_moment(golden(), 0, golden_lambda)));
}

TEST(WeightSecondMoment, MatchesSampleMoment)
{
    const auto a = golden();
    const auto m = normalize(a);
    const std::uint64_t n = 100000;
    std::vector<double> sq(n);
    for (std::uint64_t s = 0; s < n; ++s) {
        auto g = sample_stream(5, s);
        const double w = simulate_excursion(m, a.row_sums(), 0, g).weight_at(a.row_sums(), 6.5);
        sq[s] = w * w;
    }
    const double mean = pairwise_sum(sq) / double(n);
    double var = 0.0;
    for (double x : sq) var += (x - mean) * (x - mean);
    const double se = std::sqrt(var / double(n - 1) / double(n));
    // lambda^4 > rho(D_S^3 B) = 4 * 7^3, so the sample variance of w^2 is finite too
    const double l2 = 6.5 * 6.5;
    EXPECT_NEAR(excursion_weight_second_moment(a, 0, 6.5), 3.0 / l2 + 126.0 / (l2 * (l2 - 28.0)), 1e-12);
    EXPECT_NEAR(mean, excursion_weight_second_moment(a, 0, 6.5), 5 * se);
}
