#include <doctest.h>

#include <cmath>

#include "carlab/occupancy.hpp"
#include "carlab/rng.hpp"

using namespace carlab;

TEST_CASE("derived quantities") {
    const OccupancyProblem p{2, 2, 2};
    CHECK(p.alpha() == doctest::Approx(1.0));
    CHECK(p.p_r() == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-15));
    const OccupancyProblem q{100, 100000, 2};
    CHECK(q.alpha() == doctest::Approx(1e-3));
    CHECK(q.p_r() == doctest::Approx(1e-6 * std::exp(-1e-3) / 2.0).epsilon(1e-12));
    CHECK(q.sigma_r2() > 0.0);
}

TEST_CASE("enumerated small cases") {
    CHECK(brute_force_prob({2, 2, 2}, 1) == doctest::Approx(0.5));
    CHECK(brute_force_prob({3, 3, 3}, 1) == doctest::Approx(1.0 / 9.0));
    CHECK(brute_force_prob({3, 2, 3}, 1) == doctest::Approx(2.0 / 8.0));
    CHECK(brute_force_prob({2, 2, 2}, 3) == doctest::Approx(0.0)); // k > N
    CHECK(exact_prob({2, 2, 2}, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(exact_prob({3, 3, 3}, 1) == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("exact_prob equals brute force across a small grid") {
    for (long N = 2; N <= 5; ++N) {
        for (long n = 1; n <= 6; ++n) {
            for (int r : {2, 3}) {
                const OccupancyProblem p{n, N, r};
                for (long k = 0; k <= N; ++k) {
                    if (n - k * r < 0) {
                        CHECK(exact_prob(p, k) == 0.0);
                        continue;
                    }
                    CHECK(exact_prob(p, k) ==
                          doctest::Approx(brute_force_prob(p, k)).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("brute force cap") {
    CHECK_THROWS_AS(brute_force_prob({30, 10, 2}, 1), ResourceLimit);
}

TEST_CASE("law normalization") {
    for (const OccupancyProblem& p :
         {OccupancyProblem{30, 50, 2}, OccupancyProblem{90, 2000, 2}, OccupancyProblem{60, 500, 3}}) {
        double sum = 0.0;
        for (long k = 0; k * p.r <= p.n && k <= p.N; ++k) sum += exact_prob(p, k);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("mean identity against the binomial closed form") {
    // E mu_r = N C(n,r) (1/N)^r (1-1/N)^{n-r}, an independent oracle
    for (const OccupancyProblem& p :
         {OccupancyProblem{30, 50, 2}, OccupancyProblem{60, 500, 2}, OccupancyProblem{40, 200, 3}}) {
        double mean = 0.0;
        for (long k = 0; k * p.r <= p.n && k <= p.N; ++k)
            mean += static_cast<double>(k) * exact_prob(p, k);
        const double logc = std::lgamma(p.n + 1.0) - std::lgamma(p.r + 1.0) -
                            std::lgamma(p.n - p.r + 1.0);
        const double closed = static_cast<double>(p.N) *
                              std::exp(logc - p.r * std::log(static_cast<double>(p.N)) +
                                       (p.n - p.r) * std::log1p(-1.0 / p.N));
        CHECK(mean == doctest::Approx(closed).epsilon(1e-9));
    }
}

TEST_CASE("power convolution is associative under different bracketings") {
    const std::vector<double> base = truncated_poisson_pmf(0.3, 2);
    // 13 = 8+4+1 via squaring vs direct left fold
    const std::vector<double> sq = power_convolve(base, 13);
    std::vector<double> fold{1.0};
    for (int i = 0; i < 13; ++i) fold = convolve(fold, base, 1e-18);
    REQUIRE(sq.size() <= fold.size() + 4);
    const size_t n = std::min(sq.size(), fold.size());
    for (size_t i = 0; i < n; ++i) CHECK(sq[i] == doctest::Approx(fold[i]).epsilon(1e-12));
}

TEST_CASE("truncated pmf removes r and renormalizes") {
    const std::vector<double> q = truncated_poisson_pmf(0.5, 2);
    CHECK(q[2] == 0.0);
    double sum = 0.0;
    for (double v : q) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normal approximation peaks where it should") {
    const OccupancyProblem p{100, 10000, 2};
    const long m = 10000;
    const long peak = std::lround(m * p.alpha_r());
    const double at_peak = normal_approx(p, m, peak);
    CHECK(at_peak ==
          doctest::Approx(1.0 / (std::sqrt(p.sigma_r2()) * std::sqrt(2.0 * M_PI * m)))
              .epsilon(1e-3));
    // symmetry to first order
    CHECK(normal_approx(p, m, peak + 3) == doctest::Approx(normal_approx(p, m, peak - 3)).epsilon(2e-2));
    // against the exact convolution power near the peak
    const double exact = zeta_r_pmf(p, m, peak);
    CHECK(exact == doctest::Approx(at_peak).epsilon(5e-2));

    // peak-scaled uniform error: max_l |exact - approx| sigma_r sqrt(2 pi m)
    // stays below 5% for alpha = 0.01, r = 2, m = 1e4
    const OccupancyProblem q{10000, 1000000, 2};
    const std::vector<double> pmf = power_convolve(truncated_poisson_pmf(q.alpha(), q.r), m);
    double worst = 0.0;
    for (long l = 0; l < static_cast<long>(pmf.size()); ++l)
        worst = std::max(worst, std::abs(pmf[static_cast<size_t>(l)] - normal_approx(q, m, l)));
    worst *= std::sqrt(q.sigma_r2()) * std::sqrt(2.0 * M_PI * m);
    CHECK(worst < 0.05);
}

TEST_CASE("ratio limit values") {
    // out-of-regime closed form: N=2, n=2, r=2 gives e/2
    CHECK(ratio_check({2, 2, 2}) == doctest::Approx(std::exp(1.0) / 2.0).epsilon(1e-12));

    // in the corollary's regime (N p_r -> 0): N = 1e5, n = 100 has
    // N p_2 ~ 0.05 and the ratio sits within 10% of 1
    CHECK(std::abs(ratio_check({100, 100000, 2}) - 1.0) < 0.10);
    // deeper into the regime the ratio keeps improving
    CHECK(std::abs(ratio_check({100, 1000000, 2}) - 1.0) <
          std::abs(ratio_check({100, 100000, 2}) - 1.0));

    // n = sqrt(N) leaves the regime: N p_2 -> 1/2, so the ratio converges to
    // e^{-1/2} ~ 0.6065 instead of 1. Values frozen from an independent
    // convolution oracle.
    const double r3 = ratio_check({32, 1000, 2});
    const double r4 = ratio_check({100, 10000, 2});
    const double r5 = ratio_check({316, 100000, 2});
    CHECK(r3 == doctest::Approx(0.628002).epsilon(1e-5));
    CHECK(r4 == doctest::Approx(0.615576).epsilon(1e-5));
    CHECK(r5 == doctest::Approx(0.609837).epsilon(1e-5));
    CHECK(r5 < r4);
    CHECK(r4 < r3);
    CHECK(r5 > std::exp(-0.5));
}

TEST_CASE("simulation agrees with the exact law") {
    const OccupancyProblem p{2, 2, 2};
    const OccupancyHistogram h = simulate_occupancy(p, 100000, 777);
    REQUIRE(h.pmf.size() >= 2);
    CHECK(std::abs(h.pmf[1] - 0.5) <= 3.0 * h.se[1]);

    const OccupancyHistogram h2 = simulate_occupancy(p, 100000, 777);
    CHECK(h2.pmf == h.pmf); // determinism

    const OccupancyHistogram point_mass = simulate_occupancy(p, 1, 3);
    double total = 0.0;
    for (double v : point_mass.pmf) total += v;
    CHECK(total == doctest::Approx(1.0));

    // a moderate problem, all bins within 3 SE + a tiny absolute slack
    const OccupancyProblem q{12, 30, 2};
    const OccupancyHistogram hq = simulate_occupancy(q, 200000, 4242);
    for (size_t k = 0; k < hq.pmf.size(); ++k) {
        const double exact = exact_prob(q, static_cast<long>(k));
        CHECK(std::abs(hq.pmf[k] - exact) <= 3.0 * hq.se[k] + 1e-4);
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(exact_prob({2, 2, 2}, 3), InvalidInput);
    CHECK_THROWS_AS(exact_prob({2, 2, 2}, -1), InvalidInput);
    CHECK_THROWS_AS(normal_approx({2, 2, 2}, 0, 0), InvalidInput);
    CHECK_THROWS_AS(simulate_occupancy({2, 2, 2}, 0, 1), InvalidInput);
}
