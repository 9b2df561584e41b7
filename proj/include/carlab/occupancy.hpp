#pragma once

#include <cstdint>
#include <vector>

#include "carlab/errors.hpp"

namespace carlab {

/// n points thrown independently and uniformly into N boxes; mu_r counts the
/// boxes that receive exactly r points. Derived quantities are recomputed on
/// every call, never cached.
struct OccupancyProblem {
    long n = 1;
    long N = 1;
    int r = 2;

    double alpha() const noexcept { return static_cast<double>(n) / static_cast<double>(N); }
    /// p_r = alpha^r e^{-alpha} / r!
    double p_r() const noexcept;
    /// alpha_r = (alpha - r p_r) / (1 - p_r)
    double alpha_r() const noexcept;
    /// sigma_r^2 = alpha/(1-p_r) (1 - p_r - (alpha-r)^2 p_r / alpha)
    double sigma_r2() const noexcept;

    void validate() const;
};

/// Exact P(mu_r = k) through the conditioned-Poisson identity
///   P(mu_r=k) = C(N,k) p_r^k (1-p_r)^{N-k} P(zeta^(r)_{N-k} = n-kr) / P(zeta_N = n),
/// with the truncated-Poisson convolution power computed by repeated squaring.
double exact_prob(const OccupancyProblem& p, long k);

/// Enumeration oracle over all N^n assignments; requires N^n <= 1e7.
double brute_force_prob(const OccupancyProblem& p, long k);

/// Local normal value (sigma_r sqrt(2 pi m))^{-1} exp(-(l - m alpha_r)^2 / (2 m sigma_r^2))
/// approximating P(zeta^(r)_m = l); alpha and r come from the problem.
double normal_approx(const OccupancyProblem& p, long m, long l);

/// exact_prob(p, 1) / (N p_r); tends to 1 when alpha -> 0 and N p_r -> 0.
double ratio_check(const OccupancyProblem& p);

struct OccupancyHistogram {
    std::vector<double> pmf;  ///< empirical P(mu_r = k), k = 0..size-1
    std::vector<double> se;   ///< binomial standard error per bin
    long trials = 0;
};

/// Seeded Monte Carlo cross-check of the law of mu_r.
OccupancyHistogram simulate_occupancy(const OccupancyProblem& p, long trials, std::uint64_t seed);

// --- building blocks, exposed for the test oracles ---

/// pmf of eta^{(r)}: Poisson(alpha) conditioned on != r, support capped where
/// the Poisson tail mass drops below tail_tol. Returns q_l for l = 0..cap.
std::vector<double> truncated_poisson_pmf(double alpha, int r, double tail_tol = 1e-16);

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b,
                             double trim_tol = 0.0);

/// m-fold convolution power by repeated squaring; trailing entries whose total
/// mass is below trim_tol are dropped after each convolution.
std::vector<double> power_convolve(const std::vector<double>& base, long m,
                                   double trim_tol = 1e-18);

/// P(zeta^{(r)}_m = l) for the problem's alpha and r.
double zeta_r_pmf(const OccupancyProblem& p, long m, long l);

/// log P(Poisson(mean) = k)
double log_poisson_pmf(double mean, long k);

} // namespace carlab
