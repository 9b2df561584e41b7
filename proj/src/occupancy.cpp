#include "carlab/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "carlab/rng.hpp"

namespace carlab {

namespace {
constexpr double kTwoPi = 2.0 * 3.141592653589793238462643383279502884;

double log_binomial(long n, long k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}
} // namespace

void OccupancyProblem::validate() const {
    if (n < 1 || N < 1) throw InvalidInput("OccupancyProblem: n and N must be >= 1");
    if (r < 0) throw InvalidInput("OccupancyProblem: r must be >= 0");
}

double OccupancyProblem::p_r() const noexcept {
    const double a = alpha();
    double f = 1.0;
    for (int i = 2; i <= r; ++i) f *= i;
    return std::pow(a, r) * std::exp(-a) / f;
}

double OccupancyProblem::alpha_r() const noexcept {
    const double a = alpha();
    const double p = p_r();
    return (a - r * p) / (1.0 - p);
}

double OccupancyProblem::sigma_r2() const noexcept {
    const double a = alpha();
    const double p = p_r();
    const double d = a - static_cast<double>(r);
    return a / (1.0 - p) * (1.0 - p - d * d * p / a);
}

double log_poisson_pmf(double mean, long k) {
    if (k < 0) return -std::numeric_limits<double>::infinity();
    if (mean == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return -mean + k * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
}

std::vector<double> truncated_poisson_pmf(double alpha, int r, double tail_tol) {
    if (!(alpha > 0.0)) throw InvalidInput("truncated_poisson_pmf: alpha must be positive");
    // find the support cap: smallest L with P(Poisson(alpha) > L) < tail_tol
    std::vector<double> poisson;
    double term = std::exp(-alpha);
    double cum = term;
    poisson.push_back(term);
    for (long l = 1; l < 4096; ++l) {
        term *= alpha / static_cast<double>(l);
        poisson.push_back(term);
        cum += term;
        if (l > static_cast<long>(alpha) && 1.0 - cum < tail_tol) break;
    }
    const double p_r_mass = r < static_cast<int>(poisson.size())
                                ? poisson[static_cast<size_t>(r)]
                                : std::exp(log_poisson_pmf(alpha, r));
    std::vector<double> q(poisson.size(), 0.0);
    const double renorm = 1.0 / (1.0 - p_r_mass);
    for (size_t l = 0; l < poisson.size(); ++l)
        q[l] = static_cast<long>(l) == r ? 0.0 : poisson[l] * renorm;
    return q;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b,
                             double trim_tol) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    if (trim_tol > 0.0) {
        double tail = 0.0;
        size_t keep = out.size();
        while (keep > 1 && tail + out[keep - 1] < trim_tol) {
            tail += out[keep - 1];
            --keep;
        }
        out.resize(keep);
    }
    return out;
}

std::vector<double> power_convolve(const std::vector<double>& base, long m, double trim_tol) {
    if (m < 0) throw InvalidInput("power_convolve: negative power");
    std::vector<double> result{1.0};
    if (m == 0) return result;
    std::vector<double> sq = base;
    bool have_result = false;
    long k = m;
    while (true) {
        if (k & 1) {
            result = have_result ? convolve(result, sq, trim_tol) : sq;
            have_result = true;
        }
        k >>= 1;
        if (k == 0) break;
        sq = convolve(sq, sq, trim_tol);
    }
    return result;
}

double zeta_r_pmf(const OccupancyProblem& p, long m, long l) {
    p.validate();
    if (l < 0) return 0.0;
    if (m == 0) return l == 0 ? 1.0 : 0.0;
    const std::vector<double> q = truncated_poisson_pmf(p.alpha(), p.r);
    const std::vector<double> pmf = power_convolve(q, m);
    return l < static_cast<long>(pmf.size()) ? pmf[static_cast<size_t>(l)] : 0.0;
}

double exact_prob(const OccupancyProblem& p, long k) {
    p.validate();
    if (k < 0 || k > p.N) throw InvalidInput("exact_prob: k out of [0, N]");
    const long rest = p.n - k * p.r;
    if (rest < 0) return 0.0; // impossible event
    const double pr = p.p_r();
    // log-space binomial and powers; the conditioned-sum pmf stays linear
    const double log_front = log_binomial(p.N, k) + k * std::log(pr) +
                             (p.N - k) * std::log1p(-pr);
    const double log_denom = log_poisson_pmf(static_cast<double>(p.n), p.n);
    const double zeta = zeta_r_pmf(p, p.N - k, rest);
    if (zeta == 0.0) return 0.0;
    return std::exp(log_front + std::log(zeta) - log_denom);
}

double brute_force_prob(const OccupancyProblem& p, long k) {
    p.validate();
    double total_d = std::pow(static_cast<double>(p.N), static_cast<double>(p.n));
    if (total_d > 1e7)
        throw ResourceLimit("brute_force_prob: N^n = " + std::to_string(total_d) +
                            " exceeds the enumeration cap of 1e7");
    const std::uint64_t total = static_cast<std::uint64_t>(total_d + 0.5);
    std::vector<int> assign(static_cast<size_t>(p.n), 0);
    std::vector<int> counts(static_cast<size_t>(p.N), 0);
    std::uint64_t hits = 0;
    while (true) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int b : assign) ++counts[static_cast<size_t>(b)];
        long boxes_r = 0;
        for (int c : counts)
            if (c == p.r) ++boxes_r;
        if (boxes_r == k) ++hits;
        // odometer
        size_t pos = 0;
        while (pos < assign.size()) {
            if (++assign[pos] < p.N) break;
            assign[pos] = 0;
            ++pos;
        }
        if (pos == assign.size()) break;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

double normal_approx(const OccupancyProblem& p, long m, long l) {
    p.validate();
    if (m < 1) throw InvalidInput("normal_approx: m must be >= 1");
    const double s2 = p.sigma_r2();
    if (!(s2 > 0.0)) throw InvalidInput("normal_approx: sigma_r^2 <= 0 for these parameters");
    const double md = static_cast<double>(m);
    const double dev = static_cast<double>(l) - md * p.alpha_r();
    return std::exp(-dev * dev / (2.0 * md * s2)) / std::sqrt(s2 * kTwoPi * md);
}

double ratio_check(const OccupancyProblem& p) {
    p.validate();
    const double denom = static_cast<double>(p.N) * p.p_r();
    if (denom == 0.0) throw InvalidInput("ratio_check: N p_r vanishes");
    return exact_prob(p, 1) / denom;
}

OccupancyHistogram simulate_occupancy(const OccupancyProblem& p, long trials, std::uint64_t seed) {
    p.validate();
    if (trials < 1) throw InvalidInput("simulate_occupancy: trials must be >= 1");
    std::vector<long> hist;
    std::vector<int> counts(static_cast<size_t>(p.N), 0);
    for (long t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, hash_str("occupancy-trial"), static_cast<std::uint64_t>(t)));
        std::fill(counts.begin(), counts.end(), 0);
        for (long i = 0; i < p.n; ++i)
            ++counts[static_cast<size_t>(rng.below(static_cast<std::uint64_t>(p.N)))];
        long mu = 0;
        for (int c : counts)
            if (c == p.r) ++mu;
        if (mu >= static_cast<long>(hist.size())) hist.resize(static_cast<size_t>(mu) + 1, 0);
        ++hist[static_cast<size_t>(mu)];
    }
    OccupancyHistogram out;
    out.trials = trials;
    out.pmf.resize(hist.size());
    out.se.resize(hist.size());
    for (size_t i = 0; i < hist.size(); ++i) {
        const double ph = static_cast<double>(hist[i]) / static_cast<double>(trials);
        out.pmf[i] = ph;
        out.se[i] = std::sqrt(ph * (1.0 - ph) / static_cast<double>(trials));
    }
    return out;
}

} // namespace carlab
