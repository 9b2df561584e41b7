#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "carlab/point.hpp"
#include "carlab/rng.hpp"

namespace carlab::testing {

inline Point random_polydisc_point(Rng& rng, int d, double rmax = 0.95) {
    std::vector<Complex> c(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        c[static_cast<size_t>(i)] =
            std::polar(rng.uniform(0.0, rmax), rng.uniform(0.0, 2.0 * M_PI));
    return Point::polydisc(std::move(c));
}

inline Point random_ball_point(Rng& rng, int d, double rmax = 0.95) {
    std::vector<Complex> c(static_cast<size_t>(d));
    double n2 = 0.0;
    for (int i = 0; i < d; ++i) {
        c[static_cast<size_t>(i)] = Complex(rng.gaussian(), rng.gaussian());
        n2 += std::norm(c[static_cast<size_t>(i)]);
    }
    const double r = rng.uniform(0.0, rmax);
    for (auto& z : c) z *= r / std::sqrt(n2);
    return Point::ball(std::move(c));
}

/// One-sample Kolmogorov-Smirnov statistic against the uniform law on [0,1).
inline double ks_statistic_uniform(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(xs[i] - lo), std::abs(xs[i] - hi)});
    }
    return d;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    return d;
}

/// Random Hermitian PSD matrix B B^H scaled to unit spectral radius order.
inline Eigen::MatrixXcd random_psd(Rng& rng, int n) {
    Eigen::MatrixXcd b(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) b(i, j) = Complex(rng.gaussian(), rng.gaussian());
    Eigen::MatrixXcd m = b * b.adjoint();
    return m / static_cast<double>(n);
}

/// Random PSD matrix with unit diagonal: the Gram matrix of random unit vectors.
inline Eigen::MatrixXcd random_psd_unit_diagonal(Rng& rng, int n) {
    const int dim = n + 2;
    Eigen::MatrixXcd v(dim, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < dim; ++i) v(i, j) = Complex(rng.gaussian(), rng.gaussian());
        v.col(j) /= v.col(j).norm();
    }
    return v.adjoint() * v;
}

inline double min_eigenvalue(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double max_eigenvalue(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

} // namespace carlab::testing
