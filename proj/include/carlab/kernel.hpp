#pragma once

#include <Eigen/Core>

#include "carlab/point.hpp"

namespace carlab {

enum class KernelFamily {
    SzegoPolydisc,    ///< prod_i 1/(1 - conj(w^i) z^i)
    DirichletPolydisc,///< prod_i (1 - conj(w^i) z^i)^{-(1-a)}, logarithmic at a = 1
    BesovSobolevBall, ///< (1 - <z,w>)^{-(d-a)}
};

/// A reproducing-kernel choice: family, ambient dimension, and parameter a.
class KernelSpec {
public:
    static KernelSpec szego(int dim);
    static KernelSpec dirichlet(int dim, double a);      // a in [0,1]
    static KernelSpec besov_sobolev(int dim, double a);  // a in [0,d)

    KernelFamily family() const noexcept { return family_; }
    int dim() const noexcept { return dim_; }
    double a() const noexcept { return a_; }
    Domain domain() const noexcept {
        return family_ == KernelFamily::BesovSobolevBall ? Domain::Ball : Domain::Polydisc;
    }
    const char* family_name() const noexcept;

private:
    KernelSpec(KernelFamily f, int dim, double a) : family_(f), dim_(dim), a_(a) {}
    KernelFamily family_;
    int dim_;
    double a_;
};

/// k_w(z). Hermitian in (z,w); real and >= 1 on the diagonal.
Complex kernel_eval(const KernelSpec& spec, const Point& z, const Point& w);

/// kernel_eval(z,w) / sqrt(kernel_eval(z,z) kernel_eval(w,w)); modulus <= 1.
Complex normalized_inner(const KernelSpec& spec, const Point& z, const Point& w);

/// Pseudo-hyperbolic distance: max of coordinatewise Moebius quotients on the
/// polydisc; sqrt(1 - (1-|z|^2)(1-|w|^2)/|1-<z,w>|^2) on the ball.
double pseudo_hyperbolic(const Point& z, const Point& w);

/// sqrt(1 - |normalized Szego inner product|^2); polydisc points only.
/// Coincides with pseudo_hyperbolic when d = 1.
double rho_s(const Point& z, const Point& w);

/// Entrywise (Schur/Hadamard) product of equal-shape square matrices.
Eigen::MatrixXcd schur_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

} // namespace carlab
