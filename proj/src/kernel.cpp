#include "carlab/kernel.hpp"

#include <cmath>
#include <string>

namespace carlab {

namespace {

void check_point(const KernelSpec& spec, const Point& p, const char* which) {
    if (p.domain() != spec.domain())
        throw InvalidInput(std::string("kernel_eval: point ") + which + " lives on the " +
                           domain_name(p.domain()) + " but the kernel is defined on the " +
                           domain_name(spec.domain()));
    if (p.dim() != spec.dim())
        throw InvalidInput(std::string("kernel_eval: point ") + which + " has dimension " +
                           std::to_string(p.dim()) + ", kernel expects " +
                           std::to_string(spec.dim()));
}

/// (1/x) log(1/(1-x)) with the series fallback near x = 0 (limit value 1).
Complex log_factor(Complex x) {
    if (std::abs(x) < 1e-4) {
        // sum_{l>=0} x^l/(l+1); |x|^5/6 < 2e-21 truncation
        return 1.0 + x * (0.5 + x * (1.0 / 3.0 + x * (0.25 + x * 0.2)));
    }
    return -std::log(1.0 - x) / x;
}

/// (1-x)^{-p} for p > 0; exact reciprocal powers for small integer p so that
/// Dirichlet(a=0) evaluates bit-identically to the Szego kernel.
Complex recip_power(Complex one_minus_x, double p) {
    if (p == 1.0) return 1.0 / one_minus_x;
    if (p == 2.0) return 1.0 / (one_minus_x * one_minus_x);
    if (p == 3.0) return 1.0 / (one_minus_x * one_minus_x * one_minus_x);
    return std::exp(-p * std::log(one_minus_x));
}

} // namespace

KernelSpec KernelSpec::szego(int dim) {
    if (dim < 1) throw InvalidInput("KernelSpec: dimension must be >= 1");
    return KernelSpec(KernelFamily::SzegoPolydisc, dim, 0.0);
}

KernelSpec KernelSpec::dirichlet(int dim, double a) {
    if (dim < 1) throw InvalidInput("KernelSpec: dimension must be >= 1");
    if (!(a >= 0.0 && a <= 1.0))
        throw InvalidInput("KernelSpec: Dirichlet parameter a must lie in [0,1], got " +
                           std::to_string(a));
    return KernelSpec(KernelFamily::DirichletPolydisc, dim, a);
}

KernelSpec KernelSpec::besov_sobolev(int dim, double a) {
    if (dim < 1) throw InvalidInput("KernelSpec: dimension must be >= 1");
    if (!(a >= 0.0 && a < static_cast<double>(dim)))
        throw InvalidInput("KernelSpec: ball parameter a must lie in [0,d), got " +
                           std::to_string(a));
    return KernelSpec(KernelFamily::BesovSobolevBall, dim, a);
}

const char* KernelSpec::family_name() const noexcept {
    switch (family_) {
        case KernelFamily::SzegoPolydisc: return "szego";
        case KernelFamily::DirichletPolydisc: return "dirichlet";
        case KernelFamily::BesovSobolevBall: return "ball";
    }
    return "?";
}

Complex kernel_eval(const KernelSpec& spec, const Point& z, const Point& w) {
    check_point(spec, z, "z");
    check_point(spec, w, "w");
    const int d = spec.dim();
    switch (spec.family()) {
        case KernelFamily::SzegoPolydisc: {
            Complex k = 1.0;
            for (int i = 0; i < d; ++i) k *= 1.0 / (1.0 - std::conj(w[i]) * z[i]);
            return k;
        }
        case KernelFamily::DirichletPolydisc: {
            const double a = spec.a();
            if (a == 1.0) {
                Complex k = 1.0;
                for (int i = 0; i < d; ++i) k *= log_factor(std::conj(w[i]) * z[i]);
                return k;
            }
            Complex k = 1.0;
            for (int i = 0; i < d; ++i)
                k *= recip_power(1.0 - std::conj(w[i]) * z[i], 1.0 - a);
            return k;
        }
        case KernelFamily::BesovSobolevBall: {
            Complex ip = 0.0;
            for (int i = 0; i < d; ++i) ip += z[i] * std::conj(w[i]);
            return recip_power(1.0 - ip, static_cast<double>(d) - spec.a());
        }
    }
    throw InvalidInput("kernel_eval: unknown kernel family");
}

Complex normalized_inner(const KernelSpec& spec, const Point& z, const Point& w) {
    const Complex kzw = kernel_eval(spec, z, w);
    const double kzz = kernel_eval(spec, z, z).real();
    const double kww = kernel_eval(spec, w, w).real();
    return kzw / std::sqrt(kzz * kww);
}

double pseudo_hyperbolic(const Point& z, const Point& w) {
    if (z.domain() != w.domain() || z.dim() != w.dim())
        throw InvalidInput("pseudo_hyperbolic: points live in different domains");
    const int d = z.dim();
    if (z.domain() == Domain::Polydisc) {
        double m = 0.0;
        for (int i = 0; i < d; ++i) {
            const double q = std::abs((z[i] - w[i]) / (1.0 - std::conj(w[i]) * z[i]));
            if (q > m) m = q;
        }
        return m;
    }
    Complex ip = 0.0;
    double nz = 0.0, nw = 0.0;
    for (int i = 0; i < d; ++i) {
        ip += z[i] * std::conj(w[i]);
        nz += std::norm(z[i]);
        nw += std::norm(w[i]);
    }
    const double t = 1.0 - (1.0 - nz) * (1.0 - nw) / std::norm(1.0 - ip);
    return std::sqrt(t > 0.0 ? t : 0.0);
}

double rho_s(const Point& z, const Point& w) {
    if (z.domain() != Domain::Polydisc || w.domain() != Domain::Polydisc)
        throw InvalidInput("rho_s: defined for polydisc points");
    if (z.dim() != w.dim()) throw InvalidInput("rho_s: dimension mismatch");
    const double m = std::norm(normalized_inner(KernelSpec::szego(z.dim()), z, w));
    const double t = 1.0 - m;
    return std::sqrt(t > 0.0 ? t : 0.0);
}

Eigen::MatrixXcd schur_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw InvalidInput("schur_product: shapes must be equal and square");
    return a.cwiseProduct(b);
}

} // namespace carlab
