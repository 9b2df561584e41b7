#pragma once

#include <complex>
#include <vector>

#include "carlab/errors.hpp"

namespace carlab {

using Complex = std::complex<double>;

enum class Domain { Polydisc, Ball };

/// Points closer to the boundary than this (in 1-|z^i|, resp. 1-|z|) are
/// rejected at construction; kernels blow up there.
inline constexpr double kBoundaryGuard = 1e-12;

/// A point of the polydisc D^d or the ball B_d, tagged with its domain.
class Point {
public:
    Point(Domain domain, std::vector<Complex> coords);

    Domain domain() const noexcept { return domain_; }
    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    const std::vector<Complex>& coords() const noexcept { return coords_; }
    const Complex& operator[](int i) const noexcept { return coords_[static_cast<size_t>(i)]; }

    /// Euclidean norm of the coordinate vector.
    double norm() const noexcept;

    static Point polydisc(std::vector<Complex> coords) {
        return Point(Domain::Polydisc, std::move(coords));
    }
    static Point ball(std::vector<Complex> coords) {
        return Point(Domain::Ball, std::move(coords));
    }
    /// One-dimensional disc point (polydisc with d = 1).
    static Point disc(Complex z) { return Point(Domain::Polydisc, {z}); }

private:
    Domain domain_;
    std::vector<Complex> coords_;
};

const char* domain_name(Domain d) noexcept;

} // namespace carlab
