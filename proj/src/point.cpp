#include "carlab/point.hpp"

#include <cmath>
#include <string>

namespace carlab {

Point::Point(Domain domain, std::vector<Complex> coords)
    : domain_(domain), coords_(std::move(coords)) {
    if (coords_.empty()) throw InvalidInput("Point: empty coordinate list");
    if (domain_ == Domain::Polydisc) {
        for (const Complex& z : coords_) {
            if (!(1.0 - std::abs(z) >= kBoundaryGuard))
                throw InvalidInput("Point: polydisc coordinate within boundary guard, |z^i| = " +
                                   std::to_string(std::abs(z)));
        }
    } else {
        double s = 0.0;
        for (const Complex& z : coords_) s += std::norm(z);
        if (!(1.0 - std::sqrt(s) >= kBoundaryGuard))
            throw InvalidInput("Point: ball point within boundary guard, |z| = " +
                               std::to_string(std::sqrt(s)));
    }
}

double Point::norm() const noexcept {
    double s = 0.0;
    for (const Complex& z : coords_) s += std::norm(z);
    return std::sqrt(s);
}

const char* domain_name(Domain d) noexcept {
    return d == Domain::Polydisc ? "polydisc" : "ball";
}

} // namespace carlab
