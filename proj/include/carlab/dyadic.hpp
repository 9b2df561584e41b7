#pragma once

#include <vector>

#include "carlab/point.hpp"

namespace carlab {

/// Multi-index m of a dyadic region A_m, with the degree |m| cached.
struct DyadicIndex {
    std::vector<int> m;
    int degree = 0;

    DyadicIndex() = default;
    explicit DyadicIndex(std::vector<int> idx);

    int dim() const noexcept { return static_cast<int>(m.size()); }
    bool operator==(const DyadicIndex& o) const noexcept { return m == o.m; }
    bool operator!=(const DyadicIndex& o) const noexcept { return m != o.m; }
    bool operator<(const DyadicIndex& o) const noexcept {
        if (degree != o.degree) return degree < o.degree;
        return m < o.m;
    }
};

/// Band index of x = 1-|z|: the m with 2^{-(m+1)} <= x < 2^{-m}. Exact via
/// frexp, so dyadic edges land inclusively on the lower band. x = 1 (the
/// origin) maps to m = 0: the m = 0 band is taken closed on top.
int band_index(double one_minus_abs);

/// Region of a point: per-coordinate bands on the polydisc, a single scalar
/// shell on the ball.
DyadicIndex region_of_point(const Point& z);

/// All multi-indices of length d with |m| = degree, in lexicographic order.
std::vector<std::vector<int>> multi_indices_of_degree(int d, int degree);

/// Number of multi-indices of length d and degree s: binomial(s+d-1, d-1).
double multi_index_count(int d, int degree);

} // namespace carlab
