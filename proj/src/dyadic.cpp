#include "carlab/dyadic.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace carlab {

DyadicIndex::DyadicIndex(std::vector<int> idx) : m(std::move(idx)) {
    for (int mi : m) {
        if (mi < 0) throw InvalidInput("DyadicIndex: negative component");
    }
    degree = std::accumulate(m.begin(), m.end(), 0);
}

int band_index(double one_minus_abs) {
    if (!(one_minus_abs >= kBoundaryGuard))
        throw InvalidInput("band_index: point violates the boundary guard, 1-|z| = " +
                           std::to_string(one_minus_abs));
    if (one_minus_abs > 1.0) throw InvalidInput("band_index: 1-|z| > 1");
    int e = 0;
    std::frexp(one_minus_abs, &e); // x = mant * 2^e, mant in [1/2, 1)
    const int m = -e;
    return m < 0 ? 0 : m; // only x = 1 yields e = 1
}

DyadicIndex region_of_point(const Point& z) {
    if (z.domain() == Domain::Polydisc) {
        std::vector<int> m(static_cast<size_t>(z.dim()));
        for (int i = 0; i < z.dim(); ++i) m[static_cast<size_t>(i)] = band_index(1.0 - std::abs(z[i]));
        return DyadicIndex(std::move(m));
    }
    return DyadicIndex({band_index(1.0 - z.norm())});
}

std::vector<std::vector<int>> multi_indices_of_degree(int d, int degree) {
    if (d < 1 || degree < 0) throw InvalidInput("multi_indices_of_degree: bad arguments");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<size_t>(d), 0);
    // recursive enumeration, lexicographic
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == d - 1) {
            cur[static_cast<size_t>(pos)] = remaining;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[static_cast<size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, degree);
    return out;
}

double multi_index_count(int d, int degree) {
    double c = 1.0;
    for (int i = 1; i <= d - 1; ++i) c *= static_cast<double>(degree + i) / i;
    return c;
}

} // namespace carlab
