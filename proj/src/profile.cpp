#include "carlab/profile.hpp"

#include <cmath>
#include <string>

namespace carlab {

namespace {
/// Exponents this close to 0 are treated as the boundary case. Needed so that
/// e.g. beta = 2/3 against the Bloch series 3*beta - 2 classifies as the
/// boundary despite the rounding of 2/3 in binary.
constexpr double kExponentTol = 1e-12;
} // namespace

CountingProfile CountingProfile::exponential(Domain domain, int dim, double c, double beta,
                                             int truncation_degree) {
    if (dim < 1) throw InvalidInput("CountingProfile: dimension must be >= 1");
    if (!(c > 0.0)) throw InvalidInput("CountingProfile: C must be positive");
    if (truncation_degree < 0) throw InvalidInput("CountingProfile: negative truncation degree");
    CountingProfile p;
    p.kind_ = Kind::Exponential;
    p.domain_ = domain;
    p.dim_ = dim;
    p.c_ = c;
    p.beta_ = beta;
    p.truncation_degree_ = truncation_degree;
    return p;
}

CountingProfile CountingProfile::table(Domain domain, int dim,
                                       std::map<DyadicIndex, long> counts) {
    if (dim < 1) throw InvalidInput("CountingProfile: dimension must be >= 1");
    CountingProfile p;
    p.kind_ = Kind::Table;
    p.domain_ = domain;
    p.dim_ = dim;
    int trunc = 0;
    const int index_dim = domain == Domain::Ball ? 1 : dim;
    for (const auto& [idx, n] : counts) {
        if (n < 0) throw InvalidInput("CountingProfile: negative table count");
        if (idx.dim() != index_dim)
            throw InvalidInput("CountingProfile: table index dimension mismatch");
        if (idx.degree > trunc) trunc = idx.degree;
    }
    p.truncation_degree_ = trunc;
    p.table_ = std::move(counts);
    return p;
}

long CountingProfile::count_at_degree(int degree) const {
    if (kind_ != Kind::Exponential)
        throw InvalidInput("CountingProfile: per-degree counts exist only for Exponential profiles");
    if (degree < 0 || degree > truncation_degree_) return 0;
    // exp2 is exact for integral arguments; the tiny slack keeps values that
    // are integral in exact arithmetic from being bumped by ceil.
    const double v = c_ * std::exp2(beta_ * degree);
    return static_cast<long>(std::ceil(v - 1e-9));
}

long CountingProfile::count_at(const DyadicIndex& m) const {
    if (kind_ == Kind::Table) {
        auto it = table_.find(m);
        return it == table_.end() ? 0 : it->second;
    }
    return count_at_degree(m.degree);
}

std::vector<DyadicIndex> CountingProfile::support() const {
    std::vector<DyadicIndex> out;
    if (kind_ == Kind::Table) {
        for (const auto& [idx, n] : table_)
            if (n > 0) out.push_back(idx);
        return out; // map order is already (degree, lex)
    }
    for (int s = 0; s <= truncation_degree_; ++s) {
        if (count_at_degree(s) <= 0) continue;
        if (domain_ == Domain::Ball) {
            out.push_back(DyadicIndex({s}));
        } else {
            for (auto& m : multi_indices_of_degree(dim_, s)) out.push_back(DyadicIndex(std::move(m)));
        }
    }
    return out;
}

long CountingProfile::total_points() const {
    long total = 0;
    if (kind_ == Kind::Table) {
        for (const auto& [idx, n] : table_) total += n;
        return total;
    }
    for (int s = 0; s <= truncation_degree_; ++s) {
        const double deg = domain_ == Domain::Ball ? 1.0 : multi_index_count(dim_, s);
        total += static_cast<long>(deg) * count_at_degree(s);
    }
    return total;
}

namespace {

/// log2 of the per-degree decay of the series terms for an Exponential
/// profile, ignoring polynomial factors.
double criterion_exponent(const CountingProfile& p, const SeriesCriterion& c) {
    const double beta = p.beta();
    switch (c.kind) {
        case SeriesCriterion::Kind::UnionM:
            return (1.0 + c.m_parts) * beta - c.m_parts;
        case SeriesCriterion::Kind::GammaCarleson:
            return beta - c.gamma;
        case SeriesCriterion::Kind::Cochran:
            return 2.0 * beta - 1.0;
        case SeriesCriterion::Kind::DirichletFinite:
            return beta - (1.0 - c.a);
        case SeriesCriterion::Kind::Carleson:
            return beta - (1.0 - c.eps);
        case SeriesCriterion::Kind::BallCarleson:
            return beta - static_cast<double>(p.dim()) * (1.0 - c.eps);
    }
    throw InvalidInput("series_criterion: unknown criterion");
}

/// Series term for one region of degree s carrying count n.
double criterion_term(const SeriesCriterion& c, int dim, long n, int s) {
    const double nn = static_cast<double>(n);
    switch (c.kind) {
        case SeriesCriterion::Kind::UnionM:
            return std::pow(nn, 1.0 + c.m_parts) * std::exp2(-static_cast<double>(c.m_parts) * s);
        case SeriesCriterion::Kind::GammaCarleson:
            return nn * std::exp2(-c.gamma * s);
        case SeriesCriterion::Kind::Cochran:
            return nn * nn * std::exp2(-static_cast<double>(s));
        case SeriesCriterion::Kind::DirichletFinite:
            return nn * std::exp2(-(1.0 - c.a) * s);
        case SeriesCriterion::Kind::Carleson:
            return nn * std::exp2(-(1.0 - c.eps) * s);
        case SeriesCriterion::Kind::BallCarleson:
            return nn * std::exp2(-static_cast<double>(dim) * (1.0 - c.eps) * s);
    }
    throw InvalidInput("series_criterion: unknown criterion");
}

} // namespace

SeriesReport series_criterion(const CountingProfile& profile, const SeriesCriterion& crit) {
    SeriesReport rep;
    const int trunc = profile.truncation_degree();
    std::vector<double> by_degree(static_cast<size_t>(trunc) + 1, 0.0);

    if (profile.kind() == CountingProfile::Kind::Table) {
        for (const auto& [idx, n] : profile.table_counts()) {
            if (n <= 0) continue;
            by_degree[static_cast<size_t>(idx.degree)] +=
                criterion_term(crit, profile.dim(), n, idx.degree);
        }
        rep.classification = SeriesClass::Indeterminate;
    } else {
        for (int s = 0; s <= trunc; ++s) {
            const long n = profile.count_at_degree(s);
            if (n <= 0) continue;
            const double deg = profile.domain() == Domain::Ball ? 1.0
                                                                : multi_index_count(profile.dim(), s);
            by_degree[static_cast<size_t>(s)] = deg * criterion_term(crit, profile.dim(), n, s);
        }
        const double q = criterion_exponent(profile, crit);
        rep.exponent = q;
        if (crit.kind == SeriesCriterion::Kind::Carleson ||
            crit.kind == SeriesCriterion::Kind::BallCarleson) {
            // growth-bound check: satisfied also on the boundary exponent
            rep.classification =
                q <= kExponentTol ? SeriesClass::Converges : SeriesClass::Diverges;
        } else {
            rep.classification =
                q < -kExponentTol ? SeriesClass::Converges : SeriesClass::Diverges;
        }
    }

    rep.partial_sums.resize(by_degree.size());
    double acc = 0.0;
    for (size_t s = 0; s < by_degree.size(); ++s) {
        acc += by_degree[s];
        rep.partial_sums[s] = acc;
    }
    return rep;
}

const char* series_class_name(SeriesClass c) noexcept {
    switch (c) {
        case SeriesClass::Converges: return "converges";
        case SeriesClass::Diverges: return "diverges";
        case SeriesClass::Indeterminate: return "indeterminate";
    }
    return "?";
}

} // namespace carlab
