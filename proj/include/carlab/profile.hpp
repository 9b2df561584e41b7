#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "carlab/dyadic.hpp"

namespace carlab {

/// Where inside its band a prescribed radius sits.
enum class Placement { Midpoint, UniformInBand };

/// Prescribed per-region point counts N_m. Exponential profiles realize
/// N_m = ceil(C 2^{beta |m|}) up to the truncation degree; Table profiles
/// carry explicit counts. Ball profiles use scalar shell indices, polydisc
/// profiles full multi-indices.
class CountingProfile {
public:
    enum class Kind { Exponential, Table };

    static CountingProfile exponential(Domain domain, int dim, double c, double beta,
                                       int truncation_degree);
    static CountingProfile table(Domain domain, int dim,
                                 std::map<DyadicIndex, long> counts);

    Kind kind() const noexcept { return kind_; }
    Domain domain() const noexcept { return domain_; }
    int dim() const noexcept { return dim_; }
    double c() const noexcept { return c_; }
    double beta() const noexcept { return beta_; }
    int truncation_degree() const noexcept { return truncation_degree_; }
    const std::map<DyadicIndex, long>& table_counts() const noexcept { return table_; }

    /// N_m for one region index (0 beyond the truncation degree).
    long count_at(const DyadicIndex& m) const;

    /// Per-index count at a given degree for Exponential profiles.
    long count_at_degree(int degree) const;

    /// All region indices with a positive count, sorted by (degree, lex).
    std::vector<DyadicIndex> support() const;

    long total_points() const;

private:
    CountingProfile() = default;
    Kind kind_ = Kind::Exponential;
    Domain domain_ = Domain::Polydisc;
    int dim_ = 1;
    double c_ = 1.0;
    double beta_ = 0.0;
    int truncation_degree_ = 0;
    std::map<DyadicIndex, long> table_;
};

/// Series/threshold tests attached to the 0-1 laws. For an Exponential
/// profile each reduces to the sign of a linear function of beta; boundary
/// exponents (|q| <= 1e-12) classify as divergent since the terms do not
/// vanish. Carleson and BallCarleson are growth-bound checks: "Converges"
/// means N_m <= C 2^{(1-eps)|m|} (resp. 2^{d(1-eps)m}) holds, and the partial
/// sums reported for them are of the discounted mass sum N_m 2^{-(1-eps)|m|}.
struct SeriesCriterion {
    enum class Kind { Carleson, UnionM, GammaCarleson, Cochran, DirichletFinite, BallCarleson };
    Kind kind;
    double eps = 0.0;   // Carleson / BallCarleson
    int m_parts = 1;    // UnionM
    double gamma = 1.0; // GammaCarleson
    double a = 0.0;     // DirichletFinite

    static SeriesCriterion carleson(double eps) { return {Kind::Carleson, eps, 1, 1.0, 0.0}; }
    static SeriesCriterion union_m(int m) { return {Kind::UnionM, 0.0, m, 1.0, 0.0}; }
    static SeriesCriterion gamma_carleson(double g) { return {Kind::GammaCarleson, 0.0, 1, g, 0.0}; }
    static SeriesCriterion cochran() { return {Kind::Cochran, 0.0, 1, 1.0, 0.0}; }
    static SeriesCriterion dirichlet_finite(double a) { return {Kind::DirichletFinite, 0.0, 1, 1.0, a}; }
    static SeriesCriterion ball_carleson(double eps) { return {Kind::BallCarleson, eps, 1, 1.0, 0.0}; }
};

enum class SeriesClass { Converges, Diverges, Indeterminate };

struct SeriesReport {
    SeriesClass classification = SeriesClass::Indeterminate;
    /// Cumulative sums by degree, multi-index degeneracy included.
    std::vector<double> partial_sums;
    /// The decisive exponent q (term ~ 2^{q s}) for Exponential profiles.
    double exponent = 0.0;
};

SeriesReport series_criterion(const CountingProfile& profile, const SeriesCriterion& crit);

const char* series_class_name(SeriesClass c) noexcept;

} // namespace carlab
