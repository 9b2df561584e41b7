#pragma once

#include <iosfwd>

#include "carlab/sequence.hpp"

namespace carlab {

/// max over dyadic boxes (both the plain and the half-width shifted grid,
/// levels 0..max region depth) of mu_gamma(S_I)/|I|^gamma for the measure
/// mu_gamma = sum_n (1-|z_n|^2)^gamma delta_{z_n} on the unit disc.
struct OneBoxReport {
    double constant = 0.0;
    int level = 0;         ///< level attaining the max
    long box = 0;          ///< box index at that level
    bool shifted = false;  ///< grid attaining the max
    /// The sup over all arcs exceeds the dyadic max by at most this factor.
    double grid_comparability = 0.0;
};

OneBoxReport onebox_constant(const RandomSequence& seq, double gamma);

/// (level, shifted, max ratio) rows behind onebox_constant, for CSV reports.
struct OneBoxLevelRow {
    int level = 0;
    bool shifted = false;
    double max_ratio = 0.0;
};
std::vector<OneBoxLevelRow> onebox_level_table(const RandomSequence& seq, double gamma);
void write_onebox_csv(std::ostream& os, const std::vector<OneBoxLevelRow>& rows);

/// atanh of the pseudo-hyperbolic distance; points of the unit disc.
double hyperbolic_distance(const Point& z, const Point& w);

/// Exact number of sequence points within pseudo-hyperbolic distance < r of z.
long boe_nicolau_count(const RandomSequence& seq, const Point& z, double r);

enum class BlochVerdict { AlmostSurely, AlmostNever, Indeterminate };

/// 0-1 verdict for Bloch interpolation of a d = 1 profile, decided by the
/// series sum_m N_m^3 2^{-2m} (the union-of-two-separated-sequences series).
struct BlochReport {
    BlochVerdict verdict = BlochVerdict::Indeterminate;
    SeriesReport series;
};
BlochReport bloch_profile_classifier(const CountingProfile& profile);

const char* bloch_verdict_name(BlochVerdict v) noexcept;

} // namespace carlab
