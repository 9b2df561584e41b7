#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>

#include "carlab/profile.hpp"

namespace carlab {

/// Default cap on points per generated sequence; dense Gramians are quadratic
/// in memory.
inline constexpr long kDefaultPointCap = 200000;

/// A realized random sequence: points, their region labels, and everything
/// needed to regenerate it (profile, placement, seed).
struct RandomSequence {
    Domain domain = Domain::Polydisc;
    int dim = 1;
    std::uint64_t seed = 0;
    Placement placement = Placement::Midpoint;
    std::optional<CountingProfile> profile;
    std::vector<Point> points;
    std::vector<DyadicIndex> region_of;

    long size() const noexcept { return static_cast<long>(points.size()); }

    /// Radii per point and coordinate (moduli for polydisc points, the scalar
    /// norm replicated for ball points).
    std::vector<std::vector<double>> radii() const;

    int max_region_degree() const noexcept;
};

/// Deterministic radii: exactly N_m tuples per region index, Midpoint placing
/// 1-r^i at 3*2^{-(m_i+2)} and UniformInBand drawing 1-r^i uniformly in
/// [2^{-(m_i+1)}, 2^{-m_i}). Regions are visited in (degree, lex) order.
std::vector<std::pair<DyadicIndex, std::vector<double>>> radii_from_profile(
    const CountingProfile& profile, Placement placement, std::uint64_t seed,
    long point_cap = kDefaultPointCap);

/// lambda_n = (r^1 e^{2 pi i theta^1}, ..., r^d e^{2 pi i theta^d}) with the
/// angles i.i.d. uniform on [0,1).
RandomSequence sample_polydisc(const CountingProfile& profile, Placement placement,
                               std::uint64_t seed, long point_cap = kDefaultPointCap);

/// lambda_n = r_n xi_n with xi_n uniform on the unit sphere of C^d (normalized
/// 2d-dimensional Gaussian). The profile must use scalar shell indices.
RandomSequence sample_ball(const CountingProfile& profile, int dim, Placement placement,
                           std::uint64_t seed, long point_cap = kDefaultPointCap);

/// Line-oriented text format, one point per line:
///   re1 im1 re2 im2 ... | m1 ... md
/// preceded by a small header; round-trips bit-exactly.
void write_sequence(std::ostream& os, const RandomSequence& seq);
RandomSequence read_sequence(std::istream& is);
void save_sequence(const std::string& path, const RandomSequence& seq);
RandomSequence load_sequence(const std::string& path);

} // namespace carlab
