#include "carlab/sequence.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ranges>
#include <sstream>
#include <string>

#include "carlab/rng.hpp"

namespace carlab {

namespace {

constexpr double kTwoPi = 2.0 * 3.141592653589793238462643383279502884;

/// Scale coordinates by a few ulps until the point's modulus falls in the
/// recorded band. Rounding can push a modulus computed from a radius within an
/// ulp of a band edge across it; the nudge grows per attempt and the loop is
/// deterministic.
template <class CoordRange>
void snap_into_band(CoordRange&& coords, double& modulus, int m) {
    const double lo = std::exp2(-(m + 1));
    const double hi = m == 0 ? 1.0 : std::exp2(-m);
    for (int attempt = 0; attempt < 24; ++attempt) {
        const double x = 1.0 - modulus;
        if (x >= lo && (x < hi || (m == 0 && x <= 1.0))) return;
        // x < lo: too close to the boundary, shrink; x >= hi: grow
        const double f = x < lo ? 1.0 - std::ldexp(1.0, -52 + attempt)
                                : 1.0 + std::ldexp(1.0, -52 + attempt);
        for (Complex& c : coords) c *= f;
        modulus *= f;
    }
    throw NumericError("snap_into_band: could not place point in its band");
}

const char* placement_name(Placement p) {
    return p == Placement::Midpoint ? "midpoint" : "uniform";
}

Placement placement_from_name(const std::string& s) {
    if (s == "midpoint") return Placement::Midpoint;
    if (s == "uniform") return Placement::UniformInBand;
    throw InvalidInput("unknown placement '" + s + "'");
}

} // namespace

std::vector<std::vector<double>> RandomSequence::radii() const {
    std::vector<std::vector<double>> out;
    out.reserve(points.size());
    for (const Point& p : points) {
        if (domain == Domain::Polydisc) {
            std::vector<double> r(static_cast<size_t>(p.dim()));
            for (int i = 0; i < p.dim(); ++i) r[static_cast<size_t>(i)] = std::abs(p[i]);
            out.push_back(std::move(r));
        } else {
            out.push_back({p.norm()});
        }
    }
    return out;
}

int RandomSequence::max_region_degree() const noexcept {
    int d = 0;
    for (const auto& idx : region_of)
        if (idx.degree > d) d = idx.degree;
    return d;
}

std::vector<std::pair<DyadicIndex, std::vector<double>>> radii_from_profile(
    const CountingProfile& profile, Placement placement, std::uint64_t seed, long point_cap) {
    const long total = profile.total_points();
    if (total > point_cap)
        throw ResourceLimit("radii_from_profile: profile realizes " + std::to_string(total) +
                            " points, exceeding the cap of " + std::to_string(point_cap));
    Rng rng(derive_seed(seed, hash_str("radii")));
    std::vector<std::pair<DyadicIndex, std::vector<double>>> out;
    out.reserve(static_cast<size_t>(total));
    for (const DyadicIndex& idx : profile.support()) {
        const long n = profile.count_at(idx);
        for (long k = 0; k < n; ++k) {
            std::vector<double> r(idx.m.size());
            for (size_t i = 0; i < idx.m.size(); ++i) {
                const int mi = idx.m[i];
                if (placement == Placement::Midpoint) {
                    r[i] = 1.0 - 3.0 * std::exp2(-(mi + 2));
                } else {
                    const double lo = std::exp2(-(mi + 1));
                    r[i] = 1.0 - lo * (1.0 + rng.uniform01());
                }
            }
            out.emplace_back(idx, std::move(r));
        }
    }
    return out;
}

RandomSequence sample_polydisc(const CountingProfile& profile, Placement placement,
                               std::uint64_t seed, long point_cap) {
    if (profile.domain() != Domain::Polydisc)
        throw InvalidInput("sample_polydisc: profile is not a polydisc profile");
    const int d = profile.dim();
    auto radii = radii_from_profile(profile, placement, seed, point_cap);
    Rng angles(derive_seed(seed, hash_str("angles")));
    RandomSequence seq;
    seq.domain = Domain::Polydisc;
    seq.dim = d;
    seq.seed = seed;
    seq.placement = placement;
    seq.profile = profile;
    seq.points.reserve(radii.size());
    seq.region_of.reserve(radii.size());
    for (auto& [idx, r] : radii) {
        std::vector<Complex> coords(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) {
            const double theta = angles.uniform01();
            Complex* c = &coords[static_cast<size_t>(i)];
            *c = std::polar(r[static_cast<size_t>(i)], kTwoPi * theta);
            double mod = std::abs(*c);
            snap_into_band(std::ranges::subrange(c, c + 1), mod, idx.m[static_cast<size_t>(i)]);
        }
        seq.points.emplace_back(Domain::Polydisc, std::move(coords));
        seq.region_of.push_back(idx);
    }
    return seq;
}

RandomSequence sample_ball(const CountingProfile& profile, int dim, Placement placement,
                           std::uint64_t seed, long point_cap) {
    if (profile.domain() != Domain::Ball)
        throw InvalidInput("sample_ball: profile is not a ball (scalar shell) profile");
    if (dim < 1) throw InvalidInput("sample_ball: dimension must be >= 1");
    if (dim != profile.dim())
        throw InvalidInput("sample_ball: dimension " + std::to_string(dim) +
                           " does not match the profile dimension " +
                           std::to_string(profile.dim()));
    auto radii = radii_from_profile(profile, placement, seed, point_cap);
    Rng dirs(derive_seed(seed, hash_str("directions")));
    RandomSequence seq;
    seq.domain = Domain::Ball;
    seq.dim = dim;
    seq.seed = seed;
    seq.placement = placement;
    seq.profile = profile;
    seq.points.reserve(radii.size());
    seq.region_of.reserve(radii.size());
    for (auto& [idx, r] : radii) {
        std::vector<Complex> g(static_cast<size_t>(dim));
        double norm2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double re = dirs.gaussian();
            const double im = dirs.gaussian();
            g[static_cast<size_t>(i)] = Complex(re, im);
            norm2 += re * re + im * im;
        }
        const double scale = r[0] / std::sqrt(norm2);
        double mod = 0.0;
        for (Complex& c : g) {
            c *= scale;
            mod += std::norm(c);
        }
        mod = std::sqrt(mod);
        snap_into_band(g, mod, idx.m[0]);
        seq.points.emplace_back(Domain::Ball, std::move(g));
        seq.region_of.push_back(idx);
    }
    return seq;
}

void write_sequence(std::ostream& os, const RandomSequence& seq) {
    char buf[64];
    os << "carlab-seq 1\n";
    os << "domain " << domain_name(seq.domain) << "\n";
    os << "dim " << seq.dim << "\n";
    os << "seed " << seq.seed << "\n";
    os << "placement " << placement_name(seq.placement) << "\n";
    if (seq.profile) {
        const CountingProfile& p = *seq.profile;
        if (p.kind() == CountingProfile::Kind::Exponential) {
            std::snprintf(buf, sizeof buf, "%.17g", p.c());
            os << "profile exponential " << buf;
            std::snprintf(buf, sizeof buf, "%.17g", p.beta());
            os << " " << buf << " " << p.truncation_degree() << "\n";
        } else {
            os << "profile table " << p.table_counts().size() << "\n";
            for (const auto& [idx, n] : p.table_counts()) {
                for (int mi : idx.m) os << mi << " ";
                os << ": " << n << "\n";
            }
        }
    } else {
        os << "profile none\n";
    }
    os << "points " << seq.points.size() << "\n";
    for (size_t i = 0; i < seq.points.size(); ++i) {
        const Point& p = seq.points[i];
        for (int j = 0; j < p.dim(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g ", p[j].real(), p[j].imag());
            os << buf;
        }
        os << "|";
        for (int mi : seq.region_of[i].m) os << " " << mi;
        os << "\n";
    }
}

RandomSequence read_sequence(std::istream& is) {
    auto fail = [](const std::string& why) -> void {
        throw InvalidInput("read_sequence: " + why);
    };
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "carlab-seq" || version != 1)
        fail("bad header");
    RandomSequence seq;
    std::string key, val;
    if (!(is >> key >> val) || key != "domain") fail("missing domain");
    if (val == "polydisc")
        seq.domain = Domain::Polydisc;
    else if (val == "ball")
        seq.domain = Domain::Ball;
    else
        fail("unknown domain '" + val + "'");
    if (!(is >> key >> seq.dim) || key != "dim") fail("missing dim");
    if (!(is >> key >> seq.seed) || key != "seed") fail("missing seed");
    if (!(is >> key >> val) || key != "placement") fail("missing placement");
    seq.placement = placement_from_name(val);
    if (!(is >> key >> val) || key != "profile") fail("missing profile");
    if (val == "exponential") {
        double c = 0.0, beta = 0.0;
        int trunc = 0;
        if (!(is >> c >> beta >> trunc)) fail("bad exponential profile");
        seq.profile = CountingProfile::exponential(seq.domain, seq.dim, c, beta, trunc);
    } else if (val == "table") {
        size_t rows = 0;
        if (!(is >> rows)) fail("bad table profile");
        const int index_dim = seq.domain == Domain::Ball ? 1 : seq.dim;
        std::map<DyadicIndex, long> counts;
        for (size_t rix = 0; rix < rows; ++rix) {
            std::vector<int> m(static_cast<size_t>(index_dim));
            for (int& mi : m)
                if (!(is >> mi)) fail("bad table row");
            std::string colon;
            long n = 0;
            if (!(is >> colon >> n) || colon != ":") fail("bad table row");
            counts[DyadicIndex(std::move(m))] = n;
        }
        seq.profile = CountingProfile::table(seq.domain, seq.dim, std::move(counts));
    } else if (val != "none") {
        fail("unknown profile kind '" + val + "'");
    }
    size_t npoints = 0;
    if (!(is >> key >> npoints) || key != "points") fail("missing point count");
    is >> std::ws;
    const int index_dim = seq.domain == Domain::Ball ? 1 : seq.dim;
    seq.points.reserve(npoints);
    seq.region_of.reserve(npoints);
    for (size_t i = 0; i < npoints; ++i) {
        std::string line;
        if (!std::getline(is, line)) fail("truncated point list");
        std::istringstream ls(line);
        std::vector<Complex> coords(static_cast<size_t>(seq.dim));
        for (int j = 0; j < seq.dim; ++j) {
            double re = 0.0, im = 0.0;
            if (!(ls >> re >> im)) fail("bad point line '" + line + "'");
            coords[static_cast<size_t>(j)] = Complex(re, im);
        }
        std::string bar;
        if (!(ls >> bar) || bar != "|") fail("missing region separator");
        std::vector<int> m(static_cast<size_t>(index_dim));
        for (int& mi : m)
            if (!(ls >> mi)) fail("bad region index");
        seq.points.emplace_back(seq.domain, std::move(coords));
        seq.region_of.push_back(DyadicIndex(std::move(m)));
    }
    return seq;
}

void save_sequence(const std::string& path, const RandomSequence& seq) {
    std::ofstream os(path);
    if (!os) throw InvalidInput("save_sequence: cannot open '" + path + "'");
    write_sequence(os, seq);
    if (!os) throw InvalidInput("save_sequence: write failed for '" + path + "'");
}

RandomSequence load_sequence(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidInput("load_sequence: cannot open '" + path + "'");
    return read_sequence(is);
}

} // namespace carlab
