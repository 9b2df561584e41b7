#include <doctest.h>

#include <sstream>

#include "carlab/kernel.hpp"
#include "carlab/separation.hpp"
#include "helpers.hpp"

using namespace carlab;
using namespace carlab::testing;

namespace {

RandomSequence seq_of(std::vector<Point> pts) {
    RandomSequence s;
    s.domain = pts.front().domain();
    s.dim = pts.front().dim();
    for (Point& p : pts) {
        s.region_of.push_back(region_of_point(p));
        s.points.push_back(std::move(p));
    }
    return s;
}

/// A disc point in band m with the given argument fraction in [0,1).
Point band_point(int m, double theta) {
    const double r = 1.0 - 3.0 * std::exp2(-(m + 2));
    return Point::disc(std::polar(r, 2.0 * M_PI * theta));
}

} // namespace

TEST_CASE("separation_constant") {
    CHECK(separation_constant(seq_of({Point::disc(0.1)}), Metric::Rho) == 1.0);
    CHECK(separation_constant(seq_of({Point::disc(0.3), Point::disc(0.3)}), Metric::Rho) == 0.0);
    CHECK(separation_constant(seq_of({Point::disc(0.0), Point::disc(0.5)}), Metric::Rho) ==
          doctest::Approx(0.5));
    const RandomSequence s =
        seq_of({Point::polydisc({0.5, 0.0}), Point::polydisc({0.0, 0.5}),
                Point::polydisc({0.0, 0.0})});
    CHECK(separation_constant(s, Metric::Rho) == doctest::Approx(0.5).epsilon(1e-14));
    // rho_s version runs and lies in [0,1]
    const double rs = separation_constant(s, Metric::RhoS);
    CHECK(rs > 0.0);
    CHECK(rs <= 1.0);
}

TEST_CASE("greedy_partition basics") {
    // all mutually far apart -> one part
    const RandomSequence far = seq_of({Point::disc(0.0), Point::disc(0.9), Point::disc(-0.9)});
    CHECK(greedy_partition(far, 0.5, Metric::Rho).parts_used == 1);

    // k identical points -> k parts
    const RandomSequence same =
        seq_of({Point::disc(0.4), Point::disc(0.4), Point::disc(0.4), Point::disc(0.4)});
    CHECK(greedy_partition(same, 0.3, Metric::Rho).parts_used == 4);

    // 3 points pairwise close -> 3 parts
    const RandomSequence tri = seq_of({Point::disc(0.0), Point::disc(0.05), Point::disc(-0.05)});
    CHECK(greedy_partition(tri, 0.2, Metric::Rho).parts_used == 3);

    CHECK_THROWS_AS(greedy_partition(far, 0.0, Metric::Rho), InvalidInput);
}

TEST_CASE("greedy_partition soundness and degree bound on random sequences") {
    const auto profile = CountingProfile::exponential(Domain::Polydisc, 1, 2.0, 0.7, 8);
    const RandomSequence seq = sample_polydisc(profile, Placement::UniformInBand, 321);
    const double delta = 0.35;
    const PartitionResult part = greedy_partition(seq, delta, Metric::Rho);

    // soundness by brute force: within one part every pairwise distance >= delta
    for (long i = 0; i < seq.size(); ++i)
        for (long j = i + 1; j < seq.size(); ++j)
            if (part.assignment[static_cast<size_t>(i)] == part.assignment[static_cast<size_t>(j)])
                CHECK(pseudo_hyperbolic(seq.points[static_cast<size_t>(i)],
                                        seq.points[static_cast<size_t>(j)]) >= delta);

    // parts used <= 1 + max degree of the closeness graph
    long max_deg = 0;
    for (long i = 0; i < seq.size(); ++i) {
        long deg = 0;
        for (long j = 0; j < seq.size(); ++j)
            if (i != j && pseudo_hyperbolic(seq.points[static_cast<size_t>(i)],
                                            seq.points[static_cast<size_t>(j)]) < delta)
                ++deg;
        max_deg = std::max(max_deg, deg);
    }
    CHECK(part.parts_used <= max_deg + 1);
}

TEST_CASE("rectangle_collisions catches straddling pairs through the shifted grid") {
    // band m = 1: rectangle width 1/2
    const RandomSequence a = seq_of({band_point(1, 0.10), band_point(1, 0.12)});
    const auto ev_a = rectangle_collisions(a, 1);
    REQUIRE(ev_a.size() == 1);
    CHECK(ev_a[0].members == std::vector<int>{0, 1});
    CHECK(!ev_a[0].shifted);

    const RandomSequence b = seq_of({band_point(1, 0.49), band_point(1, 0.51)});
    const auto ev_b = rectangle_collisions(b, 1);
    REQUIRE(ev_b.size() == 1);
    CHECK(ev_b[0].shifted); // only the shifted grid catches them

    // single point per region -> no events
    const RandomSequence c = seq_of({band_point(1, 0.2), band_point(2, 0.2)});
    CHECK(rectangle_collisions(c, 1).empty());

    // M = 2 requires three in one rectangle
    const RandomSequence d =
        seq_of({band_point(1, 0.10), band_point(1, 0.12), band_point(1, 0.14)});
    const auto ev_d = rectangle_collisions(d, 2);
    REQUIRE(ev_d.size() == 1);
    CHECK(ev_d[0].members.size() == 3);
    CHECK(rectangle_collisions(b, 2).empty());
}

TEST_CASE("points in no common rectangle keep a mutual distance (recorded)") {
    // testable direction: same region, different rectangles in both grids
    Rng rng(61);
    double min_rho = 1.0;
    long pairs = 0;
    for (int t = 0; t < 4000; ++t) {
        const int m = 2 + static_cast<int>(rng.below(6));
        const Point p = band_point(m, rng.uniform01());
        const Point q = band_point(m, rng.uniform01());
        const RandomSequence s = seq_of({p, q});
        if (!rectangle_collisions(s, 1).empty()) continue;
        min_rho = std::min(min_rho, pseudo_hyperbolic(p, q));
        ++pairs;
    }
    REQUIRE(pairs > 100);
    MESSAGE("empirical mutual-distance constant c_1 over ", pairs, " non-colliding pairs: ",
            min_rho);
    CHECK(min_rho > 0.0);
}

TEST_CASE("cluster_count thresholds and monotonicity") {
    const RandomSequence far = seq_of({Point::disc(0.0), Point::disc(0.9)});
    CHECK(cluster_count(far, 1, 2) == 0);

    // M+1 coincident points: counted at every scale
    const RandomSequence same = seq_of({Point::disc(0.3), Point::disc(0.3)});
    for (int l : {0, 2, 8, 20}) CHECK(cluster_count(same, 1, l) >= 1);

    // two points at rho distance 0.3: seen at l=1 (radius 0.5), not at l=2
    const Point p = Point::disc(0.0);
    const Point q = Point::disc(0.3);
    REQUIRE(pseudo_hyperbolic(p, q) == doctest::Approx(0.3));
    const RandomSequence pair = seq_of({p, q});
    CHECK(cluster_count(pair, 1, 1) == 1); // both in the m=0 region
    CHECK(cluster_count(pair, 1, 2) == 0);

    // nonincreasing in l, nondecreasing under adding points
    const auto profile = CountingProfile::exponential(Domain::Polydisc, 1, 3.0, 0.8, 7);
    const RandomSequence seq = sample_polydisc(profile, Placement::UniformInBand, 11);
    long prev = 1 << 30;
    for (int l = 0; l <= 6; ++l) {
        const long c = cluster_count(seq, 1, l);
        CHECK(c <= prev);
        prev = c;
    }
    RandomSequence small = seq;
    small.points.erase(small.points.begin() + seq.size() / 2, small.points.end());
    small.region_of.resize(static_cast<size_t>(seq.size() / 2));
    CHECK(cluster_count(small, 1, 3) <= cluster_count(seq, 1, 3));
}

TEST_CASE("uniform separation products") {
    const RandomSequence two = seq_of({Point::disc(0.0), Point::disc(0.5)});
    CHECK(uniform_separation_product(two, 0) == doctest::Approx(0.5).epsilon(1e-14));

    const RandomSequence dup = seq_of({Point::disc(0.2), Point::disc(0.2), Point::disc(0.5)});
    CHECK(uniform_separation_product(dup, 0) == 0.0); // its duplicate zeroes the product
    CHECK(uniform_separation_min(dup) == 0.0);

    const RandomSequence tri = seq_of({Point::disc(0.0), Point::disc(0.5), Point::disc(-0.5)});
    CHECK(uniform_separation_product(tri, 0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(uniform_separation_min(tri) <= 0.25);

    CHECK_THROWS_AS(uniform_separation_product(tri, 5), InvalidInput);
}

TEST_CASE("jsonl reports") {
    const RandomSequence d =
        seq_of({band_point(1, 0.10), band_point(1, 0.12), band_point(3, 0.5)});
    std::ostringstream os;
    write_collisions_jsonl(os, rectangle_collisions(d, 1));
    CHECK(os.str().find("\"members\":[0,1]") != std::string::npos);
    std::ostringstream ps;
    write_partition_jsonl(ps, greedy_partition(d, 0.4, Metric::Rho));
    CHECK(ps.str().find("\"part\":0") != std::string::npos);
}
