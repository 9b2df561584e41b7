#include <doctest.h>

#include "carlab/kernel.hpp"
#include "helpers.hpp"

using namespace carlab;
using namespace carlab::testing;

TEST_CASE("kernel_eval matches closed forms") {
    // empty products at the origin
    CHECK(kernel_eval(KernelSpec::szego(2), Point::polydisc({0.0, 0.0}),
                      Point::polydisc({{0.3, 0.1}, {0.2, -0.4}}))
              .real() == doctest::Approx(1.0).epsilon(1e-15));

    const Complex v = kernel_eval(KernelSpec::szego(1), Point::disc(0.5), Point::disc(0.5));
    CHECK(v.real() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(v.imag() == doctest::Approx(0.0));

    const Complex b = kernel_eval(KernelSpec::besov_sobolev(2, 0.0),
                                  Point::ball({0.5, 0.0}), Point::ball({0.5, 0.0}));
    CHECK(b.real() == doctest::Approx(16.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("dirichlet a=1 logarithmic factor and its limit") {
    // z conj(w) = 0 in a coordinate uses the limit value 1
    CHECK(kernel_eval(KernelSpec::dirichlet(1, 1.0), Point::disc(0.5), Point::disc(0.0)).real() ==
          doctest::Approx(1.0).epsilon(1e-15));
    // direct evaluation at x = 0.25: (1/x) log(1/(1-x))
    const double expect = std::log(1.0 / 0.75) / 0.25;
    CHECK(kernel_eval(KernelSpec::dirichlet(1, 1.0), Point::disc(0.5), Point::disc(0.5)).real() ==
          doctest::Approx(expect).epsilon(1e-14));
    // both branches agree with an independent long series sum at their own x
    for (double x : {0.99e-4, 1.01e-4}) {
        double ref = 0.0, pw = 1.0;
        for (int l = 0; l < 30; ++l) {
            ref += pw / (l + 1.0);
            pw *= x;
        }
        const Complex got = kernel_eval(KernelSpec::dirichlet(1, 1.0), Point::disc(std::sqrt(x)),
                                        Point::disc(std::sqrt(x)));
        CHECK(got.real() == doctest::Approx(ref).epsilon(1e-13));
        CHECK(got.real() > 1.0);
    }
}

TEST_CASE("dirichlet a=0 evaluates identically to szego") {
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        const Point z = random_polydisc_point(rng, 2);
        const Point w = random_polydisc_point(rng, 2);
        const Complex a = kernel_eval(KernelSpec::szego(2), z, w);
        const Complex b = kernel_eval(KernelSpec::dirichlet(2, 0.0), z, w);
        CHECK(a == b); // bitwise, same code path
    }
}

TEST_CASE("hermitian symmetry across families") {
    Rng rng(11);
    struct Case {
        KernelSpec spec;
        bool ball;
    };
    const Case cases[] = {
        {KernelSpec::szego(1), false},          {KernelSpec::szego(2), false},
        {KernelSpec::dirichlet(1, 0.5), false}, {KernelSpec::dirichlet(2, 1.0), false},
        {KernelSpec::besov_sobolev(2, 0.0), true}, {KernelSpec::besov_sobolev(2, 0.5), true},
    };
    for (const Case& c : cases) {
        double worst = 0.0;
        for (int t = 0; t < 10000; ++t) {
            const Point z = c.ball ? random_ball_point(rng, c.spec.dim())
                                   : random_polydisc_point(rng, c.spec.dim());
            const Point w = c.ball ? random_ball_point(rng, c.spec.dim())
                                   : random_polydisc_point(rng, c.spec.dim());
            worst = std::max(worst, std::abs(kernel_eval(c.spec, z, w) -
                                             std::conj(kernel_eval(c.spec, w, z))));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("kernel diagonal is real and >= 1") {
    Rng rng(13);
    for (int t = 0; t < 2000; ++t) {
        const Point z = random_polydisc_point(rng, 2);
        const Complex k = kernel_eval(KernelSpec::szego(2), z, z);
        CHECK(k.real() >= 1.0 - 1e-12);
        CHECK(std::abs(k.imag()) < 1e-12);
    }
}

TEST_CASE("normalized_inner values and normalization bound") {
    CHECK(std::abs(normalized_inner(KernelSpec::szego(1), Point::disc(0.5), Point::disc(0.0))) ==
          doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
    CHECK(std::abs(normalized_inner(KernelSpec::szego(1), Point::disc(0.9), Point::disc(-0.9))) ==
          doctest::Approx(0.19 / 1.81).epsilon(1e-13));

    Rng rng(17);
    for (int t = 0; t < 10000; ++t) {
        const Point z = random_polydisc_point(rng, 2);
        const Point w = random_polydisc_point(rng, 2);
        CHECK(std::abs(normalized_inner(KernelSpec::szego(2), z, w)) <= 1.0 + 1e-12);
        CHECK(std::abs(normalized_inner(KernelSpec::szego(2), z, z) - 1.0) < 1e-12);
    }
}

TEST_CASE("pseudo_hyperbolic closed forms") {
    const Point origin = Point::polydisc({0.0, 0.0});
    const Point w = Point::polydisc({{0.3, 0.0}, {0.0, 0.7}});
    CHECK(pseudo_hyperbolic(origin, w) == doctest::Approx(0.7).epsilon(1e-15));

    const Point bz = Point::ball({{0.2, 0.1}, {0.0, 0.4}});
    CHECK(pseudo_hyperbolic(bz, bz) == doctest::Approx(0.0));

    CHECK(pseudo_hyperbolic(Point::polydisc({0.5, 0.0}), Point::polydisc({0.0, 0.5})) ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("rho_s equals pseudo_hyperbolic in one variable") {
    CHECK(rho_s(Point::disc(0.5), Point::disc(0.5)) == doctest::Approx(0.0));
    CHECK(rho_s(Point::disc(0.5), Point::disc(0.0)) == doctest::Approx(0.5).epsilon(1e-13));
    Rng rng(19);
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const Point z = random_polydisc_point(rng, 1);
        const Point w = random_polydisc_point(rng, 1);
        worst = std::max(worst, std::abs(rho_s(z, w) - pseudo_hyperbolic(z, w)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("rho and rho_s comparability constants (recorded, not asserted)") {
    Rng rng(23);
    double max_ratio = 0.0, min_ratio = 1e9;
    for (int t = 0; t < 5000; ++t) {
        const Point z = random_polydisc_point(rng, 2);
        const Point w = random_polydisc_point(rng, 2);
        const double r = pseudo_hyperbolic(z, w);
        const double s = rho_s(z, w);
        if (r == 0.0 || s == 0.0) continue;
        max_ratio = std::max(max_ratio, s / r);
        min_ratio = std::min(min_ratio, s / r);
    }
    MESSAGE("rho_s/rho on d=2 sampled pairs: min ", min_ratio, " max ", max_ratio);
    CHECK(max_ratio > 0.0); // the probe ran
}

TEST_CASE("schur_product basics and PSD closure") {
    Eigen::MatrixXcd a(2, 2), h(2, 2);
    a << 1, 2, 2, 1;
    h << 1, 0.5, 0.5, 1;
    const Eigen::MatrixXcd p = schur_product(a, h);
    CHECK(p(0, 0).real() == doctest::Approx(1.0));
    CHECK(p(0, 1).real() == doctest::Approx(1.0));
    CHECK(p(1, 0).real() == doctest::Approx(1.0));
    CHECK(p(1, 1).real() == doctest::Approx(1.0));

    const Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(3, 3);
    Rng psd_rng(29);
    Eigen::MatrixXcd m = random_psd(psd_rng, 3);
    CHECK((schur_product(m, ones) - m).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    const Eigen::MatrixXcd diag = schur_product(Eigen::MatrixXcd::Identity(3, 3), m);
    CHECK(diag(0, 1) == Complex(0.0, 0.0));
    CHECK(diag(1, 1) == m(1, 1));

    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + static_cast<int>(rng.below(29));
        const Eigen::MatrixXcd x = random_psd(rng, n);
        const Eigen::MatrixXcd y = random_psd(rng, n);
        CHECK(min_eigenvalue(schur_product(x, y)) >= -1e-10);
    }

    CHECK_THROWS_AS(schur_product(Eigen::MatrixXcd::Identity(2, 2),
                                  Eigen::MatrixXcd::Identity(3, 3)),
                    InvalidInput);
}

TEST_CASE("domain and boundary errors") {
    CHECK_THROWS_AS(kernel_eval(KernelSpec::szego(1), Point::disc(0.5),
                                Point::ball({{0.1, 0.0}})),
                    InvalidInput);
    CHECK_THROWS_AS(kernel_eval(KernelSpec::szego(2), Point::disc(0.5), Point::disc(0.2)),
                    InvalidInput);
    CHECK_THROWS_AS(Point::disc(Complex(1.0, 0.0)), InvalidInput);
    CHECK_THROWS_AS(Point::disc(Complex(1.0 - 1e-13, 0.0)), InvalidInput);
    CHECK_NOTHROW(Point::disc(Complex(1.0 - 1e-11, 0.0)));
    CHECK_THROWS_AS(Point::ball({{0.8, 0.0}, {0.61, 0.0}}), InvalidInput);
    CHECK_THROWS_AS(KernelSpec::dirichlet(1, 1.5), InvalidInput);
    CHECK_THROWS_AS(KernelSpec::besov_sobolev(2, 2.0), InvalidInput);
    CHECK_THROWS_AS(pseudo_hyperbolic(Point::disc(0.1), Point::ball({{0.1, 0.0}})), InvalidInput);
    CHECK_THROWS_AS(rho_s(Point::ball({{0.1, 0.0}}), Point::ball({{0.1, 0.0}})), InvalidInput);
}
