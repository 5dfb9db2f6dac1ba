#include <doctest.h>

#include <cmath>
#include <random>

#include "cmbp/errors.hpp"
#include "cmbp/geometry.hpp"

using namespace cmbp;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
}

ConvexDomain parametric_ellipse(double a, double b, int nodes = 256)
{
    return ConvexDomain::parametric(
        [a, b](double s) { return Point2{a * std::cos(s), b * std::sin(s)}; },
        [a, b](double s) { return Point2{-a * std::sin(s), b * std::cos(s)}; }, nodes);
}

}  // namespace

TEST_CASE("nhat_ahat basic values")
{
    const DirOffset d1 = nhat_ahat({0.5, 0.0}, {-0.5, 0.0});
    CHECK(d1.n.x == doctest::Approx(1.0));
    CHECK(d1.n.y == doctest::Approx(0.0));
    CHECK(d1.a == doctest::Approx(0.0));

    const DirOffset d2 = nhat_ahat({1.0, 0.0}, {0.0, 0.0});
    CHECK(d2.n.x == doctest::Approx(1.0));
    CHECK(d2.a == doctest::Approx(0.5));
}

TEST_CASE("nhat_ahat midpoint lies on the line")
{
    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) {
        const Point2 x1{uniform(rng, -2, 2), uniform(rng, -2, 2)};
        const Point2 x0{uniform(rng, -2, 2), uniform(rng, -2, 2)};
        if (norm(x1 - x0) < 1e-6)
            continue;
        const DirOffset d = nhat_ahat(x1, x0);
        const Point2 mid = 0.5 * (x1 + x0);
        CHECK(dot(d.n, mid) == doctest::Approx(d.a).epsilon(1e-12));
    }
}

TEST_CASE("nhat_ahat rejects coincident points")
{
    CHECK_THROWS_AS(nhat_ahat({0.3, 0.2}, {0.3, 0.2}), Error);
    try {
        nhat_ahat({0.3, 0.2}, {0.3, 0.2});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegeneratePair);
    }
}

TEST_CASE("support interval of the unit disc")
{
    const ConvexDomain disc = ConvexDomain::disc({0, 0}, 1.0);
    for (double ang : {0.0, 0.7, 2.1, 4.4}) {
        const auto [lo, hi] = disc.support_interval({std::cos(ang), std::sin(ang)});
        CHECK(lo == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("support interval of the ellipse against the analytic form")
{
    const ConvexDomain ell = ConvexDomain::ellipse({0, 0}, 1.0, 0.8);
    const auto [lo0, hi0] = ell.support_interval({1, 0});
    CHECK(lo0 == doctest::Approx(-1.0));
    CHECK(hi0 == doctest::Approx(1.0));

    for (double alpha : {0.3, 1.1, 2.0, 5.5}) {
        const Point2 n{std::cos(alpha), std::sin(alpha)};
        const double c = std::cos(alpha) * std::cos(alpha) + 0.64 * std::sin(alpha) * std::sin(alpha);
        const auto [lo, hi] = ell.support_interval(n);
        CHECK(hi == doctest::Approx(std::sqrt(c)).epsilon(1e-12));
        CHECK(lo == doctest::Approx(-std::sqrt(c)).epsilon(1e-12));

        // dense boundary sampling as an independent check
        double best = -1e300;
        for (int k = 0; k < 200000; ++k) {
            const double s = 2.0 * M_PI * k / 200000;
            best = std::max(best, dot(n, Point2{std::cos(s), 0.8 * std::sin(s)}));
        }
        CHECK(hi == doctest::Approx(best).epsilon(1e-7));
    }
}

TEST_CASE("chord lengths with closed forms")
{
    const ConvexDomain disc = ConvexDomain::disc({0, 0}, 1.0);
    CHECK(disc.chord_length({{1, 0}, 0.0}) == doctest::Approx(2.0));
    CHECK(disc.chord_length({{1, 0}, 0.6}) == doctest::Approx(1.6));
    CHECK(disc.chord_length({{1, 0}, 1.2}) == 0.0);

    const ConvexDomain ell = ConvexDomain::ellipse({0, 0}, 1.0, 0.8);
    CHECK(ell.chord_length({{0, 1}, 0.0}) == doctest::Approx(2.0));
}

TEST_CASE("chords are positive strictly inside the support interval")
{
    const ConvexDomain sup = ConvexDomain::superellipse({0, 0}, 1.0, 0.8, 4.0);
    for (double ang : {0.2, 1.0, 2.4}) {
        const Point2 n{std::cos(ang), std::sin(ang)};
        const auto [lo, hi] = sup.support_interval(n);
        for (double frac : {0.02, 0.3, 0.7, 0.98}) {
            const double a = lo + frac * (hi - lo);
            CHECK(sup.chord_length({n, a}) > 0.0);
        }
        CHECK(sup.chord_length({n, hi + 1e-9}) == 0.0);
        CHECK(sup.chord_length({n, lo - 1e-9}) == 0.0);
    }
}

TEST_CASE("chord length is even under (n,a) -> (-n,-a)")
{
    const ConvexDomain ell = ConvexDomain::ellipse({0.2, -0.1}, 1.0, 0.7);
    const ConvexDomain sup = ConvexDomain::superellipse({0.1, 0.05}, 1.0, 0.8, 4.0);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const double ang = uniform(rng, 0, 2 * M_PI);
        const Point2 n{std::cos(ang), std::sin(ang)};
        const Point2 neg{-n.x, -n.y};
        const double a = uniform(rng, -1.2, 1.2);
        CHECK(ell.chord_length({n, a}) ==
              doctest::Approx(ell.chord_length({neg, -a})).epsilon(1e-10));
        if (k < 60)
            CHECK(sup.chord_length({n, a}) ==
                  doctest::Approx(sup.chord_length({neg, -a})).epsilon(1e-10));
    }
}

TEST_CASE("ellipse chords: closed form vs parametric root finding")
{
    const double b = 0.8;
    const ConvexDomain closed = ConvexDomain::ellipse({0, 0}, 1.0, b);
    const ConvexDomain param = parametric_ellipse(1.0, b, 512);

    for (double alpha : {0.0, 0.4, 1.0, 1.3, 2.2, 3.0}) {
        const Point2 n{std::cos(alpha), std::sin(alpha)};
        const double c = n.x * n.x + b * b * n.y * n.y;
        for (double frac : {0.0, 0.25, 0.5, 0.8, 0.95}) {
            const double a = frac * std::sqrt(c);
            const double formula = (b / std::sqrt(c)) * 2.0 * std::sqrt(1.0 - a * a / c);
            CHECK(closed.chord_length({n, a}) == doctest::Approx(formula).epsilon(1e-12));
            CHECK(param.chord_length({n, a}) == doctest::Approx(formula).epsilon(1e-8));
        }
    }
}

TEST_CASE("chord integral recovers the area")
{
    // integral of the chord profile over offsets equals the area; the sine
    // substitution tames the square-root behaviour at the tangencies
    auto area_from_chords = [](const ConvexDomain& dom, Point2 n) {
        const auto [lo, hi] = dom.support_interval(n);
        const double mid = 0.5 * (lo + hi);
        const double rad = 0.5 * (hi - lo);
        const int m = 4096;
        double sum = 0.0;
        for (int k = 0; k <= m; ++k) {
            const double th = -M_PI_2 + M_PI * k / m;
            const double w = (k == 0 || k == m) ? 0.5 : 1.0;
            const double a = mid + rad * std::sin(th);
            sum += w * dom.chord_length({n, a}) * rad * std::cos(th);
        }
        return sum * (M_PI / m);
    };

    const ConvexDomain ell = ConvexDomain::ellipse({0.1, 0.2}, 1.0, 0.8);
    const ConvexDomain sup = ConvexDomain::superellipse({0, 0}, 1.0, 0.8, 4.0);
    for (int k = 0; k < 8; ++k) {
        const double ang = M_PI * k / 8.0;
        const Point2 n{std::cos(ang), std::sin(ang)};
        CHECK(area_from_chords(ell, n) == doctest::Approx(ell.area()).epsilon(1e-6));
        CHECK(area_from_chords(sup, n) == doctest::Approx(sup.area()).epsilon(1e-6));
    }
}

TEST_CASE("boundary nodes carry unit normals and the perimeter")
{
    const ConvexDomain sup = ConvexDomain::superellipse({0, 0}, 1.0, 0.8, 4.0, 256);
    for (const auto& bn : sup.boundary())
        CHECK(std::fabs(norm(bn.normal) - 1.0) <= 1e-12);

    // Richardson-extrapolated reference from two finer node counts
    auto perim = [](int n) {
        return ConvexDomain::superellipse({0, 0}, 1.0, 0.8, 4.0, n).perimeter();
    };
    const double ref = (16.0 * perim(2048) - perim(1024)) / 15.0;
    CHECK(sup.perimeter() == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("outward normals point away from the interior")
{
    const ConvexDomain sup = ConvexDomain::superellipse({0.3, -0.2}, 1.0, 0.8, 4.0);
    for (const auto& bn : sup.boundary()) {
        const Point2 inward = sup.center() - bn.point;
        CHECK(dot(bn.normal, inward) < 0.0);
    }
}

TEST_CASE("non-convex curves are rejected")
{
    auto flower = [](double s) {
        const double r = 1.0 + 0.3 * std::cos(3.0 * s);
        return Point2{r * std::cos(s), r * std::sin(s)};
    };
    CHECK_THROWS_AS(ConvexDomain::parametric(flower, nullptr, 128), Error);
}

TEST_CASE("signed distance and membership")
{
    const ConvexDomain disc = ConvexDomain::disc({0.5, 0.0}, 1.0);
    CHECK(disc.signed_distance({0.5, 0.0}) == doctest::Approx(-1.0));
    CHECK(disc.signed_distance({2.0, 0.0}) == doctest::Approx(0.5));
    CHECK(disc.contains({0.5, 0.5}));
    CHECK(!disc.contains({0.5, 0.99}, 0.05));

    const ConvexDomain ell = ConvexDomain::ellipse({0, 0}, 1.0, 0.8);
    CHECK(ell.signed_distance({0, 0}) < -0.7);
    CHECK(ell.signed_distance({1.5, 0}) > 0.3);
}

TEST_CASE("parametric area matches the closed form")
{
    const ConvexDomain p = parametric_ellipse(1.0, 0.8, 512);
    CHECK(p.area() == doctest::Approx(M_PI * 0.8).epsilon(1e-9));
    CHECK(p.diameter() == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("degenerate domain parameters are rejected")
{
    CHECK_THROWS_AS(ConvexDomain::disc({0, 0}, -1.0), Error);
    CHECK_THROWS_AS(ConvexDomain::ellipse({0, 0}, 1.0, 0.0), Error);
    CHECK_THROWS_AS(ConvexDomain::superellipse({0, 0}, 1.0, 1.0, 1.5), Error);
    CHECK_THROWS_AS(ConvexDomain::disc({0, 0}, 1.0, 4), Error);
}
