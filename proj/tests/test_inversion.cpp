#include <doctest.h>

#include <cmath>
#include <vector>

#include "cmbp/errors.hpp"
#include "cmbp/forward.hpp"
#include "cmbp/inversion.hpp"
#include "cmbp/phantom.hpp"

using namespace cmbp;

namespace {

/// Closed-form value of the weighted inner integral with trace
/// g(t) = t/sqrt(t^2 - r1^2), lower limit r0 > r1, upper limit T.
double log_pair_value(double r0, double r1, double T)
{
    return std::log(std::sqrt(T * T - r0 * r0) + std::sqrt(T * T - r1 * r1)) -
           0.5 * std::log(std::fabs(r0 * r0 - r1 * r1));
}

Reconstruction quick_bp(const ConvexDomain& dom, const BoundarySeries& data, Formula f, int n)
{
    ReconstructionRequest req;
    req.formula = f;
    req.nx = req.ny = n;
    req.threads = 2;
    return back_project(dom, data, req);
}

double masked_rel_l2(const GridImage& a, const GridImage& b, const std::vector<std::uint8_t>& m)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i])
            continue;
        num += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
        den += b.values[i] * b.values[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("singular time integral of the zero trace")
{
    std::vector<double> trace(256, 0.0);
    CHECK(singular_time_integral({trace.data(), trace.size()}, 0.01, 1.0) == 0.0);
}

TEST_CASE("singular time integral reproduces the closed-form log pair")
{
    const int n = 32768;
    for (auto [r0, r1, T] : {std::tuple{0.8, 0.3, 4.0}, std::tuple{1.4, 1.0, 6.0},
                             std::tuple{0.5, 0.05, 2.0}}) {
        const double dt = T / n;
        std::vector<double> trace(n);
        for (int j = 0; j < n; ++j) {
            const double t = dt * (j + 1);
            trace[j] = t > r1 ? t / std::sqrt(t * t - r1 * r1) : 0.0;
        }
        const double got = singular_time_integral({trace.data(), trace.size()}, dt, r0);
        CHECK(got == doctest::Approx(log_pair_value(r0, r1, T)).epsilon(1e-6));
    }
}

TEST_CASE("singular time integral with a constant trace")
{
    // t/sqrt(t^2 - 0) = 1: the arccosh antiderivative
    const int n = 16384;
    const double T = 3.0, d = 0.7;
    std::vector<double> trace(n, 1.0);
    const double expect = std::log(T + std::sqrt(T * T - d * d)) - std::log(d);
    CHECK(singular_time_integral({trace.data(), trace.size()}, T / n, d) ==
          doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("singular time integral validates the distance")
{
    std::vector<double> trace(64, 1.0);
    CHECK_THROWS_AS(singular_time_integral({trace.data(), trace.size()}, 0.1, 0.0), Error);
    CHECK_THROWS_AS(singular_time_integral({trace.data(), trace.size()}, 0.1, 6.5), Error);
}

TEST_CASE("pv radius integral of zero and of the identity")
{
    std::vector<double> zero(128, 0.0);
    CHECK(pv_radius_integral({zero.data(), zero.size()}, 0.01, 0.5) == 0.0);

    const int n = 16384;
    const double R = 2.0;
    const double dr = R / n;
    std::vector<double> lin(n);
    for (int j = 0; j < n; ++j)
        lin[j] = dr * (j + 1);
    for (double d : {0.3, 0.9, 1.7}) {
        const double expect = 0.5 * std::log((R * R - d * d) / (d * d));
        CHECK(pv_radius_integral({lin.data(), lin.size()}, dr, d) ==
              doctest::Approx(expect).epsilon(1e-8));
    }
    CHECK_THROWS_AS(pv_radius_integral({lin.data(), lin.size()}, dr, 2.5), Error);
}

TEST_CASE("pv radius integral against a matched refinement oracle")
{
    const ConvexDomain disc = ConvexDomain::disc({0, 0}, 1.0, 64);
    const Phantom f({Bump{{0.2, 0.1}, 0.3, 1.0}});
    const BoundarySeries m1 = circular_means(disc, f, 512, 512);
    const BoundarySeries m4 = circular_means(disc, f, 2048, 512);
    const int i = 10;

    auto weighted = [](const BoundarySeries& m, int row) {
        std::vector<double> g(static_cast<std::size_t>(m.n_samples));
        for (int j = 0; j < m.n_samples; ++j)
            g[static_cast<std::size_t>(j)] = (m.step * (j + 1)) * m.at(row, j);
        return g;
    };
    // oracle: same subtraction formula, test-side loop on the 4x grid
    auto oracle = [](const std::vector<double>& g, double dr, double d) {
        const int n = static_cast<int>(g.size());
        const double R = dr * n;
        auto val = [&](int j) { return j <= 0 ? 0.0 : g[static_cast<std::size_t>(j) - 1]; };
        const double ud = d / dr;
        const int jd = static_cast<int>(ud);
        const double gd = val(jd) * (1.0 - (ud - jd)) + val(jd + 1) * (ud - jd);
        double pm = 0.0, pp = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double r = dr * j;
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            if (std::fabs(r - d) < 0.5 * dr)
                pm += w * (val(j + 1) - val(j - 1)) / (2.0 * dr);
            else
                pm += w * (val(j) - gd) / (r - d);
            pp += w * val(j) / (r + d);
        }
        return (pm * dr + gd * std::log((R - d) / d) - pp * dr) / (2.0 * d);
    };

    const std::vector<double> g1 = weighted(m1, i);
    const std::vector<double> g4 = weighted(m4, i);
    for (double d : {0.5, 1.1, 1.6}) {
        const double got = pv_radius_integral({g1.data(), g1.size()}, m1.step, d);
        const double want = oracle(g4, m4.step, d);
        CHECK(got == doctest::Approx(want).epsilon(1e-4));
    }
}

TEST_CASE("back projection of zero data is zero")
{
    const ConvexDomain disc = ConvexDomain::disc({0, 0}, 1.0, 64);
    BoundarySeries zero_means = circular_means(disc, Phantom(), 64, 64);
    BoundarySeries zero_wave = wave_from_means(zero_means, 64, 8.0);

    for (Formula f : {Formula::MeansA, Formula::MeansB}) {
        const Reconstruction r = quick_bp(disc, zero_means, f, 24);
        for (double v : r.image.values)
            CHECK(v == 0.0);
    }
    for (Formula f : {Formula::WaveA, Formula::WaveB}) {
        const Reconstruction r = quick_bp(disc, zero_wave, f, 24);
        for (double v : r.image.values)
            CHECK(v == 0.0);
    }
}

TEST_CASE("back projection rejects mismatched data kinds")
{
    const ConvexDomain disc = ConvexDomain::disc({0, 0}, 1.0, 64);
    BoundarySeries m = circular_means(disc, Phantom(), 64, 64);
    CHECK_THROWS_AS(quick_bp(disc, m, Formula::WaveB, 24), Error);
}

TEST_CASE("disc round trip at reduced resolution")
{
    const ConvexDomain disc = ConvexDomain::disc({0, 0}, 1.0, 128);
    const Phantom f({Bump{{0.25, -0.1}, 0.25, 1.0}, Bump{{-0.3, 0.25}, 0.2, 0.6}});
    const BoundarySeries m = circular_means(disc, f, 512, 512, 2);
    const BoundarySeries w = wave_from_means(m, 512, 8.0 * disc.diameter(), 2);

    const Reconstruction rec = quick_bp(disc, w, Formula::WaveB, 48);
    const GridImage ref = rasterize_on(f, rec.image);
    const double err = masked_rel_l2(rec.image, ref, rec.mask);
    CHECK(err <= 0.12);

    // linearity in the data, tolerance at roundoff relative to the image scale
    BoundarySeries w2 = w;
    for (double& v : w2.values)
        v *= -1.5;
    const Reconstruction rec2 = quick_bp(disc, w2, Formula::WaveB, 48);
    const double scale = rec.image.max_abs();
    for (std::size_t k = 0; k < rec.image.values.size(); ++k)
        CHECK(std::fabs(rec2.image.values[k] + 1.5 * rec.image.values[k]) <= 1e-10 * scale);
}

TEST_CASE("disc reconstruction commutes with quarter-turn rotation")
{
    const ConvexDomain disc = ConvexDomain::disc({0, 0}, 1.0, 128);
    const Phantom f({Bump{{0.3, 0.1}, 0.22, 1.0}});
    const Phantom frot({Bump{{-0.1, 0.3}, 0.22, 1.0}});  // rotated by +90 degrees

    auto run = [&](const Phantom& ph) {
        const BoundarySeries m = circular_means(disc, ph, 384, 384, 2);
        const BoundarySeries w = wave_from_means(m, 384, 8.0 * disc.diameter(), 2);
        return quick_bp(disc, w, Formula::WaveB, 40);
    };
    const Reconstruction ra = run(f);
    const Reconstruction rb = run(frot);

    // rotate image a by +90 degrees on the lattice: cell (ix, iy) -> (n-1-iy, ix)
    const int n = ra.image.nx;
    GridImage rot = ra.image;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            rot.at(n - 1 - iy, ix) = ra.image.at(ix, iy);

    double num = 0.0, den = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
            if (!ra.mask[idx] || !rb.mask[idx])
                continue;
            const double d = rot.at(ix, iy) - rb.image.at(ix, iy);
            num += d * d;
            den += rb.image.at(ix, iy) * rb.image.at(ix, iy);
        }
    CHECK(std::sqrt(num / den) <= 0.01);
}

TEST_CASE("residual pipeline on zero data returns zeros")
{
    const ConvexDomain sup = ConvexDomain::superellipse({0, 0}, 1.0, 0.8, 4.0, 128);
    ResidualParams par;
    par.n_radii = 256;
    par.n_angles = 128;
    par.n_times = 256;
    par.grid = 20;
    par.f_grid = 32;
    par.threads = 2;
    par.kernel.da_factor = 5e-3;
    par.kernel.directions = 64;
    const ResidualReport rep = residual_vs_kernel(sup, Phantom(), par);
    CHECK(rep.rel_gap == 0.0);
    for (double v : rep.residual.values)
        CHECK(v == 0.0);
    for (double v : rep.kernel_field.values)
        CHECK(v == 0.0);
}

TEST_CASE("residual pipeline refuses closed-form domains")
{
    const ConvexDomain disc = ConvexDomain::disc({0, 0}, 1.0, 64);
    ResidualParams par;
    CHECK_THROWS_AS(residual_vs_kernel(disc, Phantom(), par), Error);
}

TEST_CASE("disc pushed through the numeric kernel pipeline stays near zero")
{
    const ConvexDomain pdisc = ConvexDomain::disc({0, 0}, 1.0, 128).as_parametric();
    REQUIRE(pdisc.kind() == DomainKind::ParametricConvex);
    const Phantom f({Bump{{0.2, 0.1}, 0.3, 1.0}});

    ResidualParams par;
    par.n_radii = 384;
    par.n_angles = 256;
    par.n_times = 512;
    par.grid = 24;
    par.f_grid = 48;
    par.threads = 2;
    par.kernel.da_factor = 5e-3;
    par.kernel.directions = 64;
    const ResidualReport rep = residual_vs_kernel(pdisc, f, par);

    const GridImage fr = rasterize_on(f, rep.residual);
    double rn = 0.0, kn = 0.0, fn = 0.0;
    for (std::size_t i = 0; i < rep.mask.size(); ++i) {
        if (!rep.mask[i])
            continue;
        rn += rep.residual.values[i] * rep.residual.values[i];
        kn += rep.kernel_field.values[i] * rep.kernel_field.values[i];
        fn += fr.values[i] * fr.values[i];
    }
    CHECK(std::sqrt(rn / fn) <= 0.05);
    CHECK(std::sqrt(kn / fn) <= 0.05);
}
