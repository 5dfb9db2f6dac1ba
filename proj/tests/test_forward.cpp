#include <doctest.h>

#include <cmath>
#include <vector>

#include "cmbp/errors.hpp"
#include "cmbp/forward.hpp"
#include "cmbp/geometry.hpp"
#include "cmbp/phantom.hpp"

using namespace cmbp;

namespace {

const ConvexDomain& test_disc()
{
    static const ConvexDomain d = ConvexDomain::disc({0, 0}, 1.0, 128);
    return d;
}

Phantom one_bump() { return Phantom({Bump{{0.25, -0.1}, 0.25, 1.0}}); }

/// Test-side angular quadrature, independent loop.
double mean_oracle(const Phantom& f, Point2 x, double r, int n)
{
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * M_PI * k / n;
        sum += f.eval({x.x + r * std::cos(th), x.y + r * std::sin(th)});
    }
    return sum / n;
}

}  // namespace

TEST_CASE("circular means of the zero phantom vanish")
{
    const BoundarySeries m = circular_means(test_disc(), Phantom(), 64, 64);
    for (double v : m.values)
        CHECK(v == 0.0);
}

TEST_CASE("circular means vanish for circles missing the support")
{
    const Phantom f = one_bump();
    const BoundarySeries m = circular_means(test_disc(), f, 256, 256);
    // boundary center opposite the bump: circles shorter than the gap miss it
    const Point2 x = m.centers[static_cast<std::size_t>(m.n_centers() / 2)];
    const double gap = norm(x - Point2{0.25, -0.1}) - 0.25;
    for (int j = 0; j < m.n_samples; ++j) {
        const double r = m.step * (j + 1);
        if (r < gap - 1e-9)
            CHECK(m.at(m.n_centers() / 2, j) == 0.0);
    }
}

TEST_CASE("circular means match a refined angular quadrature")
{
    const Phantom f = one_bump();
    const BoundarySeries m = circular_means(test_disc(), f, 256, 512);
    const int i = 17;
    for (int j : {40, 100, 180}) {
        const double r = m.step * (j + 1);
        const double oracle = mean_oracle(f, m.centers[i], r, 2048);
        if (std::fabs(oracle) < 1e-12)
            continue;
        CHECK(m.at(i, j) == doctest::Approx(oracle).epsilon(1e-4));
    }
}

TEST_CASE("grid-sampled means track the exact evaluation")
{
    const Phantom f = one_bump();
    const GridImage img = rasterize(f, test_disc(), 256, 256);
    const BoundarySeries exact = circular_means(test_disc(), f, 128, 256);
    const BoundarySeries grid = circular_means_grid(test_disc(), img, 128, 256);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < exact.values.size(); ++k) {
        num += (grid.values[k] - exact.values[k]) * (grid.values[k] - exact.values[k]);
        den += exact.values[k] * exact.values[k];
    }
    CHECK(std::sqrt(num / den) <= 5e-3);  // bilinear sampling is second order
}

TEST_CASE("circular means reject data touching the boundary")
{
    const Phantom bad(std::vector<Bump>{Bump{{0.9, 0.0}, 0.25, 1.0}});
    CHECK_THROWS_AS(circular_means(test_disc(), bad, 64, 64), Error);
}

TEST_CASE("small-radius means converge quadratically to the point value")
{
    const Phantom f = one_bump();
    const Point2 probe{0.3, -0.05};
    const double f0 = f.eval(probe);
    std::vector<double> lr, le;
    for (double r = 1e-3; r <= 1.000001e-1; r *= std::pow(100.0, 1.0 / 6.0)) {
        const double err = std::fabs(circular_mean_at(f, probe, r, 512) - f0);
        if (err > 0.0) {
            lr.push_back(std::log(r));
            le.push_back(std::log(err));
        }
    }
    REQUIRE(lr.size() >= 5);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lr.size(); ++k) {
        sx += lr[k];
        sy += le[k];
        sxx += lr[k] * lr[k];
        sxy += lr[k] * le[k];
    }
    const double n = static_cast<double>(lr.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("wave trace from zero means is zero")
{
    BoundarySeries m = circular_means(test_disc(), Phantom(), 64, 64);
    const BoundarySeries w = wave_from_means(m, 64, 8.0);
    for (double v : w.values)
        CHECK(v == 0.0);
}

TEST_CASE("wave trace starts at the (vanishing) boundary value")
{
    const Phantom f = one_bump();
    const BoundarySeries m = circular_means(test_disc(), f, 512, 256);
    const BoundarySeries w = wave_from_means(m, 512, 8.0 * test_disc().diameter());
    double first = 0.0, all = 0.0;
    for (int i = 0; i < w.n_centers(); ++i) {
        first = std::max(first, std::fabs(w.at(i, 0)));
        for (int j = 0; j < w.n_samples; ++j)
            all = std::max(all, std::fabs(w.at(i, j)));
    }
    CHECK(first <= 1e-3 * 1.0);  // phantom peak amplitude is 1
    CHECK(all > 1e-3);
}

TEST_CASE("wave trace matches a high-resolution independent evaluation")
{
    const Phantom f = one_bump();
    const int i = 40;
    const double t_max = 8.0 * test_disc().diameter();
    const BoundarySeries m = circular_means(test_disc(), f, 512, 512);
    const BoundarySeries w = wave_from_means(m, 512, t_max);

    // oracle: means at 8x radial resolution, separate derivative and a plain
    // trapezoid in the substituted variable with many nodes
    const BoundarySeries m8 = circular_means(test_disc(), f, 4096, 512);
    const Point2 x = m8.centers[i];
    auto dmeans = [&](double r) {
        const double h = m8.step;
        if (r < 2.0 * h || r > m8.limit - 2.0 * h) {
            const double rp = std::min(std::max(r + h, 2.0 * h), m8.limit);
            const double rm = std::min(std::max(r - h, 0.0), m8.limit);
            auto val = [&](double rr) {
                if (rr <= 0.0)
                    return f.eval(x);
                return mean_oracle(f, x, rr, 512);
            };
            return (val(rp) - val(rm)) / (rp - rm);
        }
        const int j = static_cast<int>(r / h);  // sample j holds r = (j+1)h... below
        const double rj = h * j;
        const double u = (r - rj) / h;
        auto sample = [&](int jj) { return jj <= 0 ? 0.0 : m8.at(i, jj - 1); };
        const double d0 = (sample(j + 1) - sample(j - 1)) / (2.0 * h);
        const double d1 = (sample(j + 2) - sample(j)) / (2.0 * h);
        return d0 * (1.0 - u) + d1 * u;
    };

    for (int j : {100, 220, 380}) {
        const double t = w.step * (j + 1);
        const int nn = 20000;
        double sum = 0.0;
        for (int k = 0; k <= nn; ++k) {
            const double wt = (k == 0 || k == nn) ? 0.5 : 1.0;
            const double psi = (M_PI_2 * k) / nn;
            const double r = t * std::sin(psi);
            sum += wt * (r <= m8.limit ? dmeans(r) : 0.0);
        }
        const double oracle = t * sum * (M_PI_2 / nn);
        if (std::fabs(oracle) < 1e-10)
            continue;
        CHECK(w.at(i, j) == doctest::Approx(oracle).epsilon(1e-3));
    }
}

TEST_CASE("time derivative of the companion trace reproduces the wave trace")
{
    // the acceptance suite pins 1e-3 at the default grids; here a coarser
    // table plus a 4x-order convergence check keeps the runtime small
    const Phantom f({Bump{{0.25, -0.1}, 0.3, 1.0}});
    const double t_max = 8.0 * test_disc().diameter();
    const BoundarySeries m = circular_means(test_disc(), f, 512, 256);

    auto identity_err = [&](int nt) {
        const BoundarySeries w = wave_from_means(m, nt, t_max);
        const BoundarySeries v = v_from_means(m, nt, t_max);
        double num = 0.0, den = 0.0;
        const double dt = v.step;
        for (int i = 0; i < v.n_centers(); ++i) {
            for (int j = 2; j < v.n_samples - 2; ++j) {
                const double dv = (v.at(i, j - 2) - 8.0 * v.at(i, j - 1) +
                                   8.0 * v.at(i, j + 1) - v.at(i, j + 2)) /
                                  (12.0 * dt);
                const double diff = dv - w.at(i, j);
                num += diff * diff;
                den += w.at(i, j) * w.at(i, j);
            }
        }
        return std::sqrt(num / den);
    };

    const double coarse = identity_err(512);
    const double fine = identity_err(1024);
    CHECK(coarse <= 2e-2);
    CHECK(fine <= coarse / 6.0);  // the defect is dominated by the dt^4 stencil
}

TEST_CASE("companion trace matches its refined evaluation")
{
    const Phantom f = one_bump();
    const int i = 25;
    const double t_max = 4.0;
    const BoundarySeries m = circular_means(test_disc(), f, 512, 512);
    const BoundarySeries v = v_from_means(m, 256, t_max);

    const BoundarySeries m8 = circular_means(test_disc(), f, 4096, 512);
    for (int j : {60, 140}) {
        const double t = v.step * (j + 1);
        const int nn = 20000;
        double sum = 0.0;
        for (int k = 0; k <= nn; ++k) {
            const double wt = (k == 0 || k == nn) ? 0.5 : 1.0;
            const double psi = (M_PI_2 * k) / nn;
            const double r = t * std::sin(psi);
            double mv = 0.0;
            if (r > m8.step && r < m8.limit) {
                const double u = r / m8.step - 1.0;
                const int jj = static_cast<int>(u);
                mv = m8.at(i, jj) * (1.0 - (u - jj)) + m8.at(i, jj + 1) * (u - jj);
            }
            sum += wt * std::sin(psi) * mv;
        }
        const double oracle = t * sum * (M_PI_2 / nn);
        if (std::fabs(oracle) < 1e-10)
            continue;
        CHECK(v.at(i, j) == doctest::Approx(oracle).epsilon(1e-3));
    }
}

TEST_CASE("dt_over_t on synthetic traces")
{
    BoundarySeries w;
    w.kind = SeriesKind::Wave;
    w.centers = {{1, 0}, {0, 1}};
    w.n_samples = 64;
    w.limit = 2.0;
    w.step = w.limit / w.n_samples;
    w.values.assign(2 * 64, 0.0);

    SUBCASE("zero") {
        const BoundarySeries d = dt_over_t(w);
        for (double v : d.values)
            CHECK(v == 0.0);
    }
    SUBCASE("linear trace maps to zero") {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 64; ++j)
                w.at(i, j) = w.step * (j + 1);
        const BoundarySeries d = dt_over_t(w);
        for (double v : d.values)
            CHECK(std::fabs(v) <= 1e-10);
    }
    SUBCASE("quadratic trace maps to one") {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 64; ++j) {
                const double t = w.step * (j + 1);
                w.at(i, j) = t * t;
            }
        const BoundarySeries d = dt_over_t(w);
        for (double v : d.values)
            CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("forward maps are linear in the data")
{
    const Phantom f = one_bump();
    const Phantom g({Bump{{-0.3, 0.2}, 0.2, 0.7}});
    Phantom both({f.bumps()[0], g.bumps()[0]});

    const BoundarySeries mf = circular_means(test_disc(), f, 128, 128);
    const BoundarySeries mg = circular_means(test_disc(), g, 128, 128);
    const BoundarySeries mb = circular_means(test_disc(), both, 128, 128);
    for (std::size_t k = 0; k < mb.values.size(); ++k)
        CHECK(mb.values[k] ==
              doctest::Approx(mf.values[k] + mg.values[k]).epsilon(1e-12).scale(1.0));

    BoundarySeries scaled = mf;
    for (double& v : scaled.values)
        v *= 3.0;
    const BoundarySeries wf = wave_from_means(mf, 128, 8.0);
    const BoundarySeries ws = wave_from_means(scaled, 128, 8.0);
    for (std::size_t k = 0; k < wf.values.size(); ++k)
        CHECK(ws.values[k] == doctest::Approx(3.0 * wf.values[k]).epsilon(1e-12).scale(1e-12));
}

TEST_CASE("wave trace decays by the default recording horizon")
{
    const Phantom f = one_bump();
    const BoundarySeries m = circular_means(test_disc(), f, 512, 256);
    const BoundarySeries w = wave_from_means(m, 1024, 8.0 * test_disc().diameter());
    double last = 0.0, all = 0.0;
    for (int i = 0; i < w.n_centers(); ++i) {
        last = std::max(last, std::fabs(w.at(i, w.n_samples - 1)));
        for (int j = 0; j < w.n_samples; ++j)
            all = std::max(all, std::fabs(w.at(i, j)));
    }
    CHECK(last <= 1e-3 * all);
}
