#include "cmbp/forward.hpp"

#include <algorithm>
#include <cmath>

#include "cmbp/errors.hpp"
#include "cmbp/numerics.hpp"
#include "cmbp/parallel.hpp"

namespace cmbp {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916;

/// Radial step of the psi-quadrature relative to the means grid step. The
/// mollifier onset is the shortest feature in the data; one node per table
/// step keeps the trapezoid error there below the acceptance tolerances.
constexpr double kPsiStepFactor = 1.0;

/// One node count for every t: the trace must be smooth in t, so the
/// quadrature resolution may not jump between adjacent samples.
int psi_node_count(double r_max, double dr)
{
    const int n = static_cast<int>(std::ceil(kHalfPi * r_max / (kPsiStepFactor * dr)));
    return std::clamp(n, 48, 50000);
}

BoundarySeries make_series(SeriesKind kind, std::vector<Point2> centers, int n_samples,
                           double limit)
{
    if (n_samples < 8)
        fail(ErrorCode::InvalidArgument, "boundary series needs at least 8 samples");
    if (!(limit > 0.0) || !std::isfinite(limit))
        fail(ErrorCode::InvalidArgument, "boundary series limit must be positive");
    BoundarySeries s;
    s.kind = kind;
    s.centers = std::move(centers);
    s.n_samples = n_samples;
    s.limit = limit;
    s.step = limit / n_samples;
    s.values.assign(s.centers.size() * static_cast<std::size_t>(n_samples), 0.0);
    return s;
}

std::vector<Point2> boundary_centers(const ConvexDomain& dom)
{
    std::vector<Point2> c;
    c.reserve(dom.boundary().size());
    for (const auto& bn : dom.boundary())
        c.push_back(bn.point);
    return c;
}

/// Means row extended with the r = 0 node (zero for data centered on the
/// boundary, since the initial data vanishes there).
std::vector<double> extended_row(const BoundarySeries& m, int i)
{
    std::vector<double> row(static_cast<std::size_t>(m.n_samples) + 1);
    row[0] = 0.0;
    for (int j = 0; j < m.n_samples; ++j)
        row[static_cast<std::size_t>(j) + 1] = m.at(i, j);
    return row;
}

}  // namespace

double circular_mean_at(const Phantom& f, Point2 x, double r, int n_angles)
{
    if (!(r > 0.0))
        fail(ErrorCode::InvalidArgument, "circular_mean_at: radius must be positive");
    double sum = 0.0;
    const double dth = 2.0 * M_PI / n_angles;
    for (int k = 0; k < n_angles; ++k) {
        const double th = dth * k;
        sum += f.eval({x.x + r * std::cos(th), x.y + r * std::sin(th)});
    }
    return sum / n_angles;
}

BoundarySeries circular_means(const ConvexDomain& dom, const Phantom& f, int n_radii,
                              int n_angles, int threads)
{
    if (n_angles < 8)
        fail(ErrorCode::InvalidArgument, "circular_means: need at least 8 angular nodes");
    for (const auto& b : f.bumps()) {
        if (!(dom.signed_distance(b.center) < -b.rho))
            fail(ErrorCode::SupportViolation,
                 "circular_means: initial data support reaches the boundary");
    }

    BoundarySeries out = make_series(SeriesKind::Means, boundary_centers(dom), n_radii,
                                     dom.diameter());
    const double dth = 2.0 * M_PI / n_angles;
    parallel_for(out.centers.size(), threads, [&](std::size_t i) {
        const Point2 x = out.centers[i];
        // per-bump distance bands: the circle of radius r meets bump b only
        // when |r - |x - c_b|| < rho_b
        std::vector<std::pair<double, double>> bands;
        bands.reserve(f.bumps().size());
        for (const auto& b : f.bumps()) {
            const double d = norm(x - b.center);
            bands.emplace_back(d - b.rho, d + b.rho);
        }
        for (int j = 0; j < out.n_samples; ++j) {
            const double r = out.step * (j + 1);
            bool active = false;
            for (const auto& band : bands)
                active = active || (r > band.first && r < band.second);
            if (!active)
                continue;
            double sum = 0.0;
            for (int k = 0; k < n_angles; ++k) {
                const double th = dth * k;
                sum += f.eval({x.x + r * std::cos(th), x.y + r * std::sin(th)});
            }
            out.at(static_cast<int>(i), j) = sum / n_angles;
        }
    });
    return out;
}

BoundarySeries circular_means_grid(const ConvexDomain& dom, const GridImage& f, int n_radii,
                                   int n_angles, int threads)
{
    if (n_angles < 8)
        fail(ErrorCode::InvalidArgument, "circular_means: need at least 8 angular nodes");
    const double pixel = std::max(f.dx, f.dy);
    for (int iy = 0; iy < f.ny; ++iy)
        for (int ix = 0; ix < f.nx; ++ix)
            if (f.at(ix, iy) != 0.0 &&
                !(dom.signed_distance(f.cell_center(ix, iy)) < -2.0 * pixel))
                fail(ErrorCode::SupportViolation,
                     "circular_means: gridded data is nonzero within two pixels of the boundary");

    BoundarySeries out = make_series(SeriesKind::Means, boundary_centers(dom), n_radii,
                                     dom.diameter());
    const double dth = 2.0 * M_PI / n_angles;
    parallel_for(out.centers.size(), threads, [&](std::size_t i) {
        const Point2 x = out.centers[i];
        for (int j = 0; j < out.n_samples; ++j) {
            const double r = out.step * (j + 1);
            double sum = 0.0;
            for (int k = 0; k < n_angles; ++k) {
                const double th = dth * k;
                sum += f.bilinear({x.x + r * std::cos(th), x.y + r * std::sin(th)});
            }
            out.at(static_cast<int>(i), j) = sum / n_angles;
        }
    });
    return out;
}

BoundarySeries wave_from_means(const BoundarySeries& means, int n_times, double t_max,
                               int threads)
{
    if (means.kind != SeriesKind::Means)
        fail(ErrorCode::InvalidArgument, "wave_from_means: input must be a means table");
    BoundarySeries out = make_series(SeriesKind::Wave, means.centers, n_times, t_max);
    const double dr = means.step;
    const double r_max = means.limit;

    parallel_for(means.centers.size(), threads, [&](std::size_t i) {
        const std::vector<double> row = extended_row(means, static_cast<int>(i));
        const std::vector<double> drow = deriv1_table({row.data(), row.size()}, dr);
        const std::span<const double> dspan{drow.data(), drow.size()};
        const int n = psi_node_count(r_max, dr);
        for (int j = 0; j < n_times; ++j) {
            const double t = out.step * (j + 1);
            const double psi_hi = std::asin(std::min(1.0, r_max / t));
            const double dpsi = psi_hi / n;
            double sum = 0.0;
            for (int k = 0; k <= n; ++k) {
                const double w = (k == 0 || k == n) ? 0.5 : 1.0;
                const double r = t * std::sin(dpsi * k);
                sum += w * cubic_interp(dspan, 0.0, dr, std::min(r, r_max));
            }
            out.at(static_cast<int>(i), j) = t * sum * dpsi;
        }
    });
    return out;
}

BoundarySeries v_from_means(const BoundarySeries& means, int n_times, double t_max, int threads)
{
    if (means.kind != SeriesKind::Means)
        fail(ErrorCode::InvalidArgument, "v_from_means: input must be a means table");
    BoundarySeries out = make_series(SeriesKind::Wave, means.centers, n_times, t_max);
    const double dr = means.step;
    const double r_max = means.limit;

    parallel_for(means.centers.size(), threads, [&](std::size_t i) {
        const std::vector<double> row = extended_row(means, static_cast<int>(i));
        const std::span<const double> rspan{row.data(), row.size()};
        const int n = psi_node_count(r_max, dr);
        for (int j = 0; j < n_times; ++j) {
            const double t = out.step * (j + 1);
            const double psi_hi = std::asin(std::min(1.0, r_max / t));
            const double dpsi = psi_hi / n;
            double sum = 0.0;
            for (int k = 0; k <= n; ++k) {
                const double w = (k == 0 || k == n) ? 0.5 : 1.0;
                const double sn = std::sin(dpsi * k);
                const double r = t * sn;
                sum += w * sn * cubic_interp(rspan, 0.0, dr, std::min(r, r_max));
            }
            out.at(static_cast<int>(i), j) = t * sum * dpsi;
        }
    });
    return out;
}

BoundarySeries dt_over_t(const BoundarySeries& wave)
{
    if (wave.kind != SeriesKind::Wave)
        fail(ErrorCode::InvalidArgument, "dt_over_t: input must be a wave table");
    BoundarySeries out = wave;
    std::vector<double> scaled(static_cast<std::size_t>(wave.n_samples));
    for (int i = 0; i < wave.n_centers(); ++i) {
        for (int j = 0; j < wave.n_samples; ++j)
            scaled[static_cast<std::size_t>(j)] = wave.at(i, j) / (wave.step * (j + 1));
        const std::vector<double> d = deriv1_table({scaled.data(), scaled.size()}, wave.step);
        for (int j = 0; j < wave.n_samples; ++j)
            out.at(i, j) = d[static_cast<std::size_t>(j)];
    }
    return out;
}

}  // namespace cmbp
