#include "cmbp/inversion.hpp"

#include <algorithm>
#include <cmath>

#include "cmbp/errors.hpp"
#include "cmbp/numerics.hpp"
#include "cmbp/parallel.hpp"

namespace cmbp {

namespace {

/// Quadrature nodes per trace sample inside the integration interval.
constexpr double kCoshNodeFactor = 1.0;

/// Boundary sum of one divergence-form component: sum_k w_k nu_k[axis] * inner(d).
template <typename Inner>
double axis_field(const ConvexDomain& dom, Point2 x0, int axis, const Inner& inner)
{
    double acc = 0.0;
    const auto& nodes = dom.boundary();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double d = norm(nodes[k].point - x0);
        const double nu = axis == 0 ? nodes[k].normal.x : nodes[k].normal.y;
        acc += nodes[k].arc_weight * nu * inner(static_cast<int>(k), d);
    }
    return acc;
}

}  // namespace

double singular_time_integral(std::span<const double> trace, double dt, double d)
{
    const int n = static_cast<int>(trace.size());
    const double t_end = dt * n;
    if (!(d > 0.0) || !(d < t_end) || !std::isfinite(d))
        fail(ErrorCode::BadDistance, "singular_time_integral: need 0 < d < t_end");

    const double ratio = t_end / d;
    const double u_max = std::log(ratio + std::sqrt(ratio * ratio - 1.0));
    const int n_u = std::clamp(static_cast<int>(std::ceil(kCoshNodeFactor * (t_end - d) / dt)),
                               64, 2000000);
    const double du = u_max / n_u;

    double sum = 0.0;
    for (int k = 0; k <= n_u; ++k) {
        const double w = (k == 0 || k == n_u) ? 0.5 : 1.0;
        const double t = std::min(d * std::cosh(du * k), t_end);
        sum += w * cubic_interp(trace, dt, dt, t);
    }
    return sum * du;
}

double pv_radius_integral(std::span<const double> profile, double dr, double d)
{
    const int n = static_cast<int>(profile.size());
    const double r_end = dr * n;
    if (!(d > 0.0) || !(d < r_end) || !std::isfinite(d))
        fail(ErrorCode::BadDistance, "pv_radius_integral: need 0 < d < r_end");

    const double gd = cubic_interp(profile, dr, dr, d);

    // the trapezoid runs over r_j = j*dr, j = 0..n, with the implied g(0) = 0
    double part_minus = 0.0;  // PV integral of g/(r-d), singularity subtracted
    double part_plus = 0.0;   // integral of g/(r+d), regular
    for (int j = 0; j <= n; ++j) {
        const double r = dr * j;
        const double g = j == 0 ? 0.0 : profile[static_cast<std::size_t>(j) - 1];
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        const double diff = r - d;
        if (std::fabs(diff) < 0.5 * dr) {
            // local slope stands in for the removable singularity
            const double gm = j >= 2 ? profile[static_cast<std::size_t>(j) - 2] : 0.0;
            const double gp = j < n ? profile[static_cast<std::size_t>(j)] : g;
            const double denom = (j > 0 && j < n) ? 2.0 * dr : dr;
            part_minus += w * (gp - gm) / denom;
        } else {
            part_minus += w * (g - gd) / diff;
        }
        part_plus += w * g / (r + d);
    }
    part_minus *= dr;
    part_plus *= dr;
    part_minus += gd * std::log((r_end - d) / d);
    return (part_minus - part_plus) / (2.0 * d);
}

Reconstruction back_project(const ConvexDomain& dom, const BoundarySeries& data,
                            const ReconstructionRequest& req)
{
    const bool wants_wave = req.formula == Formula::WaveA || req.formula == Formula::WaveB;
    if (wants_wave && data.kind != SeriesKind::Wave)
        fail(ErrorCode::InvalidArgument, "back_project: wave formula needs a wave table");
    if (!wants_wave && data.kind != SeriesKind::Means)
        fail(ErrorCode::InvalidArgument, "back_project: means formula needs a means table");
    if (data.n_centers() != static_cast<int>(dom.boundary().size()))
        fail(ErrorCode::InvalidArgument,
             "back_project: data centers do not match the domain boundary nodes");

    Reconstruction rec;
    rec.image = make_lattice(dom, req.nx, req.ny);
    rec.margin = req.margin_pixels * std::max(rec.image.dx, rec.image.dy);
    rec.mask = margin_mask(dom, rec.image, rec.margin);

    const double inv_pi = 1.0 / M_PI;
    const double step = data.step;
    const auto& nodes = dom.boundary();

    // per-center inner profiles, precomputed once
    BoundarySeries prepared;
    switch (req.formula) {
        case Formula::WaveA:
            prepared = data;
            break;
        case Formula::WaveB:
            prepared = dt_over_t(data);
            break;
        case Formula::MeansA: {
            prepared = data;
            for (int i = 0; i < data.n_centers(); ++i)
                for (int j = 0; j < data.n_samples; ++j)
                    prepared.at(i, j) = data.at(i, j) * (step * (j + 1));
            break;
        }
        case Formula::MeansB: {
            prepared = data;
            for (int i = 0; i < data.n_centers(); ++i) {
                std::vector<double> row(static_cast<std::size_t>(data.n_samples) + 1);
                row[0] = 0.0;
                for (int j = 0; j < data.n_samples; ++j)
                    row[static_cast<std::size_t>(j) + 1] = data.at(i, j);
                const std::vector<double> d = deriv1_table({row.data(), row.size()}, step);
                for (int j = 0; j < data.n_samples; ++j)
                    prepared.at(i, j) = d[static_cast<std::size_t>(j) + 1];
            }
            break;
        }
    }

    auto inner = [&](int k, double d) {
        if (data.kind == SeriesKind::Wave)
            return singular_time_integral(prepared.row(k), step, d);
        return pv_radius_integral(prepared.row(k), step, d);
    };

    const bool dot_form = req.formula == Formula::WaveB || req.formula == Formula::MeansB;

    parallel_for(static_cast<std::size_t>(req.ny), req.threads, [&](std::size_t iy) {
        for (int ix = 0; ix < req.nx; ++ix) {
            const std::size_t idx = iy * static_cast<std::size_t>(req.nx) + ix;
            if (!rec.mask[idx])
                continue;
            const Point2 x0 = rec.image.cell_center(ix, static_cast<int>(iy));
            double value;
            if (dot_form) {
                double acc = 0.0;
                for (std::size_t k = 0; k < nodes.size(); ++k) {
                    const Point2 rel = x0 - nodes[k].point;
                    const double d = norm(rel);
                    acc += nodes[k].arc_weight * dot(nodes[k].normal, rel) *
                           inner(static_cast<int>(k), d);
                }
                value = acc * inv_pi;
            } else {
                // divergence of the node-weighted field by central differences,
                // one half-pixel per axis
                const double hx = 0.5 * rec.image.dx;
                const double hy = 0.5 * rec.image.dy;
                const double fxp = axis_field(dom, {x0.x + hx, x0.y}, 0, inner);
                const double fxm = axis_field(dom, {x0.x - hx, x0.y}, 0, inner);
                const double fyp = axis_field(dom, {x0.x, x0.y + hy}, 1, inner);
                const double fym = axis_field(dom, {x0.x, x0.y - hy}, 1, inner);
                value = inv_pi * ((fxp - fxm) / (2.0 * hx) + (fyp - fym) / (2.0 * hy));
            }
            rec.image.values[idx] = value;
        }
    });
    return rec;
}

ResidualReport residual_vs_kernel(const ConvexDomain& dom, const Phantom& f,
                                  const ResidualParams& par)
{
    if (dom.kind() != DomainKind::ParametricConvex)
        fail(ErrorCode::InvalidArgument,
             "residual_vs_kernel: requires a parametric domain (the kernel vanishes on "
             "discs and ellipses by closed form)");

    const BoundarySeries means =
        circular_means(dom, f, par.n_radii, par.n_angles, par.threads);
    const BoundarySeries wave =
        wave_from_means(means, par.n_times, par.tmax_factor * dom.diameter(), par.threads);

    ReconstructionRequest req;
    req.formula = Formula::WaveB;
    req.nx = req.ny = par.grid;
    req.margin_pixels = par.margin_pixels;
    req.threads = par.threads;
    Reconstruction rec = back_project(dom, wave, req);

    ResidualReport rep;
    rep.mask = rec.mask;
    rep.residual = rasterize_on(f, rec.image);
    for (std::size_t i = 0; i < rep.residual.values.size(); ++i)
        rep.residual.values[i] = rec.mask[i] ? rep.residual.values[i] - rec.image.values[i] : 0.0;

    const GridImage f_quad = rasterize(f, dom, par.f_grid, par.f_grid);
    SmoothingKernel kernel(dom, par.kernel);
    rep.kernel_field = kernel.field(f_quad, rec.image, rec.mask, par.threads);

    double num = 0.0, den = 0.0;
    const GridImage f_ref = rasterize_on(f, rec.image);
    for (std::size_t i = 0; i < rep.residual.values.size(); ++i) {
        if (!rec.mask[i])
            continue;
        const double diff = rep.residual.values[i] - rep.kernel_field.values[i];
        num += diff * diff;
        den += f_ref.values[i] * f_ref.values[i];
    }
    rep.rel_gap = den > 0.0 ? std::sqrt(num / den) : 0.0;
    return rep;
}

}  // namespace cmbp
