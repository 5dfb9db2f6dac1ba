#include "cmbp/phantom.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "cmbp/errors.hpp"

namespace cmbp {

Phantom::Phantom(std::vector<Bump> bumps) : bumps_(std::move(bumps))
{
    for (const auto& b : bumps_) {
        if (!std::isfinite(b.center.x) || !std::isfinite(b.center.y) || !std::isfinite(b.rho) ||
            !std::isfinite(b.amp) || b.rho <= 0.0)
            fail(ErrorCode::InvalidArgument, "phantom bump: rho must be positive and finite");
    }
}

double Phantom::eval(Point2 x) const
{
    double f = 0.0;
    for (const auto& b : bumps_) {
        const double s2 = norm2(x - b.center) / (b.rho * b.rho);
        if (s2 < 1.0)
            f += b.amp * std::exp(1.0 - 1.0 / (1.0 - s2));
    }
    return f;
}

Phantom random_phantom(const ConvexDomain& dom, int nbumps, std::uint64_t seed, double margin)
{
    if (nbumps < 0)
        fail(ErrorCode::InvalidArgument, "random_phantom: negative bump count");

    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        // fixed mapping, independent of the standard library's distributions
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    };

    const auto [lo, hi] = dom.bounding_box();
    const double scale = dom.diameter();
    std::vector<Bump> bumps;
    bumps.reserve(static_cast<std::size_t>(nbumps));
    for (int k = 0; k < nbumps; ++k) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            const double rho = scale * uniform(0.06, 0.12);
            const Point2 c{uniform(lo.x, hi.x), uniform(lo.y, hi.y)};
            if (dom.signed_distance(c) < -(rho + margin)) {
                bumps.push_back(Bump{c, rho, uniform(0.4, 1.0)});
                break;
            }
        }
    }
    if (static_cast<int>(bumps.size()) != nbumps)
        fail(ErrorCode::SupportViolation, "random_phantom: could not place bumps inside the domain");
    return Phantom(std::move(bumps));
}

GridImage rasterize(const Phantom& ph, const ConvexDomain& dom, int nx, int ny,
                    double margin_pixels)
{
    GridImage img = make_lattice(dom, nx, ny);
    const double margin = margin_pixels * std::max(img.dx, img.dy);
    for (const auto& b : ph.bumps()) {
        if (!(dom.signed_distance(b.center) < -(b.rho + margin)))
            fail(ErrorCode::SupportViolation,
                 "rasterize: bump support closer than the required margin to the boundary");
    }
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            img.at(ix, iy) = ph.eval(img.cell_center(ix, iy));
    return img;
}

GridImage rasterize_on(const Phantom& ph, const GridImage& like)
{
    GridImage img = GridImage::zeros(like.nx, like.ny, like.origin, like.dx, like.dy);
    for (int iy = 0; iy < img.ny; ++iy)
        for (int ix = 0; ix < img.nx; ++ix)
            img.at(ix, iy) = ph.eval(img.cell_center(ix, iy));
    return img;
}

ErrorMetrics error_metrics(const GridImage& recon, const GridImage& reference,
                           const std::vector<std::uint8_t>& mask)
{
    if (!recon.same_lattice(reference))
        fail(ErrorCode::LatticeMismatch, "error_metrics: images live on different lattices");
    if (mask.size() != recon.values.size())
        fail(ErrorCode::LatticeMismatch, "error_metrics: mask size does not match the lattice");

    double num2 = 0.0, den2 = 0.0, numi = 0.0, deni = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i])
            continue;
        const double d = recon.values[i] - reference.values[i];
        num2 += d * d;
        den2 += reference.values[i] * reference.values[i];
        numi = std::max(numi, std::fabs(d));
        deni = std::max(deni, std::fabs(reference.values[i]));
    }
    auto ratio = [](double num, double den) {
        if (den == 0.0)
            return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return num / den;
    };
    return ErrorMetrics{ratio(std::sqrt(num2), std::sqrt(den2)), ratio(numi, deni)};
}

std::vector<std::uint8_t> margin_mask(const ConvexDomain& dom, const GridImage& like,
                                      double margin)
{
    std::vector<std::uint8_t> mask(like.values.size(), 0);
    for (int iy = 0; iy < like.ny; ++iy)
        for (int ix = 0; ix < like.nx; ++ix)
            mask[static_cast<std::size_t>(iy) * like.nx + ix] =
                dom.signed_distance(like.cell_center(ix, iy)) < -margin ? 1 : 0;
    return mask;
}

}  // namespace cmbp
