#include "cmbp/grid_image.hpp"

#include <cmath>

#include "cmbp/errors.hpp"

namespace cmbp {

GridImage GridImage::zeros(int nx, int ny, Point2 origin, double dx, double dy)
{
    if (nx < 2 || ny < 2)
        fail(ErrorCode::InvalidArgument, "GridImage: nx and ny must be at least 2");
    if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
        fail(ErrorCode::InvalidArgument, "GridImage: spacings must be positive");
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y))
        fail(ErrorCode::InvalidArgument, "GridImage: non-finite origin");
    GridImage g;
    g.nx = nx;
    g.ny = ny;
    g.origin = origin;
    g.dx = dx;
    g.dy = dy;
    g.values.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0.0);
    return g;
}

bool GridImage::same_lattice(const GridImage& o) const
{
    return nx == o.nx && ny == o.ny && origin.x == o.origin.x && origin.y == o.origin.y &&
           dx == o.dx && dy == o.dy;
}

double GridImage::bilinear(Point2 p) const
{
    const double u = (p.x - origin.x) / dx;
    const double v = (p.y - origin.y) / dy;
    if (u < 0.0 || v < 0.0 || u > nx - 1 || v > ny - 1)
        return 0.0;
    int i = static_cast<int>(u);
    int j = static_cast<int>(v);
    if (i >= nx - 1)
        i = nx - 2;
    if (j >= ny - 1)
        j = ny - 2;
    const double fu = u - i;
    const double fv = v - j;
    return (1.0 - fu) * (1.0 - fv) * at(i, j) + fu * (1.0 - fv) * at(i + 1, j) +
           (1.0 - fu) * fv * at(i, j + 1) + fu * fv * at(i + 1, j + 1);
}

double GridImage::max_abs() const
{
    double m = 0.0;
    for (double v : values)
        m = std::max(m, std::fabs(v));
    return m;
}

double GridImage::l2_norm() const
{
    double s = 0.0;
    for (double v : values)
        s += v * v;
    return std::sqrt(s * cell_area());
}

GridImage make_lattice(const ConvexDomain& dom, int nx, int ny)
{
    const auto [lo, hi] = dom.bounding_box();
    const double dx = (hi.x - lo.x) / nx;
    const double dy = (hi.y - lo.y) / ny;
    return GridImage::zeros(nx, ny, Point2{lo.x + 0.5 * dx, lo.y + 0.5 * dy}, dx, dy);
}

}  // namespace cmbp
