#pragma once

#include <cstddef>
#include <vector>

#include "cmbp/geometry.hpp"

namespace cmbp {

/// Uniform scalar field sampled at cell centers. origin is the center of
/// cell (0,0); values are row-major with x fastest.
struct GridImage {
    int nx = 0, ny = 0;
    Point2 origin;
    double dx = 0.0, dy = 0.0;
    std::vector<double> values;

    static GridImage zeros(int nx, int ny, Point2 origin, double dx, double dy);

    double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * nx + ix]; }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
    Point2 cell_center(int ix, int iy) const
    {
        return {origin.x + ix * dx, origin.y + iy * dy};
    }
    double cell_area() const { return dx * dy; }
    bool same_lattice(const GridImage& o) const;

    /// Bilinear interpolation between cell centers; zero outside the lattice.
    double bilinear(Point2 p) const;

    double max_abs() const;
    double l2_norm() const;  // sqrt(sum v^2 * cell_area)
};

/// Lattice of nx-by-ny cells tiling the domain bounding box.
GridImage make_lattice(const ConvexDomain& dom, int nx, int ny);

}  // namespace cmbp
