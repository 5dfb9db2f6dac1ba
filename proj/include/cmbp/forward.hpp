#pragma once

#include <span>
#include <vector>

#include "cmbp/geometry.hpp"
#include "cmbp/grid_image.hpp"
#include "cmbp/phantom.hpp"

namespace cmbp {

enum class SeriesKind { Means, Wave };

/// Samples of a boundary-indexed radial/temporal table: row i holds the
/// values at center i for sample abscissas (j+1)*step, j = 0..n_samples-1.
/// Used both for circular means (step = dr, limit = r_max) and wave traces
/// (step = dt, limit = t_max).
struct BoundarySeries {
    SeriesKind kind = SeriesKind::Means;
    std::vector<Point2> centers;
    double step = 0.0;
    double limit = 0.0;
    int n_samples = 0;
    std::vector<double> values;  // row-major, centers x samples

    double at(int i, int j) const
    {
        return values[static_cast<std::size_t>(i) * n_samples + j];
    }
    double& at(int i, int j)
    {
        return values[static_cast<std::size_t>(i) * n_samples + j];
    }
    std::span<const double> row(int i) const
    {
        return {values.data() + static_cast<std::size_t>(i) * n_samples,
                static_cast<std::size_t>(n_samples)};
    }
    int n_centers() const { return static_cast<int>(centers.size()); }
};

/// Angular average of the phantom over circles of radii (j+1)*dr centered at
/// the boundary nodes, dr = diameter/n_radii. Composite trapezoid with
/// n_angles nodes, exact pointwise phantom evaluation.
BoundarySeries circular_means(const ConvexDomain& dom, const Phantom& f, int n_radii,
                              int n_angles, int threads = 1);

/// Same transform with the initial data given on a grid (bilinear sampling).
BoundarySeries circular_means_grid(const ConvexDomain& dom, const GridImage& f, int n_radii,
                                   int n_angles, int threads = 1);

/// Single circular mean, used as an independent probe in tests.
double circular_mean_at(const Phantom& f, Point2 x, double r, int n_angles);

/// Wave trace on the boundary from the means table: the radial Abel-type
/// integral with substitution r = t sin(psi), which removes the endpoint
/// singularity. Sample j is the value at t = (j+1)*dt, dt = t_max/n_times.
BoundarySeries wave_from_means(const BoundarySeries& means, int n_times, double t_max,
                               int threads = 1);

/// Companion trace with the roles of value and radial derivative exchanged:
/// the solution with zero initial value and initial velocity f. Its time
/// derivative reproduces wave_from_means.
BoundarySeries v_from_means(const BoundarySeries& means, int n_times, double t_max,
                            int threads = 1);

/// Pointwise division by t followed by 4th-order time differences
/// (one-sided at the grid ends).
BoundarySeries dt_over_t(const BoundarySeries& wave);

}  // namespace cmbp
