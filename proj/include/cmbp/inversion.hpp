#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmbp/forward.hpp"
#include "cmbp/geometry.hpp"
#include "cmbp/grid_image.hpp"
#include "cmbp/phantom.hpp"
#include "cmbp/radon_hilbert.hpp"

namespace cmbp {

enum class Formula { WaveA, WaveB, MeansA, MeansB };

/// Integral of g(t)/sqrt(t^2 - d^2) from d to the end of the trace, via the
/// substitution t = d*cosh(u) which makes the integrand bounded. Trace sample
/// j holds g((j+1)*dt); the quadrature node count follows the trace
/// resolution. Throws BadDistance unless 0 < d < t_end.
double singular_time_integral(std::span<const double> trace, double dt, double d);

/// Principal value of the integral of g(r)/(r^2 - d^2) over (0, r_end), by
/// partial fractions and singularity subtraction on the 1/(r-d) part.
/// Profile sample j holds g((j+1)*dr); g(0) is taken as zero. Throws
/// BadDistance unless 0 < d < r_end.
double pv_radius_integral(std::span<const double> profile, double dr, double d);

struct ReconstructionRequest {
    Formula formula = Formula::WaveB;
    int nx = 128, ny = 128;
    double margin_pixels = 2.0;  // reconstruction points keep this many pixels off the boundary
    int threads = 1;
};

struct Reconstruction {
    GridImage image;
    std::vector<std::uint8_t> mask;  // 1 where the image was reconstructed
    double margin = 0.0;
};

/// Back-projection of boundary data onto a cell-center lattice over the
/// domain bounding box. Masked cells (outside the margin) are left zero.
Reconstruction back_project(const ConvexDomain& dom, const BoundarySeries& data,
                            const ReconstructionRequest& req);

struct ResidualParams {
    int n_radii = 1024;
    int n_angles = 512;
    int n_times = 2048;
    double tmax_factor = 8.0;
    int grid = 64;     // reconstruction lattice
    int f_grid = 128;  // quadrature lattice for the kernel integral
    double margin_pixels = 2.0;
    int threads = 1;
    KernelOptions kernel;
};

struct ResidualReport {
    GridImage residual;      // f - BP(forward(f)) on the target lattice
    GridImage kernel_field;  // smoothing kernel applied to f, same lattice
    std::vector<std::uint8_t> mask;
    double rel_gap = 0.0;    // ||residual - kernel_field||_2 / ||f||_2 over the mask
};

/// Full-pipeline check of the reconstruction identity on a general convex
/// domain: the defect of the back-projection must match the smoothing kernel
/// field. Requires a parametric domain (discs/ellipses have zero kernel).
ResidualReport residual_vs_kernel(const ConvexDomain& dom, const Phantom& f,
                                  const ResidualParams& par);

}  // namespace cmbp
