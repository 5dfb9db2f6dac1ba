#pragma once

#include <cstdint>
#include <vector>

#include "cmbp/geometry.hpp"
#include "cmbp/grid_image.hpp"

namespace cmbp {

/// One mollifier bump: amp * exp(1 - 1/(1 - s^2)) with s = |x - center|/rho,
/// identically zero for s >= 1. Compactly supported and infinitely smooth.
struct Bump {
    Point2 center;
    double rho = 0.0;
    double amp = 0.0;
};

class Phantom {
public:
    Phantom() = default;
    explicit Phantom(std::vector<Bump> bumps);

    const std::vector<Bump>& bumps() const { return bumps_; }
    bool empty() const { return bumps_.empty(); }
    double eval(Point2 x) const;

private:
    std::vector<Bump> bumps_;
};

/// Deterministic random phantom: bump supports keep at least `margin`
/// distance from the boundary.
Phantom random_phantom(const ConvexDomain& dom, int nbumps, std::uint64_t seed, double margin);

/// Pointwise evaluation on an nx-by-ny lattice over the domain bounding box.
/// Throws SupportViolation unless every bump support disc stays at least
/// margin_pixels cells away from the boundary.
GridImage rasterize(const Phantom& ph, const ConvexDomain& dom, int nx, int ny,
                    double margin_pixels = 2.0);

/// Pointwise evaluation on an existing lattice (no support check).
GridImage rasterize_on(const Phantom& ph, const GridImage& like);

struct ErrorMetrics {
    double rel_l2 = 0.0;
    double rel_linf = 0.0;
};

/// Masked relative L2 / Linf errors; lattices must match exactly.
ErrorMetrics error_metrics(const GridImage& recon, const GridImage& reference,
                           const std::vector<std::uint8_t>& mask);

/// 1 for cells at least `margin` inside the boundary, 0 elsewhere.
std::vector<std::uint8_t> margin_mask(const ConvexDomain& dom, const GridImage& like,
                                      double margin);

}  // namespace cmbp
