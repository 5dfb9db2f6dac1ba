#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "cmbp/geometry.hpp"
#include "cmbp/grid_image.hpp"

namespace cmbp {

/// Chord-length profile of the domain along one direction, sampled on a
/// uniform offset grid extending past the support with zeros.
struct RadonProfile {
    Point2 n;
    double a0 = 0.0;
    double da = 0.0;
    std::vector<double> values;
    double a_min = 0.0, a_max = 0.0;  // support tangency offsets

    double a_end() const { return a0 + da * static_cast<double>(values.size() - 1); }
};

struct ProfileOptions {
    double da_factor = 1e-3;  // grid step, fraction of the support width
    double pad_factor = 0.1;  // zero padding past each tangency, fraction of width
};

/// Samples the chord profile along n. The grid covers at least
/// [a_min - pad, a_max + pad]; a wider range can be requested.
RadonProfile radon_profile(const ConvexDomain& dom, Point2 n, const ProfileOptions& opt = {},
                           std::optional<std::pair<double, double>> range = std::nullopt);

/// Principal-value Hilbert transform at every grid node, convolving with
/// 1/(pi (s - a)): the convention mapping sqrt(1-a^2) restricted to |a|<1
/// to -a there. Uses singularity subtraction against the endpoint logarithm;
/// profile values must vanish at the grid ends.
std::vector<double> hilbert_pv(const RadonProfile& p);

/// The same transform at one abscissa (plain quadrature outside the grid).
double hilbert_pv_at(const RadonProfile& p, double a);

struct KernelOptions {
    double da_factor = 1e-3;
    double pad_factor = 0.1;
    double valid_margin_factor = 0.05;  // kept away from each tangency, fraction of width
    int directions = 1024;              // angular cache resolution
};

/// Second offset-derivative of the transformed chord profile along one
/// direction. The stored orientation is the one the smoothing kernel needs
/// (convolution with 1/(pi a)), i.e. the negative of hilbert_pv.
struct KernelProfile {
    Point2 n;
    double a0 = 0.0, da = 0.0;
    std::vector<double> values;  // nodewise 5-point second derivatives
    std::pair<double, double> valid_range;
    double a_min = 0.0, a_max = 0.0;

    double eval(double a) const;  // cubic interpolation; OutOfValidRange outside
};

KernelProfile make_kernel_profile(const ConvexDomain& dom, Point2 n,
                                  const KernelOptions& opt = {});

/// Smoothing operator of the reconstruction identity. Identically zero for
/// discs and ellipses; general domains go through a lazily built cache of
/// per-direction kernel profiles (nearest-direction lookup).
class SmoothingKernel {
public:
    explicit SmoothingKernel(const ConvexDomain& dom, KernelOptions opt = {});

    SmoothingKernel(const SmoothingKernel&) = delete;
    SmoothingKernel& operator=(const SmoothingKernel&) = delete;

    const ConvexDomain& domain() const { return *dom_; }
    const KernelOptions& options() const { return opt_; }

    /// Kernel integrand (d2 transform of the chord profile at (nhat, ahat))
    /// divided by |x1 - x0|.
    double weight(Point2 x1, Point2 x0) const;

    /// (1/8pi) * sum of f * weight * cell_area over f's cells, excluding the
    /// cell containing x0.
    double apply(const GridImage& f, Point2 x0) const;

    /// apply() on every unmasked cell of the lattice.
    GridImage field(const GridImage& f, const GridImage& lattice,
                    const std::vector<std::uint8_t>& mask, int threads) const;

    int direction_index(Point2 n) const;
    const KernelProfile& profile(int dir_index) const;  // built on first use

private:
    const ConvexDomain* dom_;
    KernelOptions opt_;
    mutable std::vector<std::unique_ptr<KernelProfile>> cache_;
    std::unique_ptr<std::once_flag[]> flags_;
};

}  // namespace cmbp
