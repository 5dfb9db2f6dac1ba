#include "cmbp/radon_hilbert.hpp"

#include <algorithm>
#include <cmath>

#include "cmbp/errors.hpp"
#include "cmbp/numerics.hpp"
#include "cmbp/parallel.hpp"

namespace cmbp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvPi = 0.31830988618379067153776752675;

Point2 normalize_dir(Point2 n)
{
    const double m = norm(n);
    if (!std::isfinite(m) || m == 0.0)
        fail(ErrorCode::InvalidArgument, "direction must be nonzero and finite");
    return (1.0 / m) * n;
}

}  // namespace

RadonProfile radon_profile(const ConvexDomain& dom, Point2 n, const ProfileOptions& opt,
                           std::optional<std::pair<double, double>> range)
{
    RadonProfile p;
    p.n = normalize_dir(n);

    DirectionSection sec(dom, p.n);
    p.a_min = sec.a_min();
    p.a_max = sec.a_max();
    const double width = p.a_max - p.a_min;
    if (!(width > 0.0))
        fail(ErrorCode::InvalidArgument, "radon_profile: degenerate support interval");

    p.da = opt.da_factor * width;
    double lo = p.a_min - opt.pad_factor * width;
    double hi = p.a_max + opt.pad_factor * width;
    if (range) {
        lo = std::min(lo, range->first);
        hi = std::max(hi, range->second);
    }
    p.a0 = lo;
    const std::size_t count = static_cast<std::size_t>(std::ceil((hi - lo) / p.da)) + 1;
    p.values.resize(count);
    for (std::size_t j = 0; j < count; ++j)
        p.values[j] = sec.chord(p.a0 + p.da * static_cast<double>(j));
    return p;
}

std::vector<double> hilbert_pv(const RadonProfile& p)
{
    const std::size_t n = p.values.size();
    if (n < 4)
        fail(ErrorCode::InvalidArgument, "hilbert_pv: profile too short");
    if (p.values.front() != 0.0 || p.values.back() != 0.0)
        fail(ErrorCode::InvalidArgument, "hilbert_pv: profile must vanish at the grid ends");

    const double da = p.da;
    const double s_min = p.a0;
    const double s_max = p.a_end();

    // reciprocal of (s_k - a_j) depends on k - j only
    std::vector<double> inv(2 * n - 1);
    for (std::size_t m = 0; m < 2 * n - 1; ++m) {
        const std::ptrdiff_t diff = static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(n - 1);
        inv[m] = diff == 0 ? 0.0 : 1.0 / (static_cast<double>(diff) * da);
    }

    std::vector<double> h(n);
    const double* v = p.values.data();
    for (std::size_t j = 0; j < n; ++j) {
        const double vj = v[j];
        const double* invj = inv.data() + (n - 1 - j);
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            sum += (v[k] - vj) * invj[k];
        // trapezoid end weights and the regularized diagonal term
        sum -= 0.5 * (v[0] - vj) * invj[0];
        sum -= 0.5 * (v[n - 1] - vj) * invj[n - 1];
        const double slope = (j > 0 && j + 1 < n)
                                 ? (v[j + 1] - v[j - 1]) / (2.0 * da)
                                 : (j == 0 ? v[1] - v[0] : v[n - 1] - v[n - 2]) / da;
        sum += (j == 0 || j + 1 == n) ? 0.5 * slope : slope;

        double val = sum * da;
        if (vj != 0.0) {
            const double a = p.a0 + da * static_cast<double>(j);
            val += vj * std::log((s_max - a) / (a - s_min));
        }
        h[j] = kInvPi * val;
    }
    return h;
}

double hilbert_pv_at(const RadonProfile& p, double a)
{
    const std::size_t n = p.values.size();
    const double da = p.da;
    const double s_min = p.a0;
    const double s_max = p.a_end();
    const double* v = p.values.data();

    if (a <= s_min || a >= s_max) {
        // regular integrand; plain trapezoid
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
            sum += w * v[k] / (s_min + da * static_cast<double>(k) - a);
        }
        return kInvPi * sum * da;
    }

    const double va = cubic_interp({v, n}, s_min, da, a);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = s_min + da * static_cast<double>(k);
        const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        if (std::fabs(s - a) < 0.5 * da) {
            // replace the near-singular node by the local slope
            const double slope =
                (k > 0 && k + 1 < n) ? (v[k + 1] - v[k - 1]) / (2.0 * da) : 0.0;
            sum += w * slope;
        } else {
            sum += w * (v[k] - va) / (s - a);
        }
    }
    double val = sum * da;
    if (va != 0.0)
        val += va * std::log((s_max - a) / (a - s_min));
    return kInvPi * val;
}

double KernelProfile::eval(double a) const
{
    if (!(a >= valid_range.first && a <= valid_range.second))
        fail(ErrorCode::OutOfValidRange, "kernel profile: offset outside the trusted range");
    return cubic_interp({values.data(), values.size()}, a0, da, a);
}

KernelProfile make_kernel_profile(const ConvexDomain& dom, Point2 n, const KernelOptions& opt)
{
    ProfileOptions popt{opt.da_factor, opt.pad_factor};
    RadonProfile p = radon_profile(dom, n, popt);

    KernelProfile k;
    k.n = p.n;
    k.a0 = p.a0;
    k.da = p.da;
    k.a_min = p.a_min;
    k.a_max = p.a_max;
    k.values.assign(p.values.size(), 0.0);
    // discs and ellipses have an exactly vanishing kernel; only general
    // boundaries go through the transform
    if (dom.kind() == DomainKind::ParametricConvex) {
        const std::vector<double> h = hilbert_pv(p);
        // kernel orientation: convolution with 1/(pi a) is the negative of hilbert_pv
        for (std::size_t j = 2; j + 2 < h.size(); ++j)
            k.values[j] = -second_deriv_node({h.data(), h.size()}, j, k.da);
    }

    const double width = p.a_max - p.a_min;
    const double margin = std::max(opt.valid_margin_factor * width, 3.0 * k.da);
    k.valid_range = {p.a_min + margin, p.a_max - margin};
    return k;
}

SmoothingKernel::SmoothingKernel(const ConvexDomain& dom, KernelOptions opt)
    : dom_(&dom), opt_(opt)
{
    if (opt_.directions < 4)
        fail(ErrorCode::InvalidArgument, "SmoothingKernel: need at least 4 cached directions");
    if (dom_->kind() == DomainKind::ParametricConvex) {
        cache_.resize(static_cast<std::size_t>(opt_.directions));
        flags_ = std::make_unique<std::once_flag[]>(static_cast<std::size_t>(opt_.directions));
    }
}

int SmoothingKernel::direction_index(Point2 n) const
{
    const double angle = std::atan2(n.y, n.x);
    const double step = kTwoPi / static_cast<double>(opt_.directions);
    long idx = std::lround(angle / step);
    idx %= opt_.directions;
    if (idx < 0)
        idx += opt_.directions;
    return static_cast<int>(idx);
}

const KernelProfile& SmoothingKernel::profile(int dir_index) const
{
    if (cache_.empty())
        fail(ErrorCode::InvalidArgument,
             "smoothing kernel is identically zero for discs and ellipses; no profile tables");
    if (dir_index < 0 || dir_index >= static_cast<int>(cache_.size()))
        fail(ErrorCode::InvalidArgument, "smoothing kernel: direction index out of range");
    auto& slot = cache_[static_cast<std::size_t>(dir_index)];
    std::call_once(flags_[static_cast<std::size_t>(dir_index)], [&]() {
        const double step = kTwoPi / static_cast<double>(opt_.directions);
        const double angle = step * static_cast<double>(dir_index);
        slot = std::make_unique<KernelProfile>(
            make_kernel_profile(*dom_, Point2{std::cos(angle), std::sin(angle)}, opt_));
    });
    return *slot;
}

double SmoothingKernel::weight(Point2 x1, Point2 x0) const
{
    if (dom_->kind() != DomainKind::ParametricConvex)
        return 0.0;  // exact for discs and ellipses
    const DirOffset line = nhat_ahat(x1, x0);
    const KernelProfile& prof = profile(direction_index(line.n));
    return prof.eval(line.a) / norm(x1 - x0);
}

double SmoothingKernel::apply(const GridImage& f, Point2 x0) const
{
    if (dom_->kind() != DomainKind::ParametricConvex)
        return 0.0;
    if (!dom_->contains(x0))
        fail(ErrorCode::InvalidArgument, "smoothing kernel: evaluation point outside the domain");

    // cell containing x0 is excluded: the integrand is O(1/|x1-x0|), so the
    // omitted mass is O(cell size)
    const int cx = static_cast<int>(std::lround((x0.x - f.origin.x) / f.dx));
    const int cy = static_cast<int>(std::lround((x0.y - f.origin.y) / f.dy));

    double sum = 0.0;
    for (int iy = 0; iy < f.ny; ++iy) {
        for (int ix = 0; ix < f.nx; ++ix) {
            const double fv = f.at(ix, iy);
            if (fv == 0.0 || (ix == cx && iy == cy))
                continue;
            sum += fv * weight(f.cell_center(ix, iy), x0);
        }
    }
    return sum * f.cell_area() / (8.0 * M_PI);
}

GridImage SmoothingKernel::field(const GridImage& f, const GridImage& lattice,
                                 const std::vector<std::uint8_t>& mask, int threads) const
{
    if (mask.size() != lattice.values.size())
        fail(ErrorCode::LatticeMismatch, "smoothing kernel field: mask does not match the lattice");
    GridImage out = GridImage::zeros(lattice.nx, lattice.ny, lattice.origin, lattice.dx, lattice.dy);
    parallel_for(static_cast<std::size_t>(lattice.ny), threads, [&](std::size_t iy) {
        for (int ix = 0; ix < lattice.nx; ++ix) {
            const std::size_t idx = iy * static_cast<std::size_t>(lattice.nx) + ix;
            if (mask[idx])
                out.values[idx] = apply(f, lattice.cell_center(ix, static_cast<int>(iy)));
        }
    });
    return out;
}

}  // namespace cmbp
