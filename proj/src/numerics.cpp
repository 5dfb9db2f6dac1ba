#include "cmbp/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "cmbp/errors.hpp"

namespace cmbp {

double cubic_interp(std::span<const double> v, double x0, double dx, double x)
{
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
    if (n == 0)
        return 0.0;
    if (n == 1)
        return v[0];

    const double u = (x - x0) / dx;
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(std::floor(u));
    // stencil k-1 .. k+2, shifted to stay inside the table
    std::ptrdiff_t j0 = std::clamp<std::ptrdiff_t>(k - 1, 0, n - 4 >= 0 ? n - 4 : 0);
    if (n < 4) {
        // linear fallback for very short tables
        k = std::clamp<std::ptrdiff_t>(k, 0, n - 2);
        const double t = u - static_cast<double>(k);
        return v[k] * (1.0 - t) + v[k + 1] * t;
    }

    const double t = u - static_cast<double>(j0);  // position relative to stencil start
    // Lagrange basis on nodes 0,1,2,3
    const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return w0 * v[j0] + w1 * v[j0 + 1] + w2 * v[j0 + 2] + w3 * v[j0 + 3];
}

std::vector<double> deriv1_table(std::span<const double> v, double dx)
{
    const std::size_t n = v.size();
    std::vector<double> d(n, 0.0);
    if (n < 2)
        return d;
    if (n < 5) {
        // simple differences for degenerate tables
        for (std::size_t j = 0; j < n; ++j) {
            if (j == 0)
                d[j] = (v[1] - v[0]) / dx;
            else if (j == n - 1)
                d[j] = (v[n - 1] - v[n - 2]) / dx;
            else
                d[j] = (v[j + 1] - v[j - 1]) / (2.0 * dx);
        }
        return d;
    }
    const double s = 1.0 / (12.0 * dx);
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * s;
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * s;
    for (std::size_t j = 2; j + 2 < n; ++j)
        d[j] = (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) * s;
    d[n - 2] = -(-3.0 * v[n - 1] - 10.0 * v[n - 2] + 18.0 * v[n - 3] - 6.0 * v[n - 4] + v[n - 5]) * s;
    d[n - 1] = -(-25.0 * v[n - 1] + 48.0 * v[n - 2] - 36.0 * v[n - 3] + 16.0 * v[n - 4] - 3.0 * v[n - 5]) * s;
    return d;
}

double second_deriv_node(std::span<const double> v, std::size_t j, double dx)
{
    return (-v[j - 2] + 16.0 * v[j - 1] - 30.0 * v[j] + 16.0 * v[j + 1] - v[j + 2]) /
           (12.0 * dx * dx);
}

double second_deriv(std::span<const double> v, double x0, double dx, double x)
{
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
    if (n < 8)
        fail(ErrorCode::OutOfValidRange, "second_deriv: table too short");
    const double u = (x - x0) / dx;
    // nodes j0-1 .. j0+2 carry the interpolated 5-point values; each needs
    // two neighbours on both sides
    std::ptrdiff_t j0 = static_cast<std::ptrdiff_t>(std::floor(u));
    if (u < 3.0 || u > static_cast<double>(n - 4))
        fail(ErrorCode::OutOfValidRange, "second_deriv: abscissa outside differentiable range");
    j0 = std::clamp<std::ptrdiff_t>(j0, 3, n - 5);

    double d2[4];
    for (int m = 0; m < 4; ++m)
        d2[m] = second_deriv_node(v, static_cast<std::size_t>(j0 - 1 + m), dx);
    const double t = u - static_cast<double>(j0 - 1);
    const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return w0 * d2[0] + w1 * d2[1] + w2 * d2[2] + w3 * d2[3];
}

}  // namespace cmbp
