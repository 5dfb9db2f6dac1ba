#include "cmbp.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>

#include "cmbp/errors.hpp"
#include "cmbp/forward.hpp"
#include "cmbp/geometry.hpp"
#include "cmbp/grid_image.hpp"
#include "cmbp/inversion.hpp"
#include "cmbp/io_formats.hpp"
#include "cmbp/phantom.hpp"
#include "cmbp/radon_hilbert.hpp"

struct cmbp_domain {
    cmbp::ConvexDomain dom;
};
struct cmbp_phantom {
    cmbp::Phantom ph;
};
struct cmbp_image {
    cmbp::GridImage img;
};
struct cmbp_series {
    cmbp::BoundarySeries s;
};

namespace {

thread_local std::string g_last_error;

cmbp_status to_status(cmbp::ErrorCode c)
{
    using EC = cmbp::ErrorCode;
    switch (c) {
        case EC::InvalidArgument: return CMBP_ERR_INVALID_ARGUMENT;
        case EC::DegeneratePair: return CMBP_ERR_DEGENERATE_PAIR;
        case EC::RootFindFailure: return CMBP_ERR_ROOT_FIND;
        case EC::OutOfValidRange: return CMBP_ERR_OUT_OF_VALID_RANGE;
        case EC::BadDistance: return CMBP_ERR_BAD_DISTANCE;
        case EC::SupportViolation: return CMBP_ERR_SUPPORT_VIOLATION;
        case EC::LatticeMismatch: return CMBP_ERR_LATTICE_MISMATCH;
        case EC::FormatError: return CMBP_ERR_FORMAT;
        case EC::IoError: return CMBP_ERR_IO;
    }
    return CMBP_ERR_INTERNAL;
}

template <typename Fn>
cmbp_status guarded(Fn&& fn)
{
    try {
        fn();
        return CMBP_OK;
    } catch (const cmbp::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CMBP_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return CMBP_ERR_INTERNAL;
    }
}

cmbp_status arg_error(const char* msg)
{
    g_last_error = msg;
    return CMBP_ERR_INVALID_ARGUMENT;
}

cmbp::KernelOptions kernel_options(int directions, double da_factor)
{
    cmbp::KernelOptions opt;
    if (directions > 0)
        opt.directions = directions;
    if (da_factor > 0.0)
        opt.da_factor = da_factor;
    return opt;
}

}  // namespace

extern "C" {

const char* cmbp_version(void) { return "0.1.0"; }

const char* cmbp_last_error(void) { return g_last_error.c_str(); }

cmbp_status cmbp_domain_create_disc(double cx, double cy, double radius, int boundary_nodes,
                                    cmbp_domain** out)
{
    if (!out)
        return arg_error("null output handle");
    return guarded([&]() {
        *out = new cmbp_domain{cmbp::ConvexDomain::disc({cx, cy}, radius, boundary_nodes)};
    });
}

cmbp_status cmbp_domain_create_ellipse(double cx, double cy, double semi_x, double semi_y,
                                       int boundary_nodes, cmbp_domain** out)
{
    if (!out)
        return arg_error("null output handle");
    return guarded([&]() {
        *out = new cmbp_domain{
            cmbp::ConvexDomain::ellipse({cx, cy}, semi_x, semi_y, boundary_nodes)};
    });
}

cmbp_status cmbp_domain_create_superellipse(double cx, double cy, double semi_x, double semi_y,
                                            double power, int boundary_nodes, cmbp_domain** out)
{
    if (!out)
        return arg_error("null output handle");
    return guarded([&]() {
        *out = new cmbp_domain{
            cmbp::ConvexDomain::superellipse({cx, cy}, semi_x, semi_y, power, boundary_nodes)};
    });
}

cmbp_status cmbp_domain_load(const char* path, int boundary_nodes, cmbp_domain** out)
{
    if (!out || !path)
        return arg_error("null path or output handle");
    return guarded([&]() {
        *out = new cmbp_domain{cmbp::load_domain_spec(path, boundary_nodes)};
    });
}

void cmbp_domain_free(cmbp_domain* dom) { delete dom; }

cmbp_status cmbp_domain_diameter(const cmbp_domain* dom, double* out)
{
    if (!dom || !out)
        return arg_error("null argument");
    *out = dom->dom.diameter();
    return CMBP_OK;
}

cmbp_status cmbp_domain_boundary_count(const cmbp_domain* dom, int* out)
{
    if (!dom || !out)
        return arg_error("null argument");
    *out = static_cast<int>(dom->dom.boundary().size());
    return CMBP_OK;
}

cmbp_status cmbp_phantom_create(const double* bumps, int nbumps, cmbp_phantom** out)
{
    if (!out || (nbumps > 0 && !bumps))
        return arg_error("null argument");
    return guarded([&]() {
        std::vector<cmbp::Bump> list;
        list.reserve(static_cast<std::size_t>(nbumps > 0 ? nbumps : 0));
        for (int k = 0; k < nbumps; ++k)
            list.push_back(cmbp::Bump{{bumps[4 * k], bumps[4 * k + 1]}, bumps[4 * k + 2],
                                      bumps[4 * k + 3]});
        *out = new cmbp_phantom{cmbp::Phantom(std::move(list))};
    });
}

cmbp_status cmbp_phantom_random(const cmbp_domain* dom, int nbumps, uint64_t seed,
                                double margin, cmbp_phantom** out)
{
    if (!dom || !out)
        return arg_error("null argument");
    return guarded([&]() {
        *out = new cmbp_phantom{cmbp::random_phantom(dom->dom, nbumps, seed, margin)};
    });
}

cmbp_status cmbp_phantom_load(const char* path, cmbp_phantom** out)
{
    if (!out || !path)
        return arg_error("null argument");
    return guarded([&]() { *out = new cmbp_phantom{cmbp::load_phantom_spec(path)}; });
}

cmbp_status cmbp_phantom_save(const cmbp_phantom* ph, const char* path)
{
    if (!ph || !path)
        return arg_error("null argument");
    return guarded([&]() { cmbp::save_phantom_spec(ph->ph, path); });
}

void cmbp_phantom_free(cmbp_phantom* ph) { delete ph; }

cmbp_status cmbp_phantom_bump_count(const cmbp_phantom* ph, int* out)
{
    if (!ph || !out)
        return arg_error("null argument");
    *out = static_cast<int>(ph->ph.bumps().size());
    return CMBP_OK;
}

cmbp_status cmbp_rasterize(const cmbp_phantom* ph, const cmbp_domain* dom, int grid_n,
                           double margin_pixels, cmbp_image** out)
{
    if (!ph || !dom || !out)
        return arg_error("null argument");
    return guarded([&]() {
        *out = new cmbp_image{cmbp::rasterize(ph->ph, dom->dom, grid_n, grid_n, margin_pixels)};
    });
}

void cmbp_image_free(cmbp_image* img) { delete img; }

cmbp_status cmbp_image_size(const cmbp_image* img, int* nx, int* ny)
{
    if (!img || !nx || !ny)
        return arg_error("null argument");
    *nx = img->img.nx;
    *ny = img->img.ny;
    return CMBP_OK;
}

cmbp_status cmbp_image_lattice(const cmbp_image* img, double* x0, double* y0, double* dx,
                               double* dy)
{
    if (!img || !x0 || !y0 || !dx || !dy)
        return arg_error("null argument");
    *x0 = img->img.origin.x;
    *y0 = img->img.origin.y;
    *dx = img->img.dx;
    *dy = img->img.dy;
    return CMBP_OK;
}

cmbp_status cmbp_image_data(const cmbp_image* img, const double** data)
{
    if (!img || !data)
        return arg_error("null argument");
    *data = img->img.values.data();
    return CMBP_OK;
}

cmbp_status cmbp_image_save(const cmbp_image* img, const char* path)
{
    if (!img || !path)
        return arg_error("null argument");
    return guarded([&]() { cmbp::write_grid2(img->img, path); });
}

cmbp_status cmbp_image_load(const char* path, cmbp_image** out)
{
    if (!path || !out)
        return arg_error("null argument");
    return guarded([&]() { *out = new cmbp_image{cmbp::read_grid2(path)}; });
}

cmbp_status cmbp_simulate_means(const cmbp_domain* dom, const cmbp_phantom* ph, int n_radii,
                                int n_angles, int threads, cmbp_series** out)
{
    if (!dom || !ph || !out)
        return arg_error("null argument");
    return guarded([&]() {
        *out = new cmbp_series{cmbp::circular_means(dom->dom, ph->ph, n_radii, n_angles, threads)};
    });
}

cmbp_status cmbp_simulate_means_grid(const cmbp_domain* dom, const cmbp_image* f, int n_radii,
                                     int n_angles, int threads, cmbp_series** out)
{
    if (!dom || !f || !out)
        return arg_error("null argument");
    return guarded([&]() {
        *out = new cmbp_series{
            cmbp::circular_means_grid(dom->dom, f->img, n_radii, n_angles, threads)};
    });
}

cmbp_status cmbp_wave_from_means(const cmbp_series* means, int n_times, double t_max,
                                 int threads, cmbp_series** out)
{
    if (!means || !out)
        return arg_error("null argument");
    return guarded([&]() {
        *out = new cmbp_series{cmbp::wave_from_means(means->s, n_times, t_max, threads)};
    });
}

cmbp_status cmbp_v_from_means(const cmbp_series* means, int n_times, double t_max, int threads,
                              cmbp_series** out)
{
    if (!means || !out)
        return arg_error("null argument");
    return guarded([&]() {
        *out = new cmbp_series{cmbp::v_from_means(means->s, n_times, t_max, threads)};
    });
}

void cmbp_series_free(cmbp_series* s) { delete s; }

cmbp_status cmbp_series_info(const cmbp_series* s, cmbp_series_kind* kind, int* n_centers,
                             int* n_samples, double* step, double* limit)
{
    if (!s)
        return arg_error("null argument");
    if (kind)
        *kind = s->s.kind == cmbp::SeriesKind::Means ? CMBP_SERIES_MEANS : CMBP_SERIES_WAVE;
    if (n_centers)
        *n_centers = s->s.n_centers();
    if (n_samples)
        *n_samples = s->s.n_samples;
    if (step)
        *step = s->s.step;
    if (limit)
        *limit = s->s.limit;
    return CMBP_OK;
}

cmbp_status cmbp_series_data(const cmbp_series* s, const double** data)
{
    if (!s || !data)
        return arg_error("null argument");
    *data = s->s.values.data();
    return CMBP_OK;
}

cmbp_status cmbp_series_save(const cmbp_series* s, const char* path)
{
    if (!s || !path)
        return arg_error("null argument");
    return guarded([&]() { cmbp::write_bser(s->s, path); });
}

cmbp_status cmbp_series_load(const char* path, cmbp_series** out)
{
    if (!path || !out)
        return arg_error("null argument");
    return guarded([&]() { *out = new cmbp_series{cmbp::read_bser(path)}; });
}

cmbp_status cmbp_reconstruct(const cmbp_domain* dom, const cmbp_series* data,
                             cmbp_formula formula, int grid_n, double margin_pixels,
                             int threads, cmbp_image** out)
{
    if (!dom || !data || !out)
        return arg_error("null argument");
    return guarded([&]() {
        cmbp::ReconstructionRequest req;
        switch (formula) {
            case CMBP_FORMULA_WAVE_A: req.formula = cmbp::Formula::WaveA; break;
            case CMBP_FORMULA_WAVE_B: req.formula = cmbp::Formula::WaveB; break;
            case CMBP_FORMULA_MEANS_A: req.formula = cmbp::Formula::MeansA; break;
            case CMBP_FORMULA_MEANS_B: req.formula = cmbp::Formula::MeansB; break;
            default:
                cmbp::fail(cmbp::ErrorCode::InvalidArgument, "unknown formula");
        }
        req.nx = req.ny = grid_n;
        req.margin_pixels = margin_pixels;
        req.threads = threads;
        *out = new cmbp_image{cmbp::back_project(dom->dom, data->s, req).image};
    });
}

cmbp_status cmbp_error_metrics(const cmbp_image* recon, const cmbp_image* reference,
                               const cmbp_domain* dom, double margin_pixels, double* rel_l2,
                               double* rel_linf)
{
    if (!recon || !reference || !dom || !rel_l2 || !rel_linf)
        return arg_error("null argument");
    return guarded([&]() {
        const double margin =
            margin_pixels * std::max(recon->img.dx, recon->img.dy);
        const auto mask = cmbp::margin_mask(dom->dom, recon->img, margin);
        const cmbp::ErrorMetrics m = cmbp::error_metrics(recon->img, reference->img, mask);
        *rel_l2 = m.rel_l2;
        *rel_linf = m.rel_linf;
    });
}

cmbp_status cmbp_kernel_field(const cmbp_domain* dom, const cmbp_image* f, int grid_n,
                              double margin_pixels, int directions, double da_factor,
                              int threads, cmbp_image** out)
{
    if (!dom || !f || !out)
        return arg_error("null argument");
    return guarded([&]() {
        cmbp::GridImage lattice = cmbp::make_lattice(dom->dom, grid_n, grid_n);
        const double margin = margin_pixels * std::max(lattice.dx, lattice.dy);
        const auto mask = cmbp::margin_mask(dom->dom, lattice, margin);
        cmbp::SmoothingKernel kernel(dom->dom, kernel_options(directions, da_factor));
        *out = new cmbp_image{kernel.field(f->img, lattice, mask, threads)};
    });
}

void cmbp_residual_params_init(cmbp_residual_params* par)
{
    if (!par)
        return;
    par->n_radii = 1024;
    par->n_angles = 512;
    par->n_times = 2048;
    par->tmax_factor = 8.0;
    par->grid_n = 64;
    par->f_grid_n = 128;
    par->margin_pixels = 2.0;
    par->directions = 1024;
    par->da_factor = 1e-3;
    par->threads = 1;
}

cmbp_status cmbp_residual_vs_kernel(const cmbp_domain* dom, const cmbp_phantom* ph,
                                    const cmbp_residual_params* par, cmbp_image** residual,
                                    cmbp_image** kernel_field, double* rel_gap)
{
    if (!dom || !ph || !par || !residual || !kernel_field || !rel_gap)
        return arg_error("null argument");
    return guarded([&]() {
        cmbp::ResidualParams rp;
        rp.n_radii = par->n_radii;
        rp.n_angles = par->n_angles;
        rp.n_times = par->n_times;
        rp.tmax_factor = par->tmax_factor;
        rp.grid = par->grid_n;
        rp.f_grid = par->f_grid_n;
        rp.margin_pixels = par->margin_pixels;
        rp.threads = par->threads;
        rp.kernel = kernel_options(par->directions, par->da_factor);
        // closed-form domains go through the numeric pipeline here so the
        // near-zero kernel field is an end-to-end observation, not a shortcut
        const cmbp::ConvexDomain numeric = dom->dom.as_parametric();
        cmbp::ResidualReport rep = cmbp::residual_vs_kernel(numeric, ph->ph, rp);
        *residual = new cmbp_image{std::move(rep.residual)};
        *kernel_field = new cmbp_image{std::move(rep.kernel_field)};
        *rel_gap = rep.rel_gap;
    });
}

cmbp_status cmbp_kernel_dump_profiles(const cmbp_domain* dom, int directions, double da_factor,
                                      int stride, const char* dir_path)
{
    if (!dom || !dir_path)
        return arg_error("null argument");
    if (stride < 1)
        return arg_error("stride must be positive");
    return guarded([&]() {
        const cmbp::KernelOptions opt = kernel_options(directions, da_factor);
        cmbp::SmoothingKernel kernel(dom->dom, opt);
        for (int k = 0; k < opt.directions; k += stride) {
            const cmbp::KernelProfile& prof = kernel.profile(k);
            char name[64];
            std::snprintf(name, sizeof(name), "/kernel_profile_%04d.txt", k);
            std::ofstream out(std::string(dir_path) + name);
            if (!out)
                cmbp::fail(cmbp::ErrorCode::IoError, "cannot write profile dump");
            out << "# direction " << prof.n.x << ' ' << prof.n.y << " a0 " << prof.a0 << " da "
                << prof.da << " valid " << prof.valid_range.first << ' '
                << prof.valid_range.second << '\n';
            for (std::size_t j = 0; j < prof.values.size(); ++j)
                out << prof.a0 + prof.da * static_cast<double>(j) << ' ' << prof.values[j]
                    << '\n';
        }
    });
}

}  // extern "C"
