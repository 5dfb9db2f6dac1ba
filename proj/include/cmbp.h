/*
 * cmbp - circular-means / wave-trace back-projection on convex planar domains.
 *
 * C interface of the shared library. All objects are opaque handles owned by
 * the library; every function returns a status code and reports details for
 * the last failure on the calling thread through cmbp_last_error().
 */
#ifndef CMBP_H
#define CMBP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cmbp_status {
    CMBP_OK = 0,
    CMBP_ERR_INVALID_ARGUMENT = 1,
    CMBP_ERR_DEGENERATE_PAIR = 2,
    CMBP_ERR_ROOT_FIND = 3,
    CMBP_ERR_OUT_OF_VALID_RANGE = 4,
    CMBP_ERR_BAD_DISTANCE = 5,
    CMBP_ERR_SUPPORT_VIOLATION = 6,
    CMBP_ERR_LATTICE_MISMATCH = 7,
    CMBP_ERR_FORMAT = 8,
    CMBP_ERR_IO = 9,
    CMBP_ERR_INTERNAL = 10
} cmbp_status;

typedef enum cmbp_formula {
    CMBP_FORMULA_WAVE_A = 0,
    CMBP_FORMULA_WAVE_B = 1,
    CMBP_FORMULA_MEANS_A = 2,
    CMBP_FORMULA_MEANS_B = 3
} cmbp_formula;

typedef enum cmbp_series_kind {
    CMBP_SERIES_MEANS = 0,
    CMBP_SERIES_WAVE = 1
} cmbp_series_kind;

typedef struct cmbp_domain cmbp_domain;
typedef struct cmbp_phantom cmbp_phantom;
typedef struct cmbp_image cmbp_image;
typedef struct cmbp_series cmbp_series;

const char* cmbp_version(void);
const char* cmbp_last_error(void);

/* ---- domains ---------------------------------------------------------- */

cmbp_status cmbp_domain_create_disc(double cx, double cy, double radius, int boundary_nodes,
                                    cmbp_domain** out);
cmbp_status cmbp_domain_create_ellipse(double cx, double cy, double semi_x, double semi_y,
                                       int boundary_nodes, cmbp_domain** out);
cmbp_status cmbp_domain_create_superellipse(double cx, double cy, double semi_x, double semi_y,
                                            double power, int boundary_nodes, cmbp_domain** out);
/* Reads a one-line domain spec file: disc|ellipse|superellipse ... */
cmbp_status cmbp_domain_load(const char* path, int boundary_nodes, cmbp_domain** out);
void cmbp_domain_free(cmbp_domain* dom);

cmbp_status cmbp_domain_diameter(const cmbp_domain* dom, double* out);
cmbp_status cmbp_domain_boundary_count(const cmbp_domain* dom, int* out);

/* ---- phantoms --------------------------------------------------------- */

/* bumps: nbumps quadruples (cx, cy, rho, amp) */
cmbp_status cmbp_phantom_create(const double* bumps, int nbumps, cmbp_phantom** out);
cmbp_status cmbp_phantom_random(const cmbp_domain* dom, int nbumps, uint64_t seed,
                                double margin, cmbp_phantom** out);
cmbp_status cmbp_phantom_load(const char* path, cmbp_phantom** out);
cmbp_status cmbp_phantom_save(const cmbp_phantom* ph, const char* path);
void cmbp_phantom_free(cmbp_phantom* ph);

cmbp_status cmbp_phantom_bump_count(const cmbp_phantom* ph, int* out);

/* Pointwise evaluation on an n-by-n lattice over the domain bounding box;
 * fails with CMBP_ERR_SUPPORT_VIOLATION when a bump support comes closer
 * than margin_pixels cells to the boundary. */
cmbp_status cmbp_rasterize(const cmbp_phantom* ph, const cmbp_domain* dom, int grid_n,
                           double margin_pixels, cmbp_image** out);

/* ---- images ----------------------------------------------------------- */

void cmbp_image_free(cmbp_image* img);
cmbp_status cmbp_image_size(const cmbp_image* img, int* nx, int* ny);
cmbp_status cmbp_image_lattice(const cmbp_image* img, double* x0, double* y0, double* dx,
                               double* dy);
/* Row-major cell values, x fastest; valid until the image is freed. */
cmbp_status cmbp_image_data(const cmbp_image* img, const double** data);
cmbp_status cmbp_image_save(const cmbp_image* img, const char* path);
cmbp_status cmbp_image_load(const char* path, cmbp_image** out);

/* ---- forward simulation ------------------------------------------------ */

/* Circular means on boundary-centered circles; radii (j+1)*diam/n_radii. */
cmbp_status cmbp_simulate_means(const cmbp_domain* dom, const cmbp_phantom* ph, int n_radii,
                                int n_angles, int threads, cmbp_series** out);
/* Same with gridded initial data (bilinear sampling). */
cmbp_status cmbp_simulate_means_grid(const cmbp_domain* dom, const cmbp_image* f, int n_radii,
                                     int n_angles, int threads, cmbp_series** out);
/* Boundary wave trace from the means table; samples at (j+1)*t_max/n_times. */
cmbp_status cmbp_wave_from_means(const cmbp_series* means, int n_times, double t_max,
                                 int threads, cmbp_series** out);
/* Companion trace whose time derivative is the wave trace. */
cmbp_status cmbp_v_from_means(const cmbp_series* means, int n_times, double t_max, int threads,
                              cmbp_series** out);

void cmbp_series_free(cmbp_series* s);
cmbp_status cmbp_series_info(const cmbp_series* s, cmbp_series_kind* kind, int* n_centers,
                             int* n_samples, double* step, double* limit);
cmbp_status cmbp_series_data(const cmbp_series* s, const double** data);
cmbp_status cmbp_series_save(const cmbp_series* s, const char* path);
cmbp_status cmbp_series_load(const char* path, cmbp_series** out);

/* ---- reconstruction ---------------------------------------------------- */

/* Back-projection onto a grid_n x grid_n lattice over the domain bounding
 * box; cells closer than margin_pixels to the boundary stay zero. */
cmbp_status cmbp_reconstruct(const cmbp_domain* dom, const cmbp_series* data,
                             cmbp_formula formula, int grid_n, double margin_pixels,
                             int threads, cmbp_image** out);

/* Masked relative errors between a reconstruction and a reference on the
 * same lattice; the mask keeps cells margin_pixels inside the boundary. */
cmbp_status cmbp_error_metrics(const cmbp_image* recon, const cmbp_image* reference,
                               const cmbp_domain* dom, double margin_pixels, double* rel_l2,
                               double* rel_linf);

/* ---- smoothing kernel --------------------------------------------------- */

/* Field of the smoothing operator applied to gridded initial data, on a
 * grid_n x grid_n lattice. directions/da_factor tune the per-direction
 * profile cache (0 picks the defaults 1024 and 1e-3). */
cmbp_status cmbp_kernel_field(const cmbp_domain* dom, const cmbp_image* f, int grid_n,
                              double margin_pixels, int directions, double da_factor,
                              int threads, cmbp_image** out);

typedef struct cmbp_residual_params {
    int n_radii;
    int n_angles;
    int n_times;
    double tmax_factor;
    int grid_n;
    int f_grid_n;
    double margin_pixels;
    int directions;
    double da_factor;
    int threads;
} cmbp_residual_params;

void cmbp_residual_params_init(cmbp_residual_params* par);

/* Full-pipeline identity check: residual = f - BP(forward(f)) against the
 * kernel field, with rel_gap = ||residual - kernel||_2 / ||f||_2. */
cmbp_status cmbp_residual_vs_kernel(const cmbp_domain* dom, const cmbp_phantom* ph,
                                    const cmbp_residual_params* par, cmbp_image** residual,
                                    cmbp_image** kernel_field, double* rel_gap);

/* Writes per-direction kernel profile tables (every stride-th direction) as
 * text files into an existing directory. */
cmbp_status cmbp_kernel_dump_profiles(const cmbp_domain* dom, int directions, double da_factor,
                                      int stride, const char* dir_path);

#ifdef __cplusplus
}
#endif

#endif /* CMBP_H */
