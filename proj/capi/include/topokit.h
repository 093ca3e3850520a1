/* topokit C API: topology kernels for 2D/3D image grids behind opaque
 * handles. Every function returns tk_status; outputs go through pointers.
 * On error, tk_last_error() returns a thread-local message. Handles must be
 * released with their tk_*_free function. */
#ifndef TOPOKIT_H
#define TOPOKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tk_status {
    TK_OK = 0,
    TK_ERR_INVALID_ARGUMENT = 1,
    TK_ERR_IO = 2,
    TK_ERR_INTERNAL = 3
} tk_status;

const char* tk_version(void);
const char* tk_last_error(void);

typedef struct tk_grid tk_grid;
typedef struct tk_mask tk_mask;
typedef struct tk_diagram tk_diagram;
typedef struct tk_targets tk_targets;
typedef struct tk_family tk_family;
typedef struct tk_curve tk_curve;

/* ---- grids ---- */

tk_status tk_grid_create(int w, int h, int d, const double* values, tk_grid** out);
void tk_grid_free(tk_grid* g);
tk_status tk_grid_dims(const tk_grid* g, int* w, int* h, int* d);
tk_status tk_grid_values(const tk_grid* g, double* out /* w*h*d */);
tk_status tk_grid_read_raw(const char* path, tk_grid** out);
tk_status tk_grid_write_raw(const tk_grid* g, const char* path);

/* ---- masks ---- */

tk_status tk_mask_create(int w, int h, int d, const uint8_t* bits, int fg_adjacency,
                         tk_mask** out);
void tk_mask_free(tk_mask* m);
tk_status tk_mask_dims(const tk_mask* m, int* w, int* h, int* d);
tk_status tk_mask_adjacency(const tk_mask* m, int* fg_adjacency);
tk_status tk_mask_bits(const tk_mask* m, uint8_t* out /* w*h*d */);
tk_status tk_mask_read_pgm(const char* path, int fg_adjacency, tk_mask** out);
tk_status tk_mask_write_pgm(const tk_mask* m, const char* path);

/* ---- grid-core operations ---- */

tk_status tk_threshold(const tk_grid* g, double alpha, int fg_adjacency, tk_mask** out);
/* which: 0 foreground, 1 background. labels buffer is w*h*d int32. */
tk_status tk_connected_components(const tk_mask* m, int which, int32_t* labels, int* count);
tk_status tk_betti_numbers(const tk_mask* m, int64_t* b0, int64_t* b1, int64_t* b2);
tk_status tk_distance_transform(const tk_mask* m, double* out /* w*h*d */);

/* ---- persistence ---- */

typedef struct tk_dot {
    int dim;
    double birth;
    double death;
    uint64_t birth_cell;
    uint64_t death_cell; /* UINT64_MAX for essential dots */
    int essential;
} tk_dot;

tk_status tk_diagram_compute(const tk_grid* g, int relative_frame, tk_diagram** out);
tk_status tk_diagram_dim0_sweep(const tk_grid* g, int fg_adjacency, tk_diagram** out);
void tk_diagram_free(tk_diagram* d);
tk_status tk_diagram_size(const tk_diagram* d, size_t* n);
tk_status tk_diagram_dot(const tk_diagram* d, size_t i, tk_dot* out);
/* essential_death_mode: 0 = sentinel "inf", 1 = dies-at-one convention */
tk_status tk_diagram_write_csv(const tk_diagram* d, const char* path, int essential_death_mode);

/* ---- topological loss / trigger prior ---- */

typedef struct tk_target {
    uint64_t pixel;   /* pixel index in the original grid */
    uint64_t cell;    /* critical cell id */
    double current;
    double target;
    int role;         /* 0 birth, 1 death */
} tk_target;

tk_status tk_topo_loss(const tk_grid* pred, const tk_grid* gt, int relative_frame, double* loss,
                       tk_targets** targets /* may be NULL */);
tk_status tk_trigger_loss(const tk_grid* mask_grid, double* loss,
                          tk_targets** targets /* may be NULL */);
void tk_targets_free(tk_targets* t);
tk_status tk_targets_size(const tk_targets* t, size_t* n);
tk_status tk_targets_get(const tk_targets* t, size_t i, tk_target* out);
tk_status tk_targets_write_csv(const tk_targets* t, const char* path);

/* ---- digital topology / warping ---- */

tk_status tk_is_simple(const tk_mask* m, int x, int y, int z, int* out);
tk_status tk_homotopy_warp(const tk_mask* source, const tk_mask* target, int repeat,
                           tk_mask** out);
tk_status tk_critical_masks(const tk_mask* pred, const tk_mask* gt, tk_mask** m_g, tk_mask** m_f,
                            tk_mask** m_union);
tk_status tk_warping_error(const tk_mask* pred, const tk_mask* gt, double* out);
tk_status tk_warp_loss_mask(const tk_grid* pred_likelihood, const tk_mask* gt, tk_mask** out);

/* ---- discrete Morse / watershed ---- */

tk_status tk_skeleton_family(const tk_grid* g, double epsilon, tk_family** out);
tk_status tk_boundary_skeleton(const tk_mask* m, double epsilon, tk_family** out);
void tk_family_free(tk_family* f);
tk_status tk_family_size(const tk_family* f, size_t* n);
tk_status tk_family_branch(const tk_family* f, size_t i, double* persistence,
                           size_t* pixel_count);
tk_status tk_family_branch_pixels(const tk_family* f, size_t i, uint32_t* out);
tk_status tk_family_query(const tk_family* f, double epsilon, tk_mask** out);
tk_status tk_family_write_csv(const tk_family* f, const char* path);
tk_status tk_ph_watershed(const tk_grid* g, double theta, tk_mask** out);
tk_status tk_sheets_2d(const tk_grid* g, double epsilon, tk_mask** out);
tk_status tk_dmt_mask(const tk_grid* g, double epsilon, int include_sheets, tk_mask** out);

/* ---- probabilistic structure layer ---- */

tk_status tk_branch_probabilities(const tk_family* f, double mu, double sigma,
                                  double* p_include, double* confidence, double* uncertainty);
tk_status tk_sample_skeleton(const tk_family* f, double mu, double sigma, uint64_t seed,
                             double* epsilon_used, tk_mask** skeleton);
tk_status tk_grow_segmentation(const tk_mask* skeleton, const tk_mask* initial, tk_mask** out);
tk_status tk_empirical_uncertainty(const tk_mask* const* samples, size_t n, tk_grid** out);
tk_status tk_skeleton_masked_loss(const tk_grid* likelihood, const tk_mask* gt,
                                  const tk_mask* skeleton, double* out);
tk_status tk_kl_gaussians(double mu_q, double sigma_q, double mu_p, double sigma_p, double* out);
tk_status tk_derive_branch_labels(const tk_family* f, const tk_mask* gt, uint8_t* labels);
/* order: 0 uncertainty-descending, 1 seeded random */
tk_status tk_proofread_simulate(const tk_family* f, double mu, double sigma,
                                const uint8_t* gt_branch_labels, int order, uint64_t seed,
                                const tk_mask* metric_gt, const tk_mask* initial /* nullable */,
                                tk_curve** out);
void tk_curve_free(tk_curve* c);
tk_status tk_curve_size(const tk_curve* c, size_t* n);
tk_status tk_curve_point(const tk_curve* c, size_t i, int* step, double* voi, double* pixel_error);
tk_status tk_curve_write_csv(const tk_curve* c, const char* path);

/* ---- evaluation metrics ---- */

/* regions: 0 foreground components, 1 complement components */
tk_status tk_overlap_scores(const tk_mask* pred, const tk_mask* gt, double* dice,
                            double* pixel_accuracy);
tk_status tk_adapted_rand(const tk_mask* pred, const tk_mask* gt, int regions, double* out);
tk_status tk_voi(const tk_mask* pred, const tk_mask* gt, int regions, double* total,
                 double* split, double* merge);
tk_status tk_betti_error(const tk_mask* pred, const tk_mask* gt, int patch, int n_patches,
                         uint64_t seed, int dim, double* out);

/* ---- synthetic scenes ---- */

/* Produces either a grid or a mask depending on the scene; the other output
 * is NULL. sidecar receives a malloc'd JSON string (free with tk_string_free)
 * documenting the scene's analytically known properties. */
tk_status tk_synth(const char* scene, int size, uint64_t seed, tk_grid** grid, tk_mask** mask,
                   char** sidecar);
void tk_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* TOPOKIT_H */
