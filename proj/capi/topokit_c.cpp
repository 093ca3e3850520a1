#include "topokit.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "topokit/grid.hpp"
#include "topokit/io.hpp"
#include "topokit/metrics.hpp"
#include "topokit/morse.hpp"
#include "topokit/persistence.hpp"
#include "topokit/prob.hpp"
#include "topokit/synth.hpp"
#include "topokit/topo_match.hpp"
#include "topokit/warp.hpp"

using namespace topokit;

struct tk_grid {
    ScalarGrid v;
};
struct tk_mask {
    BinaryMask v;
};
struct tk_diagram {
    PersistenceDiagram v;
};
struct tk_targets {
    std::vector<GradientTarget> v;
};
struct tk_family {
    SkeletonFamily v;
};
struct tk_curve {
    std::vector<ProofreadStep> v;
};

namespace {

thread_local std::string g_last_error;

tk_status fail(tk_status code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename F>
tk_status guarded(F&& f) {
    try {
        f();
        return TK_OK;
    } catch (const std::invalid_argument& e) {
        return fail(TK_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(TK_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(TK_ERR_INTERNAL, e.what());
    }
}

tk_status require(bool cond, const char* what) {
    return cond ? TK_OK : fail(TK_ERR_INVALID_ARGUMENT, what);
}

template <typename H, typename T>
tk_status make_handle(H** out, T value) {
    *out = new H{std::move(value)};
    return TK_OK;
}

tk_status write_file(const char* path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) return fail(TK_ERR_IO, "cannot open output file");
    os << content;
    return os ? TK_OK : fail(TK_ERR_IO, "write failed");
}

}  // namespace

extern "C" {

const char* tk_version(void) { return "topokit 1.0.0"; }
const char* tk_last_error(void) { return g_last_error.c_str(); }

/* ---- grids ---- */

tk_status tk_grid_create(int w, int h, int d, const double* values, tk_grid** out) {
    if (tk_status s = require(values && out, "null argument")) return s;
    return guarded([&] {
        GridDims dims{w, h, d < 1 ? 1 : d};
        dims.validate();
        std::vector<double> v(values, values + dims.size());
        make_handle(out, ScalarGrid(dims, std::move(v)));
    });
}

void tk_grid_free(tk_grid* g) { delete g; }

tk_status tk_grid_dims(const tk_grid* g, int* w, int* h, int* d) {
    if (tk_status s = require(g && w && h && d, "null argument")) return s;
    *w = g->v.dims().w;
    *h = g->v.dims().h;
    *d = g->v.dims().d;
    return TK_OK;
}

tk_status tk_grid_values(const tk_grid* g, double* out) {
    if (tk_status s = require(g && out, "null argument")) return s;
    std::memcpy(out, g->v.values().data(), g->v.values().size() * sizeof(double));
    return TK_OK;
}

tk_status tk_grid_read_raw(const char* path, tk_grid** out) {
    if (tk_status s = require(path && out, "null argument")) return s;
    return guarded([&] { make_handle(out, read_grid_raw(path)); });
}

tk_status tk_grid_write_raw(const tk_grid* g, const char* path) {
    if (tk_status s = require(g && path, "null argument")) return s;
    return guarded([&] { write_grid_raw(g->v, path); });
}

/* ---- masks ---- */

tk_status tk_mask_create(int w, int h, int d, const uint8_t* bits, int fg_adjacency,
                         tk_mask** out) {
    if (tk_status s = require(bits && out, "null argument")) return s;
    return guarded([&] {
        GridDims dims{w, h, d < 1 ? 1 : d};
        dims.validate();
        std::vector<std::uint8_t> b(bits, bits + dims.size());
        make_handle(out, BinaryMask(dims, Adjacency{fg_adjacency}, std::move(b)));
    });
}

void tk_mask_free(tk_mask* m) { delete m; }

tk_status tk_mask_dims(const tk_mask* m, int* w, int* h, int* d) {
    if (tk_status s = require(m && w && h && d, "null argument")) return s;
    *w = m->v.dims().w;
    *h = m->v.dims().h;
    *d = m->v.dims().d;
    return TK_OK;
}

tk_status tk_mask_adjacency(const tk_mask* m, int* fg_adjacency) {
    if (tk_status s = require(m && fg_adjacency, "null argument")) return s;
    *fg_adjacency = m->v.adjacency().foreground;
    return TK_OK;
}

tk_status tk_mask_bits(const tk_mask* m, uint8_t* out) {
    if (tk_status s = require(m && out, "null argument")) return s;
    std::memcpy(out, m->v.bits().data(), m->v.bits().size());
    return TK_OK;
}

tk_status tk_mask_read_pgm(const char* path, int fg_adjacency, tk_mask** out) {
    if (tk_status s = require(path && out, "null argument")) return s;
    return guarded([&] { make_handle(out, read_mask_pgm(path, fg_adjacency)); });
}

tk_status tk_mask_write_pgm(const tk_mask* m, const char* path) {
    if (tk_status s = require(m && path, "null argument")) return s;
    return guarded([&] { write_mask_pgm(m->v, path); });
}

/* ---- grid-core operations ---- */

tk_status tk_threshold(const tk_grid* g, double alpha, int fg_adjacency, tk_mask** out) {
    if (tk_status s = require(g && out, "null argument")) return s;
    return guarded([&] { make_handle(out, threshold(g->v, alpha, Adjacency{fg_adjacency})); });
}

tk_status tk_connected_components(const tk_mask* m, int which, int32_t* labels, int* count) {
    if (tk_status s = require(m && labels && count, "null argument")) return s;
    return guarded([&] {
        auto [l, c] = connected_components(
            m->v, which == 0 ? ComponentSet::foreground : ComponentSet::background);
        std::memcpy(labels, l.data(), l.size() * sizeof(int32_t));
        *count = c;
    });
}

tk_status tk_betti_numbers(const tk_mask* m, int64_t* b0, int64_t* b1, int64_t* b2) {
    if (tk_status s = require(m && b0 && b1, "null argument")) return s;
    return guarded([&] {
        BettiNumbers b = betti_numbers(m->v);
        *b0 = b.b0;
        *b1 = b.b1;
        if (b2) *b2 = b.b2;
    });
}

tk_status tk_distance_transform(const tk_mask* m, double* out) {
    if (tk_status s = require(m && out, "null argument")) return s;
    return guarded([&] {
        DistanceMap dm = distance_transform(m->v);
        std::memcpy(out, dm.distances.data(), dm.distances.size() * sizeof(double));
    });
}

/* ---- persistence ---- */

tk_status tk_diagram_compute(const tk_grid* g, int relative_frame, tk_diagram** out) {
    if (tk_status s = require(g && out, "null argument")) return s;
    return guarded([&] { make_handle(out, compute_diagram(g->v, relative_frame != 0)); });
}

tk_status tk_diagram_dim0_sweep(const tk_grid* g, int fg_adjacency, tk_diagram** out) {
    if (tk_status s = require(g && out, "null argument")) return s;
    return guarded([&] { make_handle(out, zero_dim_sweep(g->v, Adjacency{fg_adjacency})); });
}

void tk_diagram_free(tk_diagram* d) { delete d; }

tk_status tk_diagram_size(const tk_diagram* d, size_t* n) {
    if (tk_status s = require(d && n, "null argument")) return s;
    *n = d->v.dots().size();
    return TK_OK;
}

tk_status tk_diagram_dot(const tk_diagram* d, size_t i, tk_dot* out) {
    if (tk_status s = require(d && out, "null argument")) return s;
    if (tk_status s = require(i < d->v.dots().size(), "dot index out of range")) return s;
    const PersistentDot& dot = d->v.dots()[i];
    out->dim = dot.dim;
    out->birth = dot.birth;
    out->death = dot.death;
    out->birth_cell = dot.birth_cell;
    out->death_cell = dot.death_cell;
    out->essential = dot.essential ? 1 : 0;
    return TK_OK;
}

tk_status tk_diagram_write_csv(const tk_diagram* d, const char* path, int essential_death_mode) {
    if (tk_status s = require(d && path, "null argument")) return s;
    return guarded([&] {
        std::ostringstream os;
        write_diagram_csv(os, d->v,
                          essential_death_mode ? EssentialDeath::dies_at_one
                                               : EssentialDeath::grid_min);
        if (tk_status s = write_file(path, os.str())) throw std::runtime_error(tk_last_error());
    });
}

/* ---- topological loss / trigger prior ---- */

tk_status tk_topo_loss(const tk_grid* pred, const tk_grid* gt, int relative_frame, double* loss,
                       tk_targets** targets) {
    if (tk_status s = require(pred && gt && loss, "null argument")) return s;
    return guarded([&] {
        TopoLossResult r = topo_loss_with_targets(pred->v, gt->v, relative_frame != 0);
        *loss = r.loss;
        if (targets) make_handle(targets, std::move(r.targets));
    });
}

tk_status tk_trigger_loss(const tk_grid* mask_grid, double* loss, tk_targets** targets) {
    if (tk_status s = require(mask_grid && loss, "null argument")) return s;
    return guarded([&] {
        TriggerLossResult r = trigger_topo_loss(mask_grid->v);
        *loss = r.loss;
        if (targets) make_handle(targets, std::move(r.targets));
    });
}

void tk_targets_free(tk_targets* t) { delete t; }

tk_status tk_targets_size(const tk_targets* t, size_t* n) {
    if (tk_status s = require(t && n, "null argument")) return s;
    *n = t->v.size();
    return TK_OK;
}

tk_status tk_targets_get(const tk_targets* t, size_t i, tk_target* out) {
    if (tk_status s = require(t && out, "null argument")) return s;
    if (tk_status s = require(i < t->v.size(), "target index out of range")) return s;
    const GradientTarget& g = t->v[i];
    out->pixel = g.pixel;
    out->cell = g.cell;
    out->current = g.current;
    out->target = g.target;
    out->role = g.role == TargetRole::birth ? 0 : 1;
    return TK_OK;
}

tk_status tk_targets_write_csv(const tk_targets* t, const char* path) {
    if (tk_status s = require(t && path, "null argument")) return s;
    std::ostringstream os;
    write_targets_csv(os, t->v);
    return write_file(path, os.str());
}

/* ---- digital topology / warping ---- */

tk_status tk_is_simple(const tk_mask* m, int x, int y, int z, int* out) {
    if (tk_status s = require(m && out, "null argument")) return s;
    if (tk_status s = require(m->v.dims().contains(x, y, z), "pixel out of range")) return s;
    return guarded([&] { *out = is_simple(m->v, x, y, z) ? 1 : 0; });
}

tk_status tk_homotopy_warp(const tk_mask* source, const tk_mask* target, int repeat,
                           tk_mask** out) {
    if (tk_status s = require(source && target && out, "null argument")) return s;
    return guarded([&] { make_handle(out, homotopy_warp(source->v, target->v, repeat != 0)); });
}

tk_status tk_critical_masks(const tk_mask* pred, const tk_mask* gt, tk_mask** m_g, tk_mask** m_f,
                            tk_mask** m_union) {
    if (tk_status s = require(pred && gt && m_g && m_f && m_union, "null argument")) return s;
    return guarded([&] {
        CriticalMask cm = critical_masks(pred->v, gt->v);
        make_handle(m_g, std::move(cm.m_g));
        make_handle(m_f, std::move(cm.m_f));
        make_handle(m_union, std::move(cm.m));
    });
}

tk_status tk_warping_error(const tk_mask* pred, const tk_mask* gt, double* out) {
    if (tk_status s = require(pred && gt && out, "null argument")) return s;
    return guarded([&] { *out = warping_error(pred->v, gt->v); });
}

tk_status tk_warp_loss_mask(const tk_grid* pred_likelihood, const tk_mask* gt, tk_mask** out) {
    if (tk_status s = require(pred_likelihood && gt && out, "null argument")) return s;
    return guarded([&] { make_handle(out, warp_loss_mask(pred_likelihood->v, gt->v)); });
}

/* ---- discrete Morse / watershed ---- */

tk_status tk_skeleton_family(const tk_grid* g, double epsilon, tk_family** out) {
    if (tk_status s = require(g && out, "null argument")) return s;
    return guarded([&] { make_handle(out, skeleton_1d(g->v, epsilon)); });
}

tk_status tk_boundary_skeleton(const tk_mask* m, double epsilon, tk_family** out) {
    if (tk_status s = require(m && out, "null argument")) return s;
    return guarded([&] { make_handle(out, boundary_skeleton_from_mask(m->v, epsilon)); });
}

void tk_family_free(tk_family* f) { delete f; }

tk_status tk_family_size(const tk_family* f, size_t* n) {
    if (tk_status s = require(f && n, "null argument")) return s;
    *n = f->v.branches().size();
    return TK_OK;
}

tk_status tk_family_branch(const tk_family* f, size_t i, double* persistence,
                           size_t* pixel_count) {
    if (tk_status s = require(f, "null argument")) return s;
    if (tk_status s = require(i < f->v.branches().size(), "branch index out of range")) return s;
    if (persistence) *persistence = f->v.branches()[i].persistence;
    if (pixel_count) *pixel_count = f->v.branches()[i].pixels.size();
    return TK_OK;
}

tk_status tk_family_branch_pixels(const tk_family* f, size_t i, uint32_t* out) {
    if (tk_status s = require(f && out, "null argument")) return s;
    if (tk_status s = require(i < f->v.branches().size(), "branch index out of range")) return s;
    const auto& px = f->v.branches()[i].pixels;
    std::memcpy(out, px.data(), px.size() * sizeof(uint32_t));
    return TK_OK;
}

tk_status tk_family_query(const tk_family* f, double epsilon, tk_mask** out) {
    if (tk_status s = require(f && out, "null argument")) return s;
    return guarded([&] { make_handle(out, f->v.query(epsilon)); });
}

tk_status tk_family_write_csv(const tk_family* f, const char* path) {
    if (tk_status s = require(f && path, "null argument")) return s;
    std::ostringstream os;
    write_branches_csv(os, f->v);
    return write_file(path, os.str());
}

tk_status tk_ph_watershed(const tk_grid* g, double theta, tk_mask** out) {
    if (tk_status s = require(g && out, "null argument")) return s;
    return guarded([&] { make_handle(out, ph_watershed(g->v, theta)); });
}

tk_status tk_sheets_2d(const tk_grid* g, double epsilon, tk_mask** out) {
    if (tk_status s = require(g && out, "null argument")) return s;
    return guarded([&] { make_handle(out, sheets_2d_approx(g->v, epsilon)); });
}

tk_status tk_dmt_mask(const tk_grid* g, double epsilon, int include_sheets, tk_mask** out) {
    if (tk_status s = require(g && out, "null argument")) return s;
    return guarded([&] { make_handle(out, dmt_critical_mask(g->v, epsilon, include_sheets != 0)); });
}

/* ---- probabilistic structure layer ---- */

tk_status tk_branch_probabilities(const tk_family* f, double mu, double sigma, double* p_include,
                                  double* confidence, double* uncertainty) {
    if (tk_status s = require(f && p_include, "null argument")) return s;
    return guarded([&] {
        auto probs = branch_probabilities(f->v, GaussianThreshold{mu, sigma});
        for (std::size_t i = 0; i < probs.size(); ++i) {
            p_include[i] = probs[i].p_include;
            if (confidence) confidence[i] = probs[i].confidence;
            if (uncertainty) uncertainty[i] = probs[i].uncertainty;
        }
    });
}

tk_status tk_sample_skeleton(const tk_family* f, double mu, double sigma, uint64_t seed,
                             double* epsilon_used, tk_mask** skeleton) {
    if (tk_status s = require(f && skeleton, "null argument")) return s;
    return guarded([&] {
        SegmentationSample sample = sample_skeleton(f->v, GaussianThreshold{mu, sigma}, seed);
        if (epsilon_used) *epsilon_used = sample.epsilon_used;
        make_handle(skeleton, std::move(sample.skeleton));
    });
}

tk_status tk_grow_segmentation(const tk_mask* skeleton, const tk_mask* initial, tk_mask** out) {
    if (tk_status s = require(skeleton && initial && out, "null argument")) return s;
    return guarded([&] { make_handle(out, grow_segmentation(skeleton->v, initial->v)); });
}

tk_status tk_empirical_uncertainty(const tk_mask* const* samples, size_t n, tk_grid** out) {
    if (tk_status s = require(samples && out, "null argument")) return s;
    return guarded([&] {
        std::vector<BinaryMask> masks;
        masks.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            if (!samples[i]) throw std::invalid_argument("null sample handle");
            masks.push_back(samples[i]->v);
        }
        make_handle(out, empirical_uncertainty(masks));
    });
}

tk_status tk_skeleton_masked_loss(const tk_grid* likelihood, const tk_mask* gt,
                                  const tk_mask* skeleton, double* out) {
    if (tk_status s = require(likelihood && gt && skeleton && out, "null argument")) return s;
    return guarded([&] { *out = skeleton_masked_loss(likelihood->v, gt->v, skeleton->v); });
}

tk_status tk_kl_gaussians(double mu_q, double sigma_q, double mu_p, double sigma_p, double* out) {
    if (tk_status s = require(out != nullptr, "null argument")) return s;
    return guarded(
        [&] { *out = kl_gaussians(GaussianThreshold{mu_q, sigma_q}, GaussianThreshold{mu_p, sigma_p}); });
}

tk_status tk_derive_branch_labels(const tk_family* f, const tk_mask* gt, uint8_t* labels) {
    if (tk_status s = require(f && gt && labels, "null argument")) return s;
    return guarded([&] {
        auto l = derive_branch_labels(f->v, gt->v);
        std::memcpy(labels, l.data(), l.size());
    });
}

tk_status tk_proofread_simulate(const tk_family* f, double mu, double sigma,
                                const uint8_t* gt_branch_labels, int order, uint64_t seed,
                                const tk_mask* metric_gt, const tk_mask* initial,
                                tk_curve** out) {
    if (tk_status s = require(f && gt_branch_labels && metric_gt && out, "null argument"))
        return s;
    return guarded([&] {
        std::vector<std::uint8_t> labels(gt_branch_labels,
                                         gt_branch_labels + f->v.branches().size());
        auto curve = proofread_simulate(
            f->v, GaussianThreshold{mu, sigma}, labels,
            order == 0 ? ProofreadOrder::uncertainty_desc : ProofreadOrder::random, seed,
            metric_gt->v, initial ? &initial->v : nullptr);
        make_handle(out, std::move(curve));
    });
}

void tk_curve_free(tk_curve* c) { delete c; }

tk_status tk_curve_size(const tk_curve* c, size_t* n) {
    if (tk_status s = require(c && n, "null argument")) return s;
    *n = c->v.size();
    return TK_OK;
}

tk_status tk_curve_point(const tk_curve* c, size_t i, int* step, double* voi_out,
                         double* pixel_error) {
    if (tk_status s = require(c, "null argument")) return s;
    if (tk_status s = require(i < c->v.size(), "curve index out of range")) return s;
    if (step) *step = c->v[i].step;
    if (voi_out) *voi_out = c->v[i].voi;
    if (pixel_error) *pixel_error = c->v[i].pixel_error;
    return TK_OK;
}

tk_status tk_curve_write_csv(const tk_curve* c, const char* path) {
    if (tk_status s = require(c && path, "null argument")) return s;
    std::ostringstream os;
    write_curve_csv(os, c->v);
    return write_file(path, os.str());
}

/* ---- evaluation metrics ---- */

tk_status tk_overlap_scores(const tk_mask* pred, const tk_mask* gt, double* dice,
                            double* pixel_accuracy) {
    if (tk_status s = require(pred && gt && dice && pixel_accuracy, "null argument")) return s;
    return guarded([&] {
        OverlapScores sc = overlap_scores(pred->v, gt->v);
        *dice = sc.dice;
        *pixel_accuracy = sc.pixel_accuracy;
    });
}

tk_status tk_adapted_rand(const tk_mask* pred, const tk_mask* gt, int regions, double* out) {
    if (tk_status s = require(pred && gt && out, "null argument")) return s;
    return guarded([&] {
        *out = adapted_rand(pred->v, gt->v,
                            regions == 0 ? RegionsFrom::foreground : RegionsFrom::complement);
    });
}

tk_status tk_voi(const tk_mask* pred, const tk_mask* gt, int regions, double* total,
                 double* split, double* merge) {
    if (tk_status s = require(pred && gt && total, "null argument")) return s;
    return guarded([&] {
        VoiResult r =
            voi(pred->v, gt->v, regions == 0 ? RegionsFrom::foreground : RegionsFrom::complement);
        *total = r.total;
        if (split) *split = r.split;
        if (merge) *merge = r.merge;
    });
}

tk_status tk_betti_error(const tk_mask* pred, const tk_mask* gt, int patch, int n_patches,
                         uint64_t seed, int dim, double* out) {
    if (tk_status s = require(pred && gt && out, "null argument")) return s;
    return guarded([&] { *out = betti_error(pred->v, gt->v, patch, n_patches, seed, dim); });
}

/* ---- synthetic scenes ---- */

tk_status tk_synth(const char* scene, int size, uint64_t seed, tk_grid** grid, tk_mask** mask,
                   char** sidecar) {
    if (tk_status s = require(scene, "null argument")) return s;
    return guarded([&] {
        SynthScene sc = make_scene(scene, size, seed);
        if (grid) *grid = nullptr;
        if (mask) *mask = nullptr;
        if (sc.grid && grid) make_handle(grid, std::move(*sc.grid));
        if (sc.mask && mask) make_handle(mask, std::move(*sc.mask));
        if (sidecar) {
            *sidecar = static_cast<char*>(std::malloc(sc.sidecar_json.size() + 1));
            std::memcpy(*sidecar, sc.sidecar_json.c_str(), sc.sidecar_json.size() + 1);
        }
    });
}

void tk_string_free(char* s) { std::free(s); }

}  // extern "C"
