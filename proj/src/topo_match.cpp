#include "topokit/topo_match.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace topokit {

void LossWeights::validate() const {
    for (double v : {lambda_topo, lambda_warp, lambda_trigger, alpha_skeleton, beta_kl})
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("loss weights must be finite and non-negative");
    if (patch_size < 1) throw std::invalid_argument("patch size must be positive");
}

namespace {

double corner_dist_sq(const PersistentDot& d) {
    const double db = d.birth - 1.0;
    const double dd = d.death - 0.0;
    return db * db + dd * dd;
}

}  // namespace

double Matching::cost() const {
    double sum = 0.0;
    for (const auto& p : pairs) {
        const double db = p.pred.birth - p.target_birth;
        const double dd = p.pred.death - p.target_death;
        sum += db * db + dd * dd;
    }
    for (const auto& g : unmatched_gt) {
        const double m = 0.5 * (g.birth + g.death);
        const double db = g.birth - m;
        const double dd = g.death - m;
        sum += db * db + dd * dd;
    }
    return sum;
}

Matching match_diagrams(const PersistenceDiagram& pred, const PersistenceDiagram& gt) {
    if (pred.dims() != gt.dims())
        throw std::invalid_argument("match_diagrams: diagrams computed over different dims");

    Matching out;
    const int max_dim = pred.dims().is3d() ? 2 : 1;
    for (int dim = 0; dim <= max_dim; ++dim) {
        std::vector<PersistentDot> p = pred.dots_of_dim(dim);
        std::vector<PersistentDot> g = gt.dots_of_dim(dim);
        auto by_corner = [](const PersistentDot& a, const PersistentDot& b) {
            const double da = corner_dist_sq(a), db = corner_dist_sq(b);
            if (da != db) return da < db;
            if (a.birth_cell != b.birth_cell) return a.birth_cell < b.birth_cell;
            return a.death_cell < b.death_cell;
        };
        std::sort(p.begin(), p.end(), by_corner);
        std::sort(g.begin(), g.end(), by_corner);

        const std::size_t k = g.size();
        for (std::size_t i = 0; i < p.size(); ++i) {
            MatchPair pair;
            pair.pred = p[i];
            if (i < k) {
                pair.target_birth = g[i].birth;
                pair.target_death = g[i].death;
            } else {
                const double m = 0.5 * (p[i].birth + p[i].death);
                pair.target_birth = m;
                pair.target_death = m;
                pair.to_diagonal = true;
            }
            out.pairs.push_back(pair);
        }
        for (std::size_t i = p.size(); i < k; ++i) out.unmatched_gt.push_back(g[i]);
    }
    return out;
}

double topo_loss(const Matching& matching) { return matching.cost(); }

namespace {

void push_target(std::vector<GradientTarget>& out, const CubicalComplex& complex, CellId cell,
                 double current, double target, TargetRole role) {
    const std::size_t pixel = complex.representative_pixel(cell);
    const std::uint64_t orig = complex.pixel_to_original(pixel);
    if (orig == kNoCell) return;  // synthetic frame pixel, not trainable
    GradientTarget t;
    t.pixel = orig;
    t.cell = cell;
    t.current = current;
    t.target = target;
    t.role = role;
    out.push_back(t);
}

}  // namespace

std::vector<GradientTarget> gradient_targets(const Matching& matching,
                                             const CubicalComplex& complex) {
    std::vector<GradientTarget> out;
    for (const auto& p : matching.pairs) {
        push_target(out, complex, p.pred.birth_cell, p.pred.birth, p.target_birth,
                    TargetRole::birth);
        if (!p.pred.essential)
            push_target(out, complex, p.pred.death_cell, p.pred.death, p.target_death,
                        TargetRole::death);
    }
    return out;
}

TopoLossResult topo_loss_with_targets(const ScalarGrid& pred, const ScalarGrid& gt,
                                      bool relative_frame) {
    if (pred.dims() != gt.dims())
        throw std::invalid_argument("topo_loss: prediction and ground truth dims differ");
    CubicalComplex pred_complex(pred, relative_frame);
    PersistenceDiagram pred_dgm = compute_diagram(pred_complex);
    PersistenceDiagram gt_dgm = compute_diagram(gt, relative_frame);

    TopoLossResult result;
    result.matching = match_diagrams(pred_dgm, gt_dgm);
    result.loss = result.matching.cost();
    result.targets = gradient_targets(result.matching, pred_complex);
    return result;
}

TriggerLossResult trigger_topo_loss(const ScalarGrid& mask_grid) {
    const PersistenceDiagram dgm = zero_dim_sweep(mask_grid, Adjacency::for_dims(mask_grid.dims()));
    CubicalComplex complex(mask_grid, false);

    const auto& dots = dgm.dots();
    TriggerLossResult result;
    if (dots.empty()) return result;

    // p*: the most persistent dot; ties by smaller birth cell id. The
    // essential dot spans [min,max] so it always wins.
    std::size_t best = 0;
    for (std::size_t i = 1; i < dots.size(); ++i) {
        const double pi = dots[i].persistence(), pb = dots[best].persistence();
        if (pi > pb || (pi == pb && dots[i].birth_cell < dots[best].birth_cell)) best = i;
    }
    for (std::size_t i = 0; i < dots.size(); ++i) {
        if (i == best) continue;
        const auto& d = dots[i];
        const double pers = d.persistence();
        result.loss += pers * pers;
        push_target(result.targets, complex, d.birth_cell, d.birth, d.death, TargetRole::birth);
        if (!d.essential)
            push_target(result.targets, complex, d.death_cell, d.death, d.birth,
                        TargetRole::death);
    }
    return result;
}

void write_targets_csv(std::ostream& os, const std::vector<GradientTarget>& targets) {
    os << "cell,current,target,role\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& t : targets) {
        os << t.cell << ',' << num(t.current) << ',' << num(t.target) << ','
           << (t.role == TargetRole::birth ? "birth" : "death") << '\n';
    }
}

}  // namespace topokit
