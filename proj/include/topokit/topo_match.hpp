#pragma once

#include <optional>
#include <vector>

#include "topokit/persistence.hpp"

namespace topokit {

// Defaults follow the reported operating points: topological weight about
// 1e-4, warping weight 1e-4, trigger prior weight 10, skeleton/KL weights
// (1, 10), and a 65-pixel training patch.
struct LossWeights {
    double lambda_topo = 1e-4;
    double lambda_warp = 1e-4;
    double lambda_trigger = 10.0;
    double alpha_skeleton = 1.0;
    double beta_kl = 10.0;
    int patch_size = 65;

    void validate() const;
};

// One matched pair: a prediction dot against either a ground-truth dot or
// its own diagonal projection.
struct MatchPair {
    PersistentDot pred;
    double target_birth = 0.0;
    double target_death = 0.0;
    bool to_diagonal = false;
};

// Per-dimension corner matching. Ground-truth dots that found no prediction
// partner are kept as well: they pair with their own diagonal projections.
struct Matching {
    std::vector<MatchPair> pairs;
    std::vector<PersistentDot> unmatched_gt;

    double cost() const;
};

enum class TargetRole { birth, death };

// Assignment target for one critical pixel: pushing f(pixel) from `current`
// to `target` is the descent step of the quadratic loss; the gradient of the
// loss with respect to f(pixel) is 2*(current - target).
struct GradientTarget {
    std::uint64_t pixel = 0;   // pixel index in the original (unpadded) grid
    CellId cell = kNoCell;     // critical cell the pixel represents
    double current = 0.0;
    double target = 0.0;
    TargetRole role = TargetRole::birth;

    double gradient() const { return 2.0 * (current - target); }
};

// Corner-heuristic matching: per dimension, the |gt| prediction dots closest
// to (birth,death) = (1,0) in squared distance are matched to the gt dots;
// the rest go to their diagonal projections.
Matching match_diagrams(const PersistenceDiagram& pred, const PersistenceDiagram& gt);

// Sum of squared birth/death differences over all pairs (including the
// diagonal projections of surplus ground-truth dots).
double topo_loss(const Matching& matching);

// Two targets per matched prediction dot, at the birth and death critical
// pixels. Dots whose critical pixel sits on a synthetic frame border are
// skipped (those pixels are not part of the original grid), as is the death
// side of essential dots.
std::vector<GradientTarget> gradient_targets(const Matching& matching,
                                             const CubicalComplex& complex);

// Convenience: diagram + matching + loss + targets for a likelihood/gt pair.
struct TopoLossResult {
    double loss = 0.0;
    Matching matching;
    std::vector<GradientTarget> targets;
};
TopoLossResult topo_loss_with_targets(const ScalarGrid& pred, const ScalarGrid& gt,
                                      bool relative_frame);

// Connected-component prior of a trigger mask: squared persistence of every
// dim-0 dot except the most persistent one. Targets equalize birth and death
// of each penalized dot.
struct TriggerLossResult {
    double loss = 0.0;
    std::vector<GradientTarget> targets;
};
TriggerLossResult trigger_topo_loss(const ScalarGrid& mask_grid);

void write_targets_csv(std::ostream& os, const std::vector<GradientTarget>& targets);

}  // namespace topokit
