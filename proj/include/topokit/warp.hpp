#pragma once

#include <unordered_map>

#include "topokit/grid.hpp"

namespace topokit {

// Simple-point test for the mask's adjacency pair. 2D uses a 256-entry
// lookup over the 8-neighborhood bit pattern; 3D evaluates the analogous
// condition on the 26-neighborhood on demand and memoizes the answer.
// Out-of-bounds neighbors count as background.
class SimplePointOracle {
public:
    explicit SimplePointOracle(Adjacency adjacency, bool three_d);

    bool is_simple(const BinaryMask& mask, int x, int y, int z = 0) const;

    // Direct pattern tests (used by the exhaustive checks): bit i of the
    // pattern is the i-th neighbor in neighbor_offsets(8) / (26) order.
    bool simple_2d_pattern(unsigned pattern) const;
    bool simple_3d_pattern(std::uint32_t pattern) const;

private:
    Adjacency adjacency_;
    bool three_d_ = false;
    std::vector<std::uint8_t> table2d_;
    mutable std::unordered_map<std::uint32_t, bool> cache3d_;
};

bool is_simple(const BinaryMask& mask, int x, int y, int z = 0);

// Distance-ordered homotopy warping of `source` toward `target`: flips only
// simple points inside the initial disagreement set, visited in non-
// decreasing distance_transform(source) order (ties by linear index). With
// repeat_until_stable the remaining disagreements are re-scanned with a
// recomputed distance transform until no flip happens.
BinaryMask homotopy_warp(const BinaryMask& source, const BinaryMask& target,
                         bool repeat_until_stable = false);

struct CriticalMask {
    BinaryMask m_g;  // pred XOR warp(gt -> pred)
    BinaryMask m_f;  // gt XOR warp(pred -> gt)
    BinaryMask m;    // union
};

CriticalMask critical_masks(const BinaryMask& pred, const BinaryMask& gt);

// Fraction of pixels where warp(gt -> pred) still disagrees with pred.
double warping_error(const BinaryMask& pred, const BinaryMask& gt);

// Pixel-weight mask for a warping loss: M of critical_masks(threshold(pred,
// 0.5), gt).
BinaryMask warp_loss_mask(const ScalarGrid& pred_likelihood, const BinaryMask& gt);

}  // namespace topokit
