#pragma once

#include <cstdint>

#include "topokit/grid.hpp"

namespace topokit {

struct OverlapScores {
    double dice = 0.0;
    double pixel_accuracy = 0.0;
};

// dice = 2|P&G| / (|P|+|G|), defined as 1 when both masks are empty;
// accuracy = matching pixels / total.
OverlapScores overlap_scores(const BinaryMask& pred, const BinaryMask& gt);

// Which component labeling the clustering metrics compare: the foreground
// components themselves, or the components of the complement (regions
// bounded by membranes).
enum class RegionsFrom { foreground, complement };

// F-score of the foreground-restricted Rand index: both masks are component-
// labeled, pixels whose gt label is zero are excluded, precision/recall come
// from squared contingency sums. Throws when gt has no foreground.
double adapted_rand(const BinaryMask& pred, const BinaryMask& gt,
                    RegionsFrom regions = RegionsFrom::foreground);

struct VoiResult {
    double total = 0.0;
    double split = 0.0;  // H(pred | gt)
    double merge = 0.0;  // H(gt | pred)
};

// Variation of information between the component labelings (natural log),
// computed over all pixels with the unselected set as label 0.
VoiResult voi(const BinaryMask& pred, const BinaryMask& gt,
              RegionsFrom regions = RegionsFrom::foreground);

// Mean absolute Betti-number difference of dimension `dim` over seeded
// random aligned patches. dim < 0 selects the default: 1 in 2D, 2 in 3D.
double betti_error(const BinaryMask& pred, const BinaryMask& gt, int patch, int n_patches,
                   std::uint64_t seed, int dim = -1);

}  // namespace topokit
