#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "topokit/grid.hpp"
#include "topokit/morse.hpp"

namespace topokit {

// Gaussian model over the persistence threshold epsilon.
struct GaussianThreshold {
    double mu = 0.0;
    double sigma = 1.0;

    void validate() const;
    double cdf(double x) const;  // P(eps <= x)
};

// Inverse standard normal CDF (Acklam's rational approximation, refined by a
// Halley step); deterministic across platforms for our purposes.
double normal_quantile(double p);

// Standard normal draw from a seeded mt19937_64 via the inverse CDF.
class SeededNormal {
public:
    explicit SeededNormal(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    double next();

private:
    std::uint64_t state_;
};

struct BranchProbability {
    std::size_t branch_id = 0;
    double p_include = 0.0;   // CDF of the Gaussian at the branch persistence
    double confidence = 0.0;  // |p_include - 0.5|
    double uncertainty = 0.0; // 1 - 2*confidence, in [0,1]
};

std::vector<BranchProbability> branch_probabilities(const SkeletonFamily& family,
                                                    const GaussianThreshold& g);

struct SegmentationSample {
    double epsilon_used = 0.0;
    BinaryMask skeleton;
    BinaryMask segmentation;
};

// Draws eps = mu + sigma*z with a seeded standard normal z and queries the
// family. Deterministic in the seed. The segmentation part is left equal to
// the skeleton; grow_segmentation refines it against an initial mask.
SegmentationSample sample_skeleton(const SkeletonFamily& family, const GaussianThreshold& g,
                                   std::uint64_t seed);

// Keeps exactly the FG components of `initial` that intersect the skeleton,
// plus the skeleton pixels themselves.
BinaryMask grow_segmentation(const BinaryMask& skeleton, const BinaryMask& initial);

// Per-pixel population variance of the FG indicator across samples.
ScalarGrid empirical_uncertainty(const std::vector<BinaryMask>& samples);

// Cross-entropy between gt and likelihood restricted to skeleton pixels,
// averaged over all pixels; likelihood clamped to [1e-7, 1-1e-7].
double skeleton_masked_loss(const ScalarGrid& likelihood, const BinaryMask& gt,
                            const BinaryMask& skeleton);

// Closed-form KL divergence D(q || p) of 1D Gaussians.
double kl_gaussians(const GaussianThreshold& q, const GaussianThreshold& p);

// Branch ground-truth labels for the proofreading simulation: a branch is
// correct (keep) iff at least half of its pixels lie within one pixel of the
// ground-truth foreground.
std::vector<std::uint8_t> derive_branch_labels(const SkeletonFamily& family,
                                               const BinaryMask& gt);

enum class ProofreadOrder { uncertainty_desc, random };

struct ProofreadStep {
    int step = 0;
    double voi = 0.0;
    double pixel_error = 0.0;
};

// Simulated interactive proofreading: start from the mu-threshold selection,
// flip one misclassified branch per step to its ground-truth label in the
// requested order, regrow, and record metrics. `initial` may be empty
// (dims.size()==0) to score the bare skeleton.
std::vector<ProofreadStep> proofread_simulate(const SkeletonFamily& family,
                                              const GaussianThreshold& g,
                                              const std::vector<std::uint8_t>& gt_branch_labels,
                                              ProofreadOrder order, std::uint64_t seed,
                                              const BinaryMask& metric_gt,
                                              const BinaryMask* initial = nullptr);

void write_curve_csv(std::ostream& os, const std::vector<ProofreadStep>& curve);

}  // namespace topokit
