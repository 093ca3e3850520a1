#include "topokit/prob.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "topokit/metrics.hpp"

namespace topokit {

void GaussianThreshold::validate() const {
    if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma <= 0.0)
        throw std::invalid_argument("Gaussian threshold requires finite mu and sigma > 0");
}

double GaussianThreshold::cdf(double x) const {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    // Acklam's approximation
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    // one Halley refinement step
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(two_pi) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
    return x;
}

double SeededNormal::next() {
    // splitmix-style scrambling feeding the inverse CDF; one uniform in (0,1)
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    const double u = (double(z >> 11) + 0.5) * 0x1.0p-53;
    return normal_quantile(u);
}

std::vector<BranchProbability> branch_probabilities(const SkeletonFamily& family,
                                                    const GaussianThreshold& g) {
    g.validate();
    std::vector<BranchProbability> out;
    out.reserve(family.branches().size());
    for (std::size_t i = 0; i < family.branches().size(); ++i) {
        BranchProbability bp;
        bp.branch_id = i;
        bp.p_include = g.cdf(family.branches()[i].persistence);
        bp.confidence = std::abs(bp.p_include - 0.5);
        bp.uncertainty = 1.0 - 2.0 * bp.confidence;
        out.push_back(bp);
    }
    return out;
}

SegmentationSample sample_skeleton(const SkeletonFamily& family, const GaussianThreshold& g,
                                   std::uint64_t seed) {
    g.validate();
    SeededNormal rng(seed);
    SegmentationSample s;
    s.epsilon_used = g.mu + g.sigma * rng.next();
    s.skeleton = family.query(s.epsilon_used);
    s.segmentation = s.skeleton;
    return s;
}

BinaryMask grow_segmentation(const BinaryMask& skeleton, const BinaryMask& initial) {
    if (skeleton.dims() != initial.dims())
        throw std::invalid_argument("grow_segmentation: dims mismatch");
    auto [labels, count] = connected_components(initial, ComponentSet::foreground);
    std::vector<char> keep(std::size_t(count) + 1, 0);
    for (std::size_t i = 0; i < skeleton.dims().size(); ++i)
        if (skeleton.at(i) && labels[i] > 0) keep[labels[i]] = 1;

    BinaryMask out(initial.dims(), initial.adjacency());
    for (std::size_t i = 0; i < initial.dims().size(); ++i)
        out.set(i, (labels[i] > 0 && keep[labels[i]]) || skeleton.at(i));
    return out;
}

ScalarGrid empirical_uncertainty(const std::vector<BinaryMask>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("empirical_uncertainty needs at least 2 samples");
    const GridDims& g = samples.front().dims();
    for (const auto& s : samples)
        if (s.dims() != g) throw std::invalid_argument("empirical_uncertainty: dims mismatch");

    std::vector<double> var(g.size());
    const double n = double(samples.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double mean = 0;
        for (const auto& s : samples) mean += s.at(i) ? 1.0 : 0.0;
        mean /= n;
        var[i] = mean * (1.0 - mean);  // population variance of an indicator
    }
    return ScalarGrid(g, std::move(var));
}

double skeleton_masked_loss(const ScalarGrid& likelihood, const BinaryMask& gt,
                            const BinaryMask& skeleton) {
    const GridDims& g = likelihood.dims();
    if (gt.dims() != g || skeleton.dims() != g)
        throw std::invalid_argument("skeleton_masked_loss: dims mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!skeleton.at(i)) continue;
        double f = std::clamp(likelihood.at(i), 1e-7, 1.0 - 1e-7);
        sum += gt.at(i) ? -std::log(f) : -std::log(1.0 - f);
    }
    return sum / double(g.size());
}

double kl_gaussians(const GaussianThreshold& q, const GaussianThreshold& p) {
    q.validate();
    p.validate();
    const double dm = q.mu - p.mu;
    return std::log(p.sigma / q.sigma) +
           (q.sigma * q.sigma + dm * dm) / (2.0 * p.sigma * p.sigma) - 0.5;
}

std::vector<std::uint8_t> derive_branch_labels(const SkeletonFamily& family,
                                               const BinaryMask& gt) {
    if (family.dims() != gt.dims())
        throw std::invalid_argument("derive_branch_labels: dims mismatch");
    // near(p): p within one pixel (chebyshev) of a gt FG pixel
    DistanceMap dm = distance_transform(gt);
    const GridDims& g = gt.dims();
    std::vector<std::uint8_t> labels;
    labels.reserve(family.branches().size());
    for (const auto& br : family.branches()) {
        std::size_t near = 0;
        for (std::uint32_t p : br.pixels) {
            const bool is_near = gt.at(p) || dm.distances[p] <= std::sqrt(double(g.is3d() ? 3 : 2));
            if (is_near) ++near;
        }
        labels.push_back(br.pixels.empty() ? 0 : (2 * near >= br.pixels.size() ? 1 : 0));
    }
    return labels;
}

std::vector<ProofreadStep> proofread_simulate(const SkeletonFamily& family,
                                              const GaussianThreshold& g,
                                              const std::vector<std::uint8_t>& gt_branch_labels,
                                              ProofreadOrder order, std::uint64_t seed,
                                              const BinaryMask& metric_gt,
                                              const BinaryMask* initial) {
    g.validate();
    const auto& branches = family.branches();
    if (gt_branch_labels.size() != branches.size())
        throw std::invalid_argument("proofread_simulate: one label per branch required");
    if (family.dims() != metric_gt.dims())
        throw std::invalid_argument("proofread_simulate: dims mismatch");

    // Initial selection: the mu-threshold skeleton.
    std::vector<std::uint8_t> included(branches.size());
    for (std::size_t i = 0; i < branches.size(); ++i)
        included[i] = branches[i].persistence >= g.mu ? 1 : 0;

    auto render = [&]() {
        BinaryMask skel(family.dims(), Adjacency::for_dims(family.dims()));
        for (std::size_t i = 0; i < branches.size(); ++i)
            if (included[i])
                for (std::uint32_t p : branches[i].pixels) skel.set(p, true);
        return initial ? grow_segmentation(skel, *initial) : skel;
    };
    auto measure = [&](int step, std::vector<ProofreadStep>& curve) {
        BinaryMask seg = render();
        ProofreadStep s;
        s.step = step;
        s.voi = voi(seg, metric_gt).total;
        std::size_t bad = 0;
        for (std::size_t i = 0; i < seg.dims().size(); ++i)
            if (seg.at(i) != metric_gt.at(i)) ++bad;
        s.pixel_error = double(bad) / double(seg.dims().size());
        curve.push_back(s);
    };

    std::vector<std::size_t> wrong;
    for (std::size_t i = 0; i < branches.size(); ++i)
        if (included[i] != gt_branch_labels[i]) wrong.push_back(i);

    if (order == ProofreadOrder::uncertainty_desc) {
        auto probs = branch_probabilities(family, g);
        std::stable_sort(wrong.begin(), wrong.end(), [&](std::size_t a, std::size_t b) {
            if (probs[a].uncertainty != probs[b].uncertainty)
                return probs[a].uncertainty > probs[b].uncertainty;
            return a < b;
        });
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t i = wrong.size(); i > 1; --i)
            std::swap(wrong[i - 1], wrong[rng() % i]);
    }

    std::vector<ProofreadStep> curve;
    measure(0, curve);
    int step = 0;
    for (std::size_t idx : wrong) {
        included[idx] = gt_branch_labels[idx];
        measure(++step, curve);
    }
    return curve;
}

void write_curve_csv(std::ostream& os, const std::vector<ProofreadStep>& curve) {
    os << "step,voi,pixel_error\n";
    char b1[64], b2[64];
    for (const auto& s : curve) {
        std::snprintf(b1, sizeof(b1), "%.17g", s.voi);
        std::snprintf(b2, sizeof(b2), "%.17g", s.pixel_error);
        os << s.step << ',' << b1 << ',' << b2 << '\n';
    }
}

}  // namespace topokit
