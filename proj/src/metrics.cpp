#include "topokit/metrics.hpp"

#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

namespace topokit {

OverlapScores overlap_scores(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.dims() != gt.dims()) throw std::invalid_argument("overlap_scores: dims mismatch");
    std::size_t inter = 0, np = 0, ng = 0, match = 0;
    const std::size_t n = pred.dims().size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool p = pred.at(i), g = gt.at(i);
        np += p;
        ng += g;
        inter += p && g;
        match += p == g;
    }
    OverlapScores s;
    s.dice = (np + ng) == 0 ? 1.0 : 2.0 * double(inter) / double(np + ng);
    s.pixel_accuracy = double(match) / double(n);
    return s;
}

namespace {

std::vector<std::int32_t> region_labels(const BinaryMask& mask, RegionsFrom regions) {
    if (regions == RegionsFrom::foreground)
        return connected_components(mask, ComponentSet::foreground).first;
    return connected_components(mask, ComponentSet::background).first;
}

}  // namespace

double adapted_rand(const BinaryMask& pred, const BinaryMask& gt, RegionsFrom regions) {
    if (pred.dims() != gt.dims()) throw std::invalid_argument("adapted_rand: dims mismatch");
    std::vector<std::int32_t> lp = region_labels(pred, regions);
    std::vector<std::int32_t> lg = region_labels(gt, regions);

    // foreground restriction: only pixels with a nonzero gt label count
    std::map<std::pair<std::int32_t, std::int32_t>, double> joint;
    std::map<std::int32_t, double> sum_p, sum_g;
    double n = 0;
    for (std::size_t i = 0; i < lp.size(); ++i) {
        if (lg[i] == 0) continue;
        joint[{lp[i], lg[i]}] += 1;
        sum_p[lp[i]] += 1;
        sum_g[lg[i]] += 1;
        n += 1;
    }
    if (n == 0) throw std::invalid_argument("adapted_rand: ground truth has no foreground");

    double sum_joint_sq = 0, sum_p_sq = 0, sum_g_sq = 0;
    for (const auto& [k, v] : joint) sum_joint_sq += v * v;
    for (const auto& [k, v] : sum_p) sum_p_sq += v * v;
    for (const auto& [k, v] : sum_g) sum_g_sq += v * v;

    const double precision = sum_joint_sq / sum_p_sq;
    const double recall = sum_joint_sq / sum_g_sq;
    return 2.0 * precision * recall / (precision + recall);
}

VoiResult voi(const BinaryMask& pred, const BinaryMask& gt, RegionsFrom regions) {
    if (pred.dims() != gt.dims()) throw std::invalid_argument("voi: dims mismatch");
    std::vector<std::int32_t> lp = region_labels(pred, regions);
    std::vector<std::int32_t> lg = region_labels(gt, regions);

    std::map<std::pair<std::int32_t, std::int32_t>, double> joint;
    std::map<std::int32_t, double> sum_p, sum_g;
    const double n = double(lp.size());
    for (std::size_t i = 0; i < lp.size(); ++i) {
        joint[{lp[i], lg[i]}] += 1;
        sum_p[lp[i]] += 1;
        sum_g[lg[i]] += 1;
    }

    // H(pred|gt) = H(pred,gt) - H(gt); H(gt|pred) symmetric
    double h_joint = 0, h_p = 0, h_g = 0;
    for (const auto& [k, v] : joint) h_joint -= v / n * std::log(v / n);
    for (const auto& [k, v] : sum_p) h_p -= v / n * std::log(v / n);
    for (const auto& [k, v] : sum_g) h_g -= v / n * std::log(v / n);

    VoiResult r;
    r.split = h_joint - h_g;
    r.merge = h_joint - h_p;
    r.total = r.split + r.merge;
    return r;
}

double betti_error(const BinaryMask& pred, const BinaryMask& gt, int patch, int n_patches,
                   std::uint64_t seed, int dim) {
    if (pred.dims() != gt.dims()) throw std::invalid_argument("betti_error: dims mismatch");
    const GridDims& g = pred.dims();
    if (patch < 1 || patch > g.w || patch > g.h || (g.is3d() && patch > g.d))
        throw std::invalid_argument("betti_error: patch must fit inside the grid");
    if (n_patches < 1) throw std::invalid_argument("betti_error: n_patches must be positive");
    if (dim < 0) dim = g.is3d() ? 2 : 1;

    auto crop = [&](const BinaryMask& m, int x0, int y0, int z0, int side) {
        GridDims pd{side, side, g.is3d() ? side : 1};
        BinaryMask out(pd, m.adjacency());
        for (int z = 0; z < pd.d; ++z)
            for (int y = 0; y < side; ++y)
                for (int x = 0; x < side; ++x)
                    out.set(x, y, z, m.at(x0 + x, y0 + y, g.is3d() ? z0 + z : 0));
        return out;
    };
    auto pick = [](const BettiNumbers& b, int d) {
        switch (d) {
            case 0: return b.b0;
            case 1: return b.b1;
            default: return b.b2;
        }
    };

    std::mt19937_64 rng(seed);
    double total = 0;
    for (int i = 0; i < n_patches; ++i) {
        const int x0 = int(rng() % std::uint64_t(g.w - patch + 1));
        const int y0 = int(rng() % std::uint64_t(g.h - patch + 1));
        const int z0 = g.is3d() ? int(rng() % std::uint64_t(g.d - patch + 1)) : 0;
        const BettiNumbers bp = betti_numbers(crop(pred, x0, y0, z0, patch));
        const BettiNumbers bg = betti_numbers(crop(gt, x0, y0, z0, patch));
        total += std::abs(double(pick(bp, dim)) - double(pick(bg, dim)));
    }
    return total / double(n_patches);
}

}  // namespace topokit
