#include "topokit/warp.hpp"

#include <algorithm>
#include <numeric>

namespace topokit {

namespace {

// Component counting within a punched neighborhood (center excluded).
// `cells` flags membership per neighbor index, `offsets` gives positions.
// Returns the number of connected components under `conn` adjacency that
// contain at least one cell adjacent to the center under `touch_conn`.
template <std::size_t N>
int punched_components(const std::array<std::uint8_t, N>& cells,
                       const std::vector<std::array<int, 3>>& offsets, int conn, int touch_conn) {
    auto adjacent = [](const std::array<int, 3>& a, const std::array<int, 3>& b, int c) {
        const int dx = std::abs(a[0] - b[0]);
        const int dy = std::abs(a[1] - b[1]);
        const int dz = std::abs(a[2] - b[2]);
        if (dx == 0 && dy == 0 && dz == 0) return false;
        switch (c) {
            case 4:
            case 6: return dx + dy + dz == 1;
            case 8:
            case 26: return dx <= 1 && dy <= 1 && dz <= 1;
        }
        return false;
    };
    auto touches_center = [&](const std::array<int, 3>& a) {
        const int dx = std::abs(a[0]), dy = std::abs(a[1]), dz = std::abs(a[2]);
        switch (touch_conn) {
            case 4:
            case 6: return dx + dy + dz == 1;
            case 8:
            case 26: return dx <= 1 && dy <= 1 && dz <= 1;
        }
        return false;
    };

    std::array<int, N> comp;
    comp.fill(-1);
    int ncomp = 0;
    std::array<std::size_t, N> stack;
    int counted = 0;
    for (std::size_t s = 0; s < N; ++s) {
        if (!cells[s] || comp[s] >= 0) continue;
        const int id = ncomp++;
        bool touches = false;
        std::size_t top = 0;
        stack[top++] = s;
        comp[s] = id;
        while (top > 0) {
            std::size_t cur = stack[--top];
            if (touches_center(offsets[cur])) touches = true;
            for (std::size_t t = 0; t < N; ++t) {
                if (!cells[t] || comp[t] >= 0) continue;
                if (adjacent(offsets[cur], offsets[t], conn)) {
                    comp[t] = id;
                    stack[top++] = t;
                }
            }
        }
        if (touches) ++counted;
    }
    return counted;
}

bool in_n18(const std::array<int, 3>& o) {
    return std::abs(o[0]) + std::abs(o[1]) + std::abs(o[2]) <= 2;
}

}  // namespace

SimplePointOracle::SimplePointOracle(Adjacency adjacency, bool three_d)
    : adjacency_(adjacency), three_d_(three_d) {
    if (!three_d_) {
        table2d_.resize(256);
        for (unsigned pat = 0; pat < 256; ++pat) {
            const auto& offs = neighbor_offsets(8);
            std::array<std::uint8_t, 8> fg{}, bg{};
            for (int i = 0; i < 8; ++i) {
                fg[i] = (pat >> i) & 1u;
                bg[i] = fg[i] ^ 1u;
            }
            const int fg_conn = adjacency_.foreground;
            const int bg_conn = adjacency_.background();
            const int nfg = punched_components<8>(fg, offs, fg_conn, fg_conn);
            const int nbg = punched_components<8>(bg, offs, bg_conn, bg_conn);
            table2d_[pat] = (nfg == 1 && nbg == 1) ? 1 : 0;
        }
    }
}

bool SimplePointOracle::simple_2d_pattern(unsigned pattern) const { return table2d_[pattern] != 0; }

bool SimplePointOracle::simple_3d_pattern(std::uint32_t pattern) const {
    auto it = cache3d_.find(pattern);
    if (it != cache3d_.end()) return it->second;

    const auto& offs = neighbor_offsets(26);
    std::array<std::uint8_t, 26> fg{}, bg{};
    for (int i = 0; i < 26; ++i) {
        fg[i] = (pattern >> i) & 1u;
        bg[i] = fg[i] ^ 1u;
    }
    bool simple;
    if (adjacency_.foreground == 6) {
        // FG components live in the 18-neighborhood under 6-adjacency and
        // must be face-adjacent to the center; BG components in the full
        // 26-neighborhood.
        std::array<std::uint8_t, 26> fg18 = fg;
        for (int i = 0; i < 26; ++i)
            if (!in_n18(offs[i])) fg18[i] = 0;
        const int nfg = punched_components<26>(fg18, offs, 6, 6);
        const int nbg = punched_components<26>(bg, offs, 26, 26);
        simple = nfg == 1 && nbg == 1;
    } else {
        std::array<std::uint8_t, 26> bg18 = bg;
        for (int i = 0; i < 26; ++i)
            if (!in_n18(offs[i])) bg18[i] = 0;
        const int nfg = punched_components<26>(fg, offs, 26, 26);
        const int nbg = punched_components<26>(bg18, offs, 6, 6);
        simple = nfg == 1 && nbg == 1;
    }
    cache3d_.emplace(pattern, simple);
    return simple;
}

bool SimplePointOracle::is_simple(const BinaryMask& mask, int x, int y, int z) const {
    const GridDims& g = mask.dims();
    if (!three_d_) {
        const auto& offs = neighbor_offsets(8);
        unsigned pat = 0;
        for (int i = 0; i < 8; ++i) {
            int nx = x + offs[i][0], ny = y + offs[i][1];
            if (g.contains(nx, ny) && mask.at(nx, ny)) pat |= 1u << i;
        }
        return table2d_[pat] != 0;
    }
    const auto& offs = neighbor_offsets(26);
    std::uint32_t pat = 0;
    for (int i = 0; i < 26; ++i) {
        int nx = x + offs[i][0], ny = y + offs[i][1], nz = z + offs[i][2];
        if (g.contains(nx, ny, nz) && mask.at(nx, ny, nz)) pat |= std::uint32_t(1) << i;
    }
    return simple_3d_pattern(pat);
}

bool is_simple(const BinaryMask& mask, int x, int y, int z) {
    SimplePointOracle oracle(mask.adjacency(), mask.dims().is3d());
    return oracle.is_simple(mask, x, y, z);
}

BinaryMask homotopy_warp(const BinaryMask& source, const BinaryMask& target,
                         bool repeat_until_stable) {
    if (source.dims() != target.dims())
        throw std::invalid_argument("homotopy_warp: dims mismatch");
    if (!(source.adjacency() == target.adjacency()))
        throw std::invalid_argument("homotopy_warp: adjacency mismatch");

    const GridDims& g = source.dims();
    SimplePointOracle oracle(source.adjacency(), g.is3d());
    BinaryMask working = source;

    bool first_pass = true;
    while (true) {
        std::vector<std::uint32_t> candidates;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (working.at(i) != target.at(i)) candidates.push_back(std::uint32_t(i));
        if (candidates.empty()) break;

        // First pass orders by the initial mask's distance transform per the
        // distance-ordered schedule; repeat passes recompute it.
        DistanceMap dm = distance_transform(first_pass ? source : working);
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](std::uint32_t a, std::uint32_t b) {
                             if (dm.distances[a] != dm.distances[b])
                                 return dm.distances[a] < dm.distances[b];
                             return a < b;
                         });

        std::size_t flips = 0;
        for (std::uint32_t i : candidates) {
            const int x = int(i % g.w);
            const int y = int((i / g.w) % g.h);
            const int z = int(i / (std::size_t(g.w) * g.h));
            if (oracle.is_simple(working, x, y, z)) {
                working.set(i, target.at(i));
                ++flips;
            }
        }
        first_pass = false;
        if (!repeat_until_stable || flips == 0) break;
    }
    return working;
}

CriticalMask critical_masks(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.dims() != gt.dims())
        throw std::invalid_argument("critical_masks: dims mismatch");
    BinaryMask gt_adj(gt.dims(), pred.adjacency(), gt.bits());
    CriticalMask out{
        pred.xor_with(homotopy_warp(gt_adj, pred)),
        gt_adj.xor_with(homotopy_warp(pred, gt_adj)),
        BinaryMask(),
    };
    out.m = out.m_g.or_with(out.m_f);
    return out;
}

double warping_error(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.dims() != gt.dims())
        throw std::invalid_argument("warping_error: dims mismatch");
    BinaryMask gt_adj(gt.dims(), pred.adjacency(), gt.bits());
    BinaryMask warped = homotopy_warp(gt_adj, pred);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < pred.dims().size(); ++i)
        if (warped.at(i) != pred.at(i)) ++bad;
    return double(bad) / double(pred.dims().size());
}

BinaryMask warp_loss_mask(const ScalarGrid& pred_likelihood, const BinaryMask& gt) {
    if (pred_likelihood.dims() != gt.dims())
        throw std::invalid_argument("warp_loss_mask: dims mismatch");
    BinaryMask pred = threshold(pred_likelihood, 0.5, gt.adjacency());
    return critical_masks(pred, gt).m;
}

}  // namespace topokit
