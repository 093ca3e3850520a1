#include "topokit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace topokit {

namespace {

using nlohmann::json;

BinaryMask ring_mask(int size) {
    GridDims g{size, size, 1};
    BinaryMask m(g, Adjacency{4});
    const double c = (size - 1) / 2.0;
    const double outer = size * 0.38, inner = size * 0.2;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double r = std::hypot(x - c, y - c);
            m.set(x, y, r <= outer && r >= inner);
        }
    return m;
}

// Full horizontal bar through the middle of the image.
BinaryMask bar_mask(int size) {
    GridDims g{size, size, 1};
    BinaryMask m(g, Adjacency{4});
    int y0 = size * 2 / 5, y1 = size * 3 / 5;
    int x0 = size / 8, x1 = size - size / 8;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) m.set(x, y, true);
    return m;
}

// Same bar split by a background gap in the middle, with a geometric bump
// attached below the left half (topologically irrelevant error).
BinaryMask broken_bar_mask(int size) {
    BinaryMask m = bar_mask(size);
    int gap0 = size / 2 - size / 16, gap1 = size / 2 + size / 16;
    int y0 = size * 2 / 5, y1 = size * 3 / 5;
    for (int y = y0; y < y1; ++y)
        for (int x = gap0; x < gap1; ++x) m.set(x, y, false);
    // bump under the left half, attached to it
    int bx0 = size / 6, bx1 = size / 3, by1 = std::min(size, y1 + size / 6);
    for (int y = y1; y < by1; ++y)
        for (int x = bx0; x < bx1; ++x) m.set(x, y, true);
    return m;
}

ScalarGrid two_peak_grid(int size) {
    GridDims g{size, size, 1};
    ScalarGrid f(g, 0.05);
    const int ridge_y = size / 2;
    const double cx1 = size * 0.25, cx2 = size * 0.75;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double along = 0.0;
            // ridge profile: two peaks with a dip between them
            double d1 = std::abs(x - cx1), d2 = std::abs(x - cx2);
            double peak = std::max(0.9 - 0.012 * d1 * size / 32.0, 0.9 - 0.012 * d2 * size / 32.0);
            along = std::max(0.05, peak);
            double fall = std::abs(y - ridge_y);
            double v = along * std::exp(-fall * fall / (2.0 * (size / 16.0) * (size / 16.0)));
            f.set(x, y, std::max(0.05, std::min(0.95, v)));
        }
    return f;
}

ScalarGrid xcross_grid(int size) {
    GridDims g{size, size, 1};
    ScalarGrid f(g, 0.05);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double d1 = std::abs(x - y);
            double d2 = std::abs(x + y - (size - 1));
            double v = 0.9 * std::exp(-std::min(d1, d2) * std::min(d1, d2) / 8.0);
            f.set(x, y, std::max(0.05, v));
        }
    return f;
}

BinaryMask dumbbell_mask(int size) {
    GridDims g{size, size, 1};
    BinaryMask m(g, Adjacency{4});
    const double cy = (size - 1) / 2.0;
    const double r = size * 0.22;
    const double cx1 = size * 0.27, cx2 = size * 0.73;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            bool in1 = std::hypot(x - cx1, y - cy) <= r;
            bool in2 = std::hypot(x - cx2, y - cy) <= r;
            m.set(x, y, in1 || in2);
        }
    return m;
}

ScalarGrid yframe_grid(int size) {
    GridDims g{size, size, 1};
    ScalarGrid f(g, 0.0);
    int cx = size / 2;
    // stem from bottom border to center, two arms to the top corners
    for (int y = size / 2; y < size; ++y) f.set(cx, y, 1.0);
    for (int i = 0; i <= size / 2; ++i) {
        int y = size / 2 - i;
        if (y < 0) break;
        if (cx - i >= 0) f.set(cx - i, y, 1.0);
        if (cx + i < size) f.set(cx + i, y, 1.0);
    }
    return f;
}

BinaryMask blobs_mask(int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    int k = 2 + int(rng() % 3);
    GridDims g{size, size, 1};
    BinaryMask m(g, Adjacency{4});
    int cells = int(std::ceil(std::sqrt(double(k))));
    int step = size / cells;
    int placed = 0;
    for (int gy = 0; gy < cells && placed < k; ++gy)
        for (int gx = 0; gx < cells && placed < k; ++gx) {
            int x0 = gx * step + step / 4, y0 = gy * step + step / 4;
            int x1 = x0 + step / 2, y1 = y0 + step / 2;
            for (int y = y0; y < std::min(y1, size); ++y)
                for (int x = x0; x < std::min(x1, size); ++x) m.set(x, y, true);
            ++placed;
        }
    return m;
}

}  // namespace

ScalarGrid smoothed_noise_grid(int w, int h, std::uint64_t seed, int blur_passes) {
    std::mt19937_64 rng(seed);
    GridDims g{w, h, 1};
    std::vector<double> v(g.size());
    for (auto& x : v) x = double(rng() >> 11) * 0x1.0p-53;
    // box blur
    std::vector<double> tmp(v.size());
    for (int pass = 0; pass < blur_passes; ++pass) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double s = 0;
                int n = 0;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = x + dx, ny = y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        s += v[g.index(nx, ny)];
                        ++n;
                    }
                tmp[g.index(x, y)] = s / n;
            }
        v.swap(tmp);
    }
    // normalize to [0.01, 0.99] and force pairwise-distinct values by a
    // rank-based epsilon that cannot reorder anything
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    double span = hi > lo ? hi - lo : 1.0;
    for (auto& x : v) x = 0.01 + 0.98 * (x - lo) / span;
    std::vector<std::uint32_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return v[a] < v[b]; });
    for (std::size_t r = 0; r < idx.size(); ++r) v[idx[r]] += 1e-9 * double(r);
    return ScalarGrid(g, std::move(v));
}

BinaryMask random_mask(int w, int h, std::uint64_t seed, double fg_prob, Adjacency adj) {
    std::mt19937_64 rng(seed);
    GridDims g{w, h, 1};
    std::vector<std::uint8_t> bits(g.size());
    for (auto& b : bits) b = (double(rng() >> 11) * 0x1.0p-53) < fg_prob ? 1 : 0;
    return BinaryMask(g, adj, std::move(bits));
}

ScalarGrid distinct_random_grid(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GridDims g{w, h, 1};
    std::vector<double> v(g.size());
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) v[i] = 0.02 + 0.96 * double(i) / double(n - 1);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(v[i], v[rng() % (i + 1)]);
    return ScalarGrid(g, std::move(v));
}

std::vector<std::string> synth_scene_names() {
    return {"ring",   "bars",   "bars-broken", "two-peak", "xcross",
            "dumbbell", "yframe", "smooth",      "blobs"};
}

SynthScene make_scene(const std::string& name, int size, std::uint64_t seed) {
    if (size < 8) throw std::invalid_argument("synth scene size must be >= 8");
    SynthScene s;
    s.name = name;
    json meta;
    meta["scene"] = name;
    meta["size"] = size;
    meta["seed"] = seed;

    if (name == "ring") {
        s.mask = ring_mask(size);
        meta["betti"] = {1, 1};
    } else if (name == "bars") {
        s.mask = bar_mask(size);
        meta["betti"] = {1, 0};
    } else if (name == "bars-broken") {
        s.mask = broken_bar_mask(size);
        meta["betti"] = {2, 0};
        meta["note"] = "bar split by a gap, plus an attached bump that is topologically irrelevant";
    } else if (name == "two-peak") {
        s.grid = two_peak_grid(size);
        meta["peaks"] = 2;
        meta["skeleton"] = "horizontal ridge through the two peaks";
    } else if (name == "xcross") {
        s.grid = xcross_grid(size);
        meta["skeleton"] = "the two diagonals";
    } else if (name == "dumbbell") {
        s.mask = dumbbell_mask(size);
        meta["betti"] = {2, 0};
        meta["note"] = "two blobs separated by a narrow background channel";
    } else if (name == "yframe") {
        s.grid = yframe_grid(size);
        meta["betti_with_frame"] = {1, 2};
    } else if (name == "smooth") {
        s.grid = smoothed_noise_grid(size, size, seed);
        meta["values"] = "pairwise distinct";
    } else if (name == "blobs") {
        s.mask = blobs_mask(size, seed);
        auto b = betti_numbers(*s.mask);
        meta["betti"] = {b.b0, b.b1};
    } else {
        throw std::invalid_argument("unknown synth scene '" + name + "'");
    }
    s.sidecar_json = meta.dump(2);
    return s;
}

}  // namespace topokit
