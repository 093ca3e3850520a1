#include "topokit/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace topokit {

ScalarGrid::ScalarGrid(GridDims dims, std::vector<double> values)
    : dims_(dims), values_(std::move(values)) {
    dims_.validate();
    if (values_.size() != dims_.size())
        throw std::invalid_argument("scalar grid values length does not match dims");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("scalar grid contains non-finite value");
}

ScalarGrid::ScalarGrid(GridDims dims, double fill) : dims_(dims) {
    dims_.validate();
    if (!std::isfinite(fill)) throw std::invalid_argument("scalar grid fill must be finite");
    values_.assign(dims_.size(), fill);
}

double ScalarGrid::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double ScalarGrid::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

BinaryMask::BinaryMask(GridDims dims, Adjacency adjacency, bool fill)
    : dims_(dims), adjacency_(adjacency) {
    dims_.validate();
    adjacency_.validate(dims_);
    bits_.assign(dims_.size(), fill ? 1 : 0);
}

BinaryMask::BinaryMask(GridDims dims, Adjacency adjacency, std::vector<std::uint8_t> bits)
    : dims_(dims), adjacency_(adjacency), bits_(std::move(bits)) {
    dims_.validate();
    adjacency_.validate(dims_);
    if (bits_.size() != dims_.size())
        throw std::invalid_argument("mask bits length does not match dims");
    for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
}

BinaryMask BinaryMask::complement() const {
    BinaryMask out(dims_, adjacency_);
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] ? 0 : 1;
    return out;
}

BinaryMask BinaryMask::xor_with(const BinaryMask& other) const {
    if (dims_ != other.dims_) throw std::invalid_argument("mask xor: dims mismatch");
    BinaryMask out(dims_, adjacency_);
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] ^ other.bits_[i];
    return out;
}

BinaryMask BinaryMask::or_with(const BinaryMask& other) const {
    if (dims_ != other.dims_) throw std::invalid_argument("mask or: dims mismatch");
    BinaryMask out(dims_, adjacency_);
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | other.bits_[i];
    return out;
}

const std::vector<std::array<int, 3>>& neighbor_offsets(int connectivity) {
    static const std::vector<std::array<int, 3>> n4 = {
        {{1, 0, 0}}, {{-1, 0, 0}}, {{0, 1, 0}}, {{0, -1, 0}}};
    static const std::vector<std::array<int, 3>> n8 = [] {
        std::vector<std::array<int, 3>> v;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (dx || dy) v.push_back({{dx, dy, 0}});
        return v;
    }();
    static const std::vector<std::array<int, 3>> n6 = {{{1, 0, 0}},  {{-1, 0, 0}}, {{0, 1, 0}},
                                                       {{0, -1, 0}}, {{0, 0, 1}},  {{0, 0, -1}}};
    static const std::vector<std::array<int, 3>> n26 = [] {
        std::vector<std::array<int, 3>> v;
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (dx || dy || dz) v.push_back({{dx, dy, dz}});
        return v;
    }();
    switch (connectivity) {
        case 4: return n4;
        case 8: return n8;
        case 6: return n6;
        case 26: return n26;
    }
    throw std::invalid_argument("unsupported connectivity " + std::to_string(connectivity));
}

BinaryMask threshold(const ScalarGrid& grid, double alpha, Adjacency adjacency) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("threshold alpha must lie in (0,1)");
    BinaryMask out(grid.dims(), adjacency);
    const auto& v = grid.values();
    for (std::size_t i = 0; i < v.size(); ++i) out.set(i, v[i] >= alpha);
    return out;
}

BinaryMask threshold(const ScalarGrid& grid, double alpha) {
    return threshold(grid, alpha, Adjacency::for_dims(grid.dims()));
}

std::pair<std::vector<std::int32_t>, int> connected_components(const BinaryMask& mask,
                                                               ComponentSet which) {
    const GridDims& dims = mask.dims();
    const bool want = which == ComponentSet::foreground;
    const int conn =
        want ? mask.adjacency().foreground : mask.adjacency().background();
    const auto& offs = neighbor_offsets(conn);

    std::vector<std::int32_t> labels(dims.size(), 0);
    int count = 0;
    std::vector<std::size_t> stack;
    for (int z = 0; z < dims.d; ++z)
        for (int y = 0; y < dims.h; ++y)
            for (int x = 0; x < dims.w; ++x) {
                std::size_t i = dims.index(x, y, z);
                if (mask.at(i) != want || labels[i] != 0) continue;
                ++count;
                labels[i] = count;
                stack.assign(1, i);
                while (!stack.empty()) {
                    std::size_t cur = stack.back();
                    stack.pop_back();
                    int cx = int(cur % dims.w);
                    int cy = int((cur / dims.w) % dims.h);
                    int cz = int(cur / (std::size_t(dims.w) * dims.h));
                    for (const auto& o : offs) {
                        int nx = cx + o[0], ny = cy + o[1], nz = cz + o[2];
                        if (!dims.contains(nx, ny, nz)) continue;
                        std::size_t ni = dims.index(nx, ny, nz);
                        if (mask.at(ni) == want && labels[ni] == 0) {
                            labels[ni] = count;
                            stack.push_back(ni);
                        }
                    }
                }
            }
    return {std::move(labels), count};
}

namespace {

// Euler characteristic of the mask's cell complex. 4/6-adjacency uses the
// vertex construction (pixels are vertices, cells span all-FG blocks);
// 8/26-adjacency uses the closure of pixels as unit squares/cubes.
long long euler_characteristic(const BinaryMask& mask) {
    const GridDims& g = mask.dims();
    const int fg = mask.adjacency().foreground;
    auto at = [&](int x, int y, int z) { return g.contains(x, y, z) && mask.at(x, y, z); };

    long long V = 0, E = 0, F = 0, C = 0;
    if (fg == 4 || fg == 6) {
        for (int z = 0; z < g.d; ++z)
            for (int y = 0; y < g.h; ++y)
                for (int x = 0; x < g.w; ++x) {
                    if (!at(x, y, z)) continue;
                    ++V;
                    if (at(x + 1, y, z)) ++E;
                    if (at(x, y + 1, z)) ++E;
                    if (at(x, y, z + 1)) ++E;
                    if (at(x + 1, y, z) && at(x, y + 1, z) && at(x + 1, y + 1, z)) ++F;
                    if (at(x + 1, y, z) && at(x, y, z + 1) && at(x + 1, y, z + 1)) ++F;
                    if (at(x, y + 1, z) && at(x, y, z + 1) && at(x, y + 1, z + 1)) ++F;
                    bool cube = true;
                    for (int dz = 0; dz < 2 && cube; ++dz)
                        for (int dy = 0; dy < 2 && cube; ++dy)
                            for (int dx = 0; dx < 2 && cube; ++dx)
                                cube = at(x + dx, y + dy, z + dz);
                    if (cube) ++C;
                }
        return V - E + F - C;
    }

    // Closure construction: pixels are closed unit squares/cubes; count the
    // distinct corners, edges and faces of the union. A lattice element is
    // present iff any incident pixel is FG.
    auto any_pixel = [&](int x0, int x1, int y0, int y1, int z0, int z1) {
        for (int z = z0; z <= z1; ++z)
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x)
                    if (at(x, y, z)) return true;
        return false;
    };
    if (!g.is3d()) {
        for (int y = 0; y <= g.h; ++y)
            for (int x = 0; x <= g.w; ++x) {
                if (any_pixel(x - 1, x, y - 1, y, 0, 0)) ++V;
                if (x < g.w && any_pixel(x, x, y - 1, y, 0, 0)) ++E;
                if (y < g.h && any_pixel(x - 1, x, y, y, 0, 0)) ++E;
                if (x < g.w && y < g.h && at(x, y, 0)) ++F;
            }
        return V - E + F;
    }
    for (int z = 0; z <= g.d; ++z)
        for (int y = 0; y <= g.h; ++y)
            for (int x = 0; x <= g.w; ++x) {
                if (any_pixel(x - 1, x, y - 1, y, z - 1, z)) ++V;
                if (x < g.w && any_pixel(x, x, y - 1, y, z - 1, z)) ++E;
                if (y < g.h && any_pixel(x - 1, x, y, y, z - 1, z)) ++E;
                if (z < g.d && any_pixel(x - 1, x, y - 1, y, z, z)) ++E;
                if (x < g.w && y < g.h && any_pixel(x, x, y, y, z - 1, z)) ++F;
                if (x < g.w && z < g.d && any_pixel(x, x, y - 1, y, z, z)) ++F;
                if (y < g.h && z < g.d && any_pixel(x - 1, x, y, y, z, z)) ++F;
                if (x < g.w && y < g.h && z < g.d && at(x, y, z)) ++C;
            }
    return V - E + F - C;
}

}  // namespace

BettiNumbers betti_numbers(const BinaryMask& mask) {
    const GridDims& g = mask.dims();
    BettiNumbers out;
    out.b0 = connected_components(mask, ComponentSet::foreground).second;
    const long long chi = euler_characteristic(mask);
    if (!g.is3d()) {
        out.b1 = out.b0 - chi;
        return out;
    }
    // Cavities: background components (BG adjacency) not touching the bounding box.
    auto [labels, nbg] = connected_components(mask, ComponentSet::background);
    std::vector<char> touches(std::size_t(nbg) + 1, 0);
    for (int z = 0; z < g.d; ++z)
        for (int y = 0; y < g.h; ++y)
            for (int x = 0; x < g.w; ++x) {
                if (x > 0 && x < g.w - 1 && y > 0 && y < g.h - 1 && z > 0 && z < g.d - 1)
                    continue;
                std::int32_t l = labels[g.index(x, y, z)];
                if (l > 0) touches[l] = 1;
            }
    long long cavities = 0;
    for (int l = 1; l <= nbg; ++l)
        if (!touches[l]) ++cavities;
    out.b2 = cavities;
    out.b1 = out.b0 + out.b2 - chi;
    return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Felzenszwalb-Huttenlocher 1D squared distance transform of a sampled
// function f; writes the lower envelope values into out. Entries with
// f == +inf carry no parabola.
void edt_1d(const std::vector<double>& f, std::vector<double>& out, int n) {
    static thread_local std::vector<int> v;
    static thread_local std::vector<double> z;
    v.assign(std::size_t(n), 0);
    z.assign(std::size_t(n) + 1, 0.0);
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
                   (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
                (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) out[q] = kInf;
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        double dq = double(q) - v[j];
        out[q] = dq * dq + f[v[j]];
    }
}

// Exact squared EDT to the set marked true, separable pass per axis.
std::vector<double> squared_edt(const GridDims& g, const std::vector<std::uint8_t>& set_bits) {
    std::vector<double> dist(g.size());
    for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = set_bits[i] ? 0.0 : kInf;

    std::vector<double> line, out;
    // x pass
    line.resize(g.w);
    out.resize(g.w);
    for (int z = 0; z < g.d; ++z)
        for (int y = 0; y < g.h; ++y) {
            for (int x = 0; x < g.w; ++x) line[x] = dist[g.index(x, y, z)];
            edt_1d(line, out, g.w);
            for (int x = 0; x < g.w; ++x) dist[g.index(x, y, z)] = out[x];
        }
    // y pass
    line.resize(g.h);
    out.resize(g.h);
    for (int z = 0; z < g.d; ++z)
        for (int x = 0; x < g.w; ++x) {
            for (int y = 0; y < g.h; ++y) line[y] = dist[g.index(x, y, z)];
            edt_1d(line, out, g.h);
            for (int y = 0; y < g.h; ++y) dist[g.index(x, y, z)] = out[y];
        }
    if (g.d > 1) {
        line.resize(g.d);
        out.resize(g.d);
        for (int y = 0; y < g.h; ++y)
            for (int x = 0; x < g.w; ++x) {
                for (int z = 0; z < g.d; ++z) line[z] = dist[g.index(x, y, z)];
                edt_1d(line, out, g.d);
                for (int z = 0; z < g.d; ++z) dist[g.index(x, y, z)] = out[z];
            }
    }
    return dist;
}

}  // namespace

DistanceMap distance_transform(const BinaryMask& mask) {
    const GridDims& g = mask.dims();
    std::vector<std::uint8_t> fg(g.size()), bg(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        fg[i] = mask.at(i) ? 1 : 0;
        bg[i] = mask.at(i) ? 0 : 1;
    }
    std::vector<double> to_fg = squared_edt(g, fg);
    std::vector<double> to_bg = squared_edt(g, bg);

    DistanceMap out;
    out.dims = g;
    out.distances.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double sq = mask.at(i) ? to_bg[i] : to_fg[i];
        out.distances[i] = sq == kInf ? kInf : std::sqrt(sq);
    }
    return out;
}

}  // namespace topokit
