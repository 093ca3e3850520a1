#include "topokit/cubical.hpp"

#include <algorithm>
#include <cmath>

namespace topokit {

namespace {

ScalarGrid maybe_pad(const ScalarGrid& grid, bool frame) {
    if (!frame) return grid;
    const GridDims& g = grid.dims();
    GridDims p{g.w + 2, g.h + 2, g.is3d() ? g.d + 2 : 1};
    ScalarGrid padded(p, 1.0);
    for (int z = 0; z < g.d; ++z)
        for (int y = 0; y < g.h; ++y)
            for (int x = 0; x < g.w; ++x)
                padded.set(x + 1, y + 1, g.is3d() ? z + 1 : 0, grid.at(x, y, z));
    return padded;
}

}  // namespace

CubicalComplex::CubicalComplex(const ScalarGrid& grid, bool relative_frame)
    : grid_(maybe_pad(grid, relative_frame)), relative_frame_(relative_frame) {
    const GridDims& g = grid_.dims();
    dw_ = 2 * g.w - 1;
    dh_ = 2 * g.h - 1;
    dd_ = 2 * g.d - 1;
    cell_count_ = CellId(dw_) * CellId(dh_) * CellId(dd_);

    values_.resize(cell_count_);
    for (int cz = 0; cz < dd_; ++cz)
        for (int cy = 0; cy < dh_; ++cy)
            for (int cx = 0; cx < dw_; ++cx) {
                double v = grid_.at(cx / 2, cy / 2, cz / 2);
                if (cx & 1) v = std::min(v, grid_.at(cx / 2 + 1, cy / 2, cz / 2));
                if (cy & 1) {
                    v = std::min(v, grid_.at(cx / 2, cy / 2 + 1, cz / 2));
                    if (cx & 1) v = std::min(v, grid_.at(cx / 2 + 1, cy / 2 + 1, cz / 2));
                }
                if (cz & 1) {
                    v = std::min(v, grid_.at(cx / 2, cy / 2, cz / 2 + 1));
                    if (cx & 1) v = std::min(v, grid_.at(cx / 2 + 1, cy / 2, cz / 2 + 1));
                    if (cy & 1) {
                        v = std::min(v, grid_.at(cx / 2, cy / 2 + 1, cz / 2 + 1));
                        if ((cx & 1) && (cy & 1))
                            v = std::min(v, grid_.at(cx / 2 + 1, cy / 2 + 1, cz / 2 + 1));
                    }
                }
                values_[cell_at(cx, cy, cz)] = v;
            }
}

int CubicalComplex::dim(CellId c) const {
    int cx, cy, cz;
    coords(c, cx, cy, cz);
    return (cx & 1) + (cy & 1) + (cz & 1);
}

int CubicalComplex::facets(CellId c, CellId out[6]) const {
    int cx, cy, cz;
    coords(c, cx, cy, cz);
    int n = 0;
    if (cx & 1) {
        out[n++] = cell_at(cx - 1, cy, cz);
        out[n++] = cell_at(cx + 1, cy, cz);
    }
    if (cy & 1) {
        out[n++] = cell_at(cx, cy - 1, cz);
        out[n++] = cell_at(cx, cy + 1, cz);
    }
    if (cz & 1) {
        out[n++] = cell_at(cx, cy, cz - 1);
        out[n++] = cell_at(cx, cy, cz + 1);
    }
    return n;
}

int CubicalComplex::cofacets(CellId c, CellId out[6]) const {
    int cx, cy, cz;
    coords(c, cx, cy, cz);
    int n = 0;
    if (!(cx & 1)) {
        if (cx > 0) out[n++] = cell_at(cx - 1, cy, cz);
        if (cx + 1 < dw_) out[n++] = cell_at(cx + 1, cy, cz);
    }
    if (!(cy & 1)) {
        if (cy > 0) out[n++] = cell_at(cx, cy - 1, cz);
        if (cy + 1 < dh_) out[n++] = cell_at(cx, cy + 1, cz);
    }
    if (!(cz & 1)) {
        if (cz > 0) out[n++] = cell_at(cx, cy, cz - 1);
        if (cz + 1 < dd_) out[n++] = cell_at(cx, cy, cz + 1);
    }
    return n;
}

int CubicalComplex::vertex_pixels(CellId c, std::size_t out[8]) const {
    int cx, cy, cz;
    coords(c, cx, cy, cz);
    const GridDims& g = grid_.dims();
    int n = 0;
    for (int dz = 0; dz <= (cz & 1); ++dz)
        for (int dy = 0; dy <= (cy & 1); ++dy)
            for (int dx = 0; dx <= (cx & 1); ++dx)
                out[n++] = g.index(cx / 2 + dx, cy / 2 + dy, cz / 2 + dz);
    return n;
}

std::size_t CubicalComplex::representative_pixel(CellId c) const {
    std::size_t px[8];
    int n = vertex_pixels(c, px);
    std::size_t best = px[0];
    for (int i = 1; i < n; ++i) {
        if (grid_.at(px[i]) < grid_.at(best) ||
            (grid_.at(px[i]) == grid_.at(best) && px[i] < best))
            best = px[i];
    }
    return best;
}

bool CubicalComplex::pixel_in_frame(std::size_t pixel) const {
    if (!relative_frame_) return false;
    const GridDims& g = grid_.dims();
    int x = int(pixel % g.w);
    int y = int((pixel / g.w) % g.h);
    int z = int(pixel / (std::size_t(g.w) * g.h));
    if (x == 0 || x == g.w - 1 || y == 0 || y == g.h - 1) return true;
    if (g.is3d() && (z == 0 || z == g.d - 1)) return true;
    return false;
}

std::uint64_t CubicalComplex::pixel_to_original(std::size_t pixel) const {
    if (!relative_frame_) return pixel;
    if (pixel_in_frame(pixel)) return kNoCell;
    const GridDims& g = grid_.dims();
    int x = int(pixel % g.w);
    int y = int((pixel / g.w) % g.h);
    int z = int(pixel / (std::size_t(g.w) * g.h));
    GridDims orig{g.w - 2, g.h - 2, g.is3d() ? g.d - 2 : 1};
    return orig.index(x - 1, y - 1, g.is3d() ? z - 1 : 0);
}

const std::vector<CellId>& CubicalComplex::filtration_order() const {
    if (order_.empty() && cell_count_ > 0) {
        order_.resize(cell_count_);
        for (CellId c = 0; c < cell_count_; ++c) order_[c] = c;
        std::stable_sort(order_.begin(), order_.end(), [this](CellId a, CellId b) {
            if (values_[a] != values_[b]) return values_[a] > values_[b];
            int da = dim(a), db = dim(b);
            if (da != db) return da < db;
            return a < b;
        });
    }
    return order_;
}

Pairing compute_pairing(const CubicalComplex& complex) {
    const auto& order = complex.filtration_order();
    const CellId n = complex.cell_count();

    std::vector<std::uint32_t> pos(n);
    for (CellId i = 0; i < n; ++i) pos[order[i]] = std::uint32_t(i);

    // Column of position j = positions of facets of cell order[j], sorted asc.
    std::vector<std::vector<std::uint32_t>> columns(n);
    std::vector<std::uint32_t> pivot_owner(n, ~0u);  // row -> column that has it as pivot
    std::vector<char> cleared(n, 0);

    Pairing result;
    result.pairs.reserve(n / 2);

    std::vector<std::uint32_t> scratch;
    auto add_into = [&](std::vector<std::uint32_t>& dst, const std::vector<std::uint32_t>& src) {
        scratch.clear();
        std::set_symmetric_difference(dst.begin(), dst.end(), src.begin(), src.end(),
                                      std::back_inserter(scratch));
        dst.swap(scratch);
    };

    const int top = complex.top_dim();
    CellId facet_buf[6];
    for (int d = top; d >= 1; --d) {
        for (CellId j = 0; j < n; ++j) {
            CellId cell = order[j];
            if (complex.dim(cell) != d || cleared[j]) continue;
            auto& col = columns[j];
            col.clear();
            int nf = complex.facets(cell, facet_buf);
            for (int i = 0; i < nf; ++i) col.push_back(pos[facet_buf[i]]);
            std::sort(col.begin(), col.end());

            while (!col.empty()) {
                std::uint32_t low = col.back();
                std::uint32_t owner = pivot_owner[low];
                if (owner == ~0u) break;
                add_into(col, columns[owner]);
            }
            if (!col.empty()) {
                std::uint32_t low = col.back();
                pivot_owner[low] = std::uint32_t(j);
                cleared[low] = 1;  // clearing: the birth cell's own column is zero
                CellId birth = order[low];
                PersistencePair pair;
                pair.birth = birth;
                pair.death = cell;
                pair.dim = d - 1;
                pair.birth_value = complex.value(birth);
                pair.death_value = complex.value(cell);
                result.pairs.push_back(pair);
            }
        }
    }

    std::vector<char> paired(n, 0);
    for (const auto& p : result.pairs) {
        paired[pos[p.birth]] = 1;
        paired[pos[p.death]] = 1;
    }
    for (CellId j = 0; j < n; ++j)
        if (!paired[j]) result.essential.push_back(order[j]);
    return result;
}

}  // namespace topokit
