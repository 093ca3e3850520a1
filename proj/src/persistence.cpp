#include "topokit/persistence.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <ostream>

namespace topokit {

namespace {

void sort_dots(std::vector<PersistentDot>& dots) {
    std::sort(dots.begin(), dots.end(), [](const PersistentDot& a, const PersistentDot& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.birth != b.birth) return a.birth > b.birth;
        if (a.death != b.death) return a.death < b.death;
        return a.birth_cell < b.birth_cell;
    });
}

}  // namespace

PersistenceDiagram::PersistenceDiagram(GridDims dims, std::uint64_t provenance, double min_value,
                                       std::vector<PersistentDot> dots)
    : dims_(dims), provenance_(provenance), min_value_(min_value), dots_(std::move(dots)) {
    sort_dots(dots_);
}

std::vector<PersistentDot> PersistenceDiagram::dots_of_dim(int dim) const {
    std::vector<PersistentDot> out;
    for (const auto& d : dots_)
        if (d.dim == dim) out.push_back(d);
    return out;
}

long long PersistenceDiagram::alive_count(int dim, double alpha) const {
    long long n = 0;
    for (const auto& d : dots_)
        if (d.dim == dim && d.birth >= alpha && (d.essential || d.death < alpha)) ++n;
    return n;
}

std::uint64_t grid_provenance(const ScalarGrid& grid) {
    // FNV-1a over dims and raw value bits
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(std::uint64_t(grid.dims().w));
    mix(std::uint64_t(grid.dims().h));
    mix(std::uint64_t(grid.dims().d));
    for (double v : grid.values()) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        mix(bits);
    }
    return h;
}

PersistenceDiagram compute_diagram(const CubicalComplex& complex) {
    Pairing pairing = compute_pairing(complex);
    std::vector<PersistentDot> dots;
    for (const auto& p : pairing.pairs) {
        if (p.birth_value <= p.death_value) continue;  // zero persistence: invisible
        PersistentDot dot;
        dot.dim = p.dim;
        dot.birth = p.birth_value;
        dot.death = p.death_value;
        dot.birth_cell = p.birth;
        dot.death_cell = p.death;
        dots.push_back(dot);
    }
    const double min_v = complex.grid().min_value();
    for (CellId c : pairing.essential) {
        PersistentDot dot;
        dot.dim = complex.dim(c);
        dot.birth = complex.value(c);
        dot.death = min_v;
        dot.birth_cell = c;
        dot.death_cell = kNoCell;
        dot.essential = true;
        dots.push_back(dot);
    }
    return PersistenceDiagram(complex.grid_dims(), grid_provenance(complex.grid()), min_v,
                              std::move(dots));
}

PersistenceDiagram compute_diagram(const ScalarGrid& grid, bool relative_frame) {
    return compute_diagram(CubicalComplex(grid, relative_frame));
}

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
};

}  // namespace

PersistenceDiagram zero_dim_sweep(const ScalarGrid& grid, Adjacency adjacency) {
    const GridDims& g = grid.dims();
    adjacency.validate(g);
    const auto& offs = neighbor_offsets(adjacency.foreground);
    CubicalComplex complex(grid, false);

    std::vector<std::uint32_t> order(g.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (grid.at(a) != grid.at(b)) return grid.at(a) > grid.at(b);
        return a < b;
    });
    std::vector<std::uint32_t> rank(g.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    UnionFind uf(g.size());
    // Per-root component info: birth value and birth pixel.
    std::vector<double> birth(g.size());
    std::vector<std::uint32_t> birth_pixel(g.size());
    std::vector<char> present(g.size(), 0);

    std::vector<PersistentDot> dots;
    const bool complex_edges = adjacency.foreground == 4 || adjacency.foreground == 6;

    for (std::uint32_t p : order) {
        birth[p] = grid.at(p);
        birth_pixel[p] = p;
        present[p] = 1;
        int x = int(p % g.w), y = int((p / g.w) % g.h), z = int(p / (std::size_t(g.w) * g.h));

        // Gather edges to already-present neighbors; visit them in the
        // complex's tie order (ascending cell id) so death cells match the
        // matrix reduction exactly.
        struct Cand {
            CellId death_cell;
            std::uint32_t neighbor;
        };
        std::vector<Cand> cands;
        for (const auto& o : offs) {
            int nx = x + o[0], ny = y + o[1], nz = z + o[2];
            if (!g.contains(nx, ny, nz)) continue;
            std::uint32_t q = std::uint32_t(g.index(nx, ny, nz));
            if (!present[q]) continue;
            CellId dc;
            if (complex_edges && (std::abs(o[0]) + std::abs(o[1]) + std::abs(o[2]) == 1)) {
                dc = complex.cell_at(2 * x + o[0], 2 * y + o[1], 2 * z + o[2]);
            } else {
                dc = complex.vertex_cell(x, y, z);
            }
            cands.push_back({dc, q});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.death_cell != b.death_cell) return a.death_cell < b.death_cell;
            return a.neighbor < b.neighbor;
        });

        for (const auto& c : cands) {
            std::uint32_t ra = uf.find(p);
            std::uint32_t rb = uf.find(c.neighbor);
            if (ra == rb) continue;
            // Elder rule: the component with the lower birth value dies; ties
            // by later filtration rank of the birth pixel.
            std::uint32_t young = rb, old_r = ra;
            if (birth[ra] < birth[rb] ||
                (birth[ra] == birth[rb] && rank[birth_pixel[ra]] > rank[birth_pixel[rb]])) {
                young = ra;
                old_r = rb;
            }
            if (birth[young] > grid.at(p)) {
                PersistentDot dot;
                dot.dim = 0;
                dot.birth = birth[young];
                dot.death = grid.at(p);
                dot.birth_cell = complex.vertex_cell(int(birth_pixel[young] % g.w),
                                                     int((birth_pixel[young] / g.w) % g.h),
                                                     int(birth_pixel[young] / (std::size_t(g.w) * g.h)));
                dot.death_cell = c.death_cell;
                dots.push_back(dot);
            }
            uf.parent[young] = old_r;  // elder root keeps its birth
        }
    }

    // Essential components: surviving roots.
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        if (uf.find(i) != i) continue;
        PersistentDot dot;
        dot.dim = 0;
        dot.birth = birth[i];
        dot.death = grid.min_value();
        dot.birth_cell = complex.vertex_cell(int(birth_pixel[i] % g.w),
                                             int((birth_pixel[i] / g.w) % g.h),
                                             int(birth_pixel[i] / (std::size_t(g.w) * g.h)));
        dot.death_cell = kNoCell;
        dot.essential = true;
        dots.push_back(dot);
    }

    return PersistenceDiagram(g, grid_provenance(grid), grid.min_value(), std::move(dots));
}

void write_diagram_csv(std::ostream& os, const PersistenceDiagram& diagram, EssentialDeath mode) {
    os << "dim,birth,death,birth_cell,death_cell\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& d : diagram.dots()) {
        os << d.dim << ',' << num(d.birth) << ',';
        if (d.essential && mode == EssentialDeath::grid_min)
            os << "inf";
        else
            os << num(d.death_as(mode));
        os << ',' << d.birth_cell << ',';
        if (d.death_cell == kNoCell)
            os << '-';
        else
            os << d.death_cell;
        os << '\n';
    }
}

}  // namespace topokit
