#include "topokit/morse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace topokit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// Cancellation machinery: counts V-paths between a critical pair and
// reverses the path when it is unique.
class MorseCancellation {
public:
    explicit MorseCancellation(VectorField& field) : field_(field) {}

    // Attempts to cancel the pair (death, birth); death is one dimension up.
    bool try_cancel(CellId death, CellId birth) {
        memo_.clear();
        if (count_paths(death, death, birth) != 1) return false;

        // Walk the unique path and reverse it.
        std::vector<CellId> seq;  // delta_0, gamma_1, delta_1, ..., gamma_{s+1}
        seq.push_back(death);
        CellId u = death;
        while (true) {
            CellId facet_buf[6];
            const int nf = field_.complex_->facets(u, facet_buf);
            const CellId skip = u == death ? kNoCell : field_.partner_down_[u];
            CellId next_facet = kNoCell;
            CellId next_up = kNoCell;
            for (int i = 0; i < nf; ++i) {
                CellId f = facet_buf[i];
                if (f == skip) continue;
                if (f == birth) {
                    next_facet = f;
                    next_up = kNoCell;
                    break;
                }
                CellId w = field_.partner_up_[f];
                if (w != kNoCell && w != u && path_count(w) > 0) {
                    next_facet = f;
                    next_up = w;
                    break;
                }
            }
            seq.push_back(next_facet);
            if (next_facet == birth) break;
            seq.push_back(next_up);
            u = next_up;
        }

        // seq = d0, g1, d1, g2, ..., ds, g_{s+1}; pair d_{i-1} with g_i.
        for (std::size_t i = 0; i + 1 < seq.size(); i += 2) {
            CellId d = seq[i];
            CellId g = seq[i + 1];
            field_.partner_down_[d] = g;
            field_.partner_up_[g] = d;
        }
        ++field_.pair_count_;
        return true;
    }

private:
    // Number of V-paths (capped at 2) from u to `target`; `start` facets are
    // unrestricted, deeper cells skip the facet they are paired with.
    int count_paths(CellId u, CellId start, CellId target) {
        start_ = start;
        target_ = target;
        return count_rec(u);
    }

    int path_count(CellId u) const {
        auto it = memo_.find(u);
        return it == memo_.end() ? 0 : it->second;
    }

    int count_rec(CellId u) {
        auto it = memo_.find(u);
        if (it != memo_.end()) {
            if (it->second == kInProgress)
                throw std::logic_error("cyclic V-path encountered during cancellation");
            return it->second;
        }
        memo_[u] = kInProgress;
        int total = 0;
        CellId facet_buf[6];
        const int nf = field_.complex_->facets(u, facet_buf);
        const CellId skip = u == start_ ? kNoCell : field_.partner_down_[u];
        for (int i = 0; i < nf && total < 2; ++i) {
            CellId f = facet_buf[i];
            if (f == skip) continue;
            if (f == target_) {
                ++total;
                continue;
            }
            CellId w = field_.partner_up_[f];
            if (w != kNoCell && w != u) total += count_rec(w);
        }
        if (total > 2) total = 2;
        memo_[u] = total;
        return total;
    }

    static constexpr int kInProgress = -1;
    VectorField& field_;
    CellId start_ = kNoCell;
    CellId target_ = kNoCell;
    std::unordered_map<CellId, int> memo_;
};

VectorField::VectorField(const CubicalComplex& complex, double epsilon)
    : complex_(std::make_shared<CubicalComplex>(complex)), epsilon_(epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("build_field: epsilon must be >= 0");
    const CellId n = complex_->cell_count();
    partner_up_.assign(n, kNoCell);
    partner_down_.assign(n, kNoCell);
    persistence_.assign(n, kInf);

    Pairing pairing = compute_pairing(*complex_);
    for (const auto& p : pairing.pairs) {
        persistence_[p.birth] = p.persistence();
        persistence_[p.death] = p.persistence();
    }

    std::vector<std::uint32_t> idx(pairing.pairs.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        const auto& pa = pairing.pairs[a];
        const auto& pb = pairing.pairs[b];
        if (pa.persistence() != pb.persistence()) return pa.persistence() < pb.persistence();
        if (pa.death != pb.death) return pa.death < pb.death;
        return pa.birth < pb.birth;
    });

    MorseCancellation cancel(*this);
    for (std::uint32_t i : idx) {
        const auto& p = pairing.pairs[i];
        if (!(p.persistence() < epsilon)) continue;
        cancel.try_cancel(p.death, p.birth);
    }
}

std::vector<CellId> VectorField::critical_cells() const {
    std::vector<CellId> out;
    for (CellId c = 0; c < partner_up_.size(); ++c)
        if (is_critical(c)) out.push_back(c);
    return out;
}

void VectorField::check_invariants() const {
    const CubicalComplex& cx = *complex_;
    CellId facet_buf[6];
    for (CellId c = 0; c < partner_up_.size(); ++c) {
        if (partner_up_[c] != kNoCell) {
            if (partner_down_[partner_up_[c]] != c)
                throw std::logic_error("V-pair not mutual");
            bool found = false;
            int nf = cx.facets(partner_up_[c], facet_buf);
            for (int i = 0; i < nf; ++i) found |= facet_buf[i] == c;
            if (!found) throw std::logic_error("V-pair not facet/coface related");
        }
        if (partner_up_[c] != kNoCell && partner_down_[c] != kNoCell)
            throw std::logic_error("cell appears in two V-pairs");
    }
    // Acyclicity: the V-path step relation u -> w (w = up-partner of a facet
    // of u other than u's own pair) must be a DAG at every dimension level.
    std::vector<std::uint8_t> color(partner_up_.size(), 0);  // 0 white, 1 grey, 2 black
    std::vector<std::pair<CellId, int>> stack;
    auto next_cells = [&](CellId u, std::vector<CellId>& out) {
        out.clear();
        CellId fb[6];
        int nf = cx.facets(u, fb);
        for (int i = 0; i < nf; ++i) {
            if (fb[i] == partner_down_[u]) continue;
            CellId w = partner_up_[fb[i]];
            if (w != kNoCell && w != u) out.push_back(w);
        }
    };
    std::vector<CellId> nexts;
    for (CellId c = 0; c < partner_up_.size(); ++c) {
        if (partner_down_[c] == kNoCell || color[c] != 0) continue;
        stack.assign(1, {c, 0});
        color[c] = 1;
        while (!stack.empty()) {
            auto& [u, stage] = stack.back();
            next_cells(u, nexts);
            if (stage < int(nexts.size())) {
                CellId w = nexts[stage++];
                if (color[w] == 1) throw std::logic_error("cyclic V-path");
                if (color[w] == 0) {
                    color[w] = 1;
                    stack.push_back({w, 0});
                }
            } else {
                color[u] = 2;
                stack.pop_back();
            }
        }
    }
}

VectorField build_field(const ScalarGrid& grid, double epsilon) {
    return VectorField(CubicalComplex(grid, false), epsilon);
}

SkeletonFamily::SkeletonFamily(GridDims dims, double base_epsilon, std::vector<Branch> branches)
    : dims_(dims), base_epsilon_(base_epsilon), branches_(std::move(branches)) {
    std::sort(branches_.begin(), branches_.end(), [](const Branch& a, const Branch& b) {
        if (a.persistence != b.persistence) return a.persistence > b.persistence;
        return a.saddle < b.saddle;
    });
}

BinaryMask SkeletonFamily::query(double eps) const {
    BinaryMask out(dims_, Adjacency::for_dims(dims_));
    for (const auto& br : branches_) {
        if (!(br.persistence >= eps)) break;  // sorted descending
        for (std::uint32_t p : br.pixels) out.set(p, true);
    }
    return out;
}

namespace {

std::vector<std::uint32_t> rasterize_cells(const CubicalComplex& cx,
                                           const std::vector<CellId>& cells) {
    std::vector<std::uint32_t> pixels;
    std::size_t px[8];
    for (CellId c : cells) {
        int n = cx.vertex_pixels(c, px);
        for (int i = 0; i < n; ++i) pixels.push_back(std::uint32_t(px[i]));
    }
    std::sort(pixels.begin(), pixels.end());
    pixels.erase(std::unique(pixels.begin(), pixels.end()), pixels.end());
    return pixels;
}

// Ridge arm from a saddle endpoint: follow vertex-edge V-pairs until a
// critical vertex (maximum).
std::vector<CellId> trace_arm(const VectorField& field, CellId vertex) {
    std::vector<CellId> cells;
    const CubicalComplex& cx = field.complex();
    CellId facet_buf[6];
    CellId v = vertex;
    cells.push_back(v);
    while (field.partner_up(v) != kNoCell) {
        CellId e = field.partner_up(v);
        cells.push_back(e);
        int nf = cx.facets(e, facet_buf);
        v = facet_buf[0] == v ? facet_buf[1] : facet_buf[0];
        cells.push_back(v);
    }
    return cells;
}

}  // namespace

SkeletonFamily skeleton_1d(const VectorField& field) {
    const CubicalComplex& cx = field.complex();
    std::vector<Branch> branches;
    CellId facet_buf[6];
    for (CellId c = 0; c < cx.cell_count(); ++c) {
        if (cx.dim(c) != 1 || !field.is_critical(c)) continue;
        Branch br;
        br.saddle = c;
        br.persistence = field.cell_persistence(c);
        int nf = cx.facets(c, facet_buf);
        std::vector<CellId> left = trace_arm(field, facet_buf[0]);
        std::vector<CellId> right = nf > 1 ? trace_arm(field, facet_buf[1]) : std::vector<CellId>();
        br.cells.assign(left.rbegin(), left.rend());
        br.cells.push_back(c);
        br.cells.insert(br.cells.end(), right.begin(), right.end());
        br.pixels = rasterize_cells(cx, br.cells);
        branches.push_back(std::move(br));
    }
    return SkeletonFamily(cx.grid_dims(), field.epsilon(), std::move(branches));
}

SkeletonFamily skeleton_1d(const ScalarGrid& grid, double epsilon) {
    return skeleton_1d(build_field(grid, epsilon));
}

namespace {

// Ascending-value union-find sweep over the 4-connectivity pixel graph.
// Components whose younger side has persistence >= theta are never merged;
// the meeting edges are tagged as watershed edges.
struct SweepResult {
    std::vector<std::uint32_t> root;  // final root pixel per pixel
    std::vector<std::pair<std::uint32_t, std::uint32_t>> watershed_edges;
    struct Event {
        std::uint32_t young_root;
        std::uint32_t old_root;
        double pers;
        double t;
    };
    std::vector<Event> events;
};

SweepResult watershed_sweep(const ScalarGrid& grid, double theta, bool record_events) {
    const GridDims& g = grid.dims();
    if (g.is3d()) throw std::invalid_argument("watershed sweep requires a 2D grid");

    std::vector<std::uint32_t> order(g.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (grid.at(a) != grid.at(b)) return grid.at(a) < grid.at(b);
        return a < b;
    });
    std::vector<std::uint32_t> rank(g.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    std::vector<std::uint32_t> parent(g.size());
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&parent](std::uint32_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };

    std::vector<double> birth(g.size());
    std::vector<char> present(g.size(), 0);
    SweepResult out;

    const int offs[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    for (std::uint32_t v : order) {
        birth[v] = grid.at(v);
        present[v] = 1;
        const int x = int(v % g.w), y = int(v / g.w);
        const double t = grid.at(v);
        for (const auto& o : offs) {
            const int nx = x + o[0], ny = y + o[1];
            if (!g.contains(nx, ny)) continue;
            const std::uint32_t u = std::uint32_t(g.index(nx, ny));
            if (!present[u]) continue;
            std::uint32_t rv = find(v), ru = find(u);
            if (rv == ru) continue;  // loop edge
            // younger basin: larger birth value; ties by later sweep rank
            std::uint32_t young = ru, old_r = rv;
            if (birth[rv] > birth[ru] ||
                (birth[rv] == birth[ru] && rank[rv] > rank[ru])) {
                young = rv;
                old_r = ru;
            }
            const double pers = t - birth[young];
            if (pers >= theta) {
                out.watershed_edges.emplace_back(u, v);
                continue;
            }
            if (record_events) out.events.push_back({young, old_r, pers, t});
            parent[young] = old_r;
        }
    }

    out.root.resize(g.size());
    for (std::uint32_t i = 0; i < g.size(); ++i) out.root[i] = find(i);
    return out;
}

}  // namespace

BinaryMask ph_watershed(const ScalarGrid& grid, double theta) {
    SweepResult sweep = watershed_sweep(grid, theta, false);
    BinaryMask out(grid.dims(), Adjacency{4});
    for (const auto& [u, v] : sweep.watershed_edges) {
        out.set(u, true);
        out.set(v, true);
    }
    return out;
}

BinaryMask sheets_2d_approx(const ScalarGrid& grid, double epsilon) {
    SweepResult sweep = watershed_sweep(grid, epsilon, false);
    const GridDims& g = grid.dims();
    BinaryMask out(g, Adjacency{4});
    for (int y = 0; y < g.h; ++y)
        for (int x = 0; x < g.w; ++x) {
            const std::uint32_t a = std::uint32_t(g.index(x, y));
            for (int axis = 0; axis < 2; ++axis) {
                const int nx = x + (axis == 0 ? 1 : 0), ny = y + (axis == 1 ? 1 : 0);
                if (!g.contains(nx, ny)) continue;
                const std::uint32_t b = std::uint32_t(g.index(nx, ny));
                if (sweep.root[a] == sweep.root[b]) continue;
                // crest pixel: the higher endpoint, ties to the smaller index
                const std::uint32_t crest =
                    grid.at(a) > grid.at(b) ? a : (grid.at(b) > grid.at(a) ? b : std::min(a, b));
                out.set(crest, true);
            }
        }
    return out;
}

BinaryMask dmt_critical_mask(const ScalarGrid& likelihood, double epsilon, bool include_sheets) {
    if (likelihood.dims().is3d())
        throw std::invalid_argument("dmt_critical_mask requires a 2D grid");
    SkeletonFamily family = skeleton_1d(likelihood, epsilon);
    BinaryMask out = family.query(epsilon);
    if (include_sheets) out = out.or_with(sheets_2d_approx(likelihood, epsilon));
    return out;
}

SkeletonFamily boundary_skeleton_from_mask(const BinaryMask& mask, double epsilon) {
    const GridDims& g = mask.dims();
    if (g.is3d()) throw std::invalid_argument("boundary_skeleton_from_mask requires a 2D mask");
    const std::size_t fg = mask.count();
    if (fg == 0 || fg == g.size()) return SkeletonFamily(g, epsilon, {});

    // Background-side distance field: 0 on the blobs, Euclidean distance
    // to the nearest blob elsewhere.
    DistanceMap dm = distance_transform(mask);
    std::vector<double> d(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) d[i] = mask.at(i) ? 0.0 : dm.distances[i];
    ScalarGrid dist_grid(g, std::move(d));

    // Basin structure: only zero-persistence merges allowed, so every flat
    // minimum (each blob) keeps its own basin.
    SweepResult base = watershed_sweep(dist_grid, 1e-9, false);
    // Full merge history for the pairwise merge heights.
    SweepResult full = watershed_sweep(dist_grid, kInf, true);

    // Compress basin roots to labels.
    std::unordered_map<std::uint32_t, std::uint32_t> label_of_root;
    for (std::uint32_t i = 0; i < g.size(); ++i)
        if (!label_of_root.count(base.root[i]))
            label_of_root.emplace(base.root[i], std::uint32_t(label_of_root.size()));
    const std::uint32_t nlabels = std::uint32_t(label_of_root.size());
    auto label_of = [&](std::uint32_t pixel) { return label_of_root.at(base.root[pixel]); };

    // Boundary edges between adjacent basins; crest pixel per edge.
    struct PairData {
        std::vector<std::uint32_t> pixels;
        double pers = -1.0;
        CellId saddle = kNoCell;
        double saddle_t = kInf;
    };
    std::unordered_map<std::uint64_t, PairData> pairs;
    CubicalComplex complex(dist_grid, false);
    for (int y = 0; y < g.h; ++y)
        for (int x = 0; x < g.w; ++x) {
            const std::uint32_t a = std::uint32_t(g.index(x, y));
            for (int axis = 0; axis < 2; ++axis) {
                const int nx = x + (axis == 0 ? 1 : 0), ny = y + (axis == 1 ? 1 : 0);
                if (!g.contains(nx, ny)) continue;
                const std::uint32_t b = std::uint32_t(g.index(nx, ny));
                std::uint32_t la = label_of(a), lb = label_of(b);
                if (la == lb) continue;
                if (la > lb) std::swap(la, lb);
                auto& pd = pairs[(std::uint64_t(la) << 32) | lb];
                const std::uint32_t crest =
                    dist_grid.at(a) > dist_grid.at(b)
                        ? a
                        : (dist_grid.at(b) > dist_grid.at(a) ? b : std::min(a, b));
                pd.pixels.push_back(crest);
                const double t = std::max(dist_grid.at(a), dist_grid.at(b));
                if (t < pd.saddle_t) {
                    pd.saddle_t = t;
                    pd.saddle = complex.cell_at(2 * x + (axis == 0 ? 1 : 0),
                                                2 * y + (axis == 1 ? 1 : 0));
                }
            }
        }

    // Merge heights between basins from the full sweep: replay events over a
    // union-find of basin groups; a pair's height is the persistence of the
    // event that first joins their groups.
    std::vector<std::uint32_t> gparent(nlabels);
    std::iota(gparent.begin(), gparent.end(), 0u);
    auto gfind = [&gparent](std::uint32_t i) {
        while (gparent[i] != i) {
            gparent[i] = gparent[gparent[i]];
            i = gparent[i];
        }
        return i;
    };
    std::vector<std::vector<std::uint32_t>> members(nlabels);
    for (std::uint32_t l = 0; l < nlabels; ++l) members[l] = {l};

    for (const auto& ev : full.events) {
        if (!(ev.pers > 0)) continue;  // intra-basin plateau merges
        std::uint32_t ga = gfind(label_of(ev.young_root));
        std::uint32_t gb = gfind(label_of(ev.old_root));
        if (ga == gb) continue;
        for (std::uint32_t la : members[ga])
            for (std::uint32_t lb : members[gb]) {
                std::uint32_t a = std::min(la, lb), b = std::max(la, lb);
                auto it = pairs.find((std::uint64_t(a) << 32) | b);
                if (it != pairs.end() && it->second.pers < 0) it->second.pers = ev.pers;
            }
        if (members[ga].size() < members[gb].size()) std::swap(ga, gb);
        members[ga].insert(members[ga].end(), members[gb].begin(), members[gb].end());
        members[gb].clear();
        gparent[gb] = ga;
    }

    std::vector<Branch> branches;
    for (auto& [key, pd] : pairs) {
        (void)key;
        if (pd.pers < 0) pd.pers = pd.saddle_t;  // never merged: saddle height
        if (!(pd.pers >= epsilon)) continue;
        Branch br;
        br.saddle = pd.saddle;
        br.persistence = pd.pers;
        std::sort(pd.pixels.begin(), pd.pixels.end());
        pd.pixels.erase(std::unique(pd.pixels.begin(), pd.pixels.end()), pd.pixels.end());
        br.pixels = std::move(pd.pixels);
        branches.push_back(std::move(br));
    }
    return SkeletonFamily(g, epsilon, std::move(branches));
}

void write_branches_csv(std::ostream& os, const SkeletonFamily& family) {
    os << "branch_id,persistence,pixel_count\n";
    char buf[64];
    for (std::size_t i = 0; i < family.branches().size(); ++i) {
        const auto& br = family.branches()[i];
        if (std::isinf(br.persistence))
            std::snprintf(buf, sizeof(buf), "inf");
        else
            std::snprintf(buf, sizeof(buf), "%.17g", br.persistence);
        os << i << ',' << buf << ',' << br.pixels.size() << '\n';
    }
}

}  // namespace topokit
