#pragma once

#include <memory>
#include <vector>

#include "topokit/cubical.hpp"
#include "topokit/grid.hpp"

namespace topokit {

// Discrete gradient vector field over a cubical complex. V-pairs couple a
// cell with one of its facets; cells in no pair are critical. Built by
// Morse-cancelling persistence pairs below a threshold, starting from the
// trivial field where every cell is critical.
class VectorField {
public:
    VectorField(const CubicalComplex& complex, double epsilon);

    const CubicalComplex& complex() const { return *complex_; }
    double epsilon() const { return epsilon_; }

    bool is_critical(CellId c) const {
        return partner_up_[c] == kNoCell && partner_down_[c] == kNoCell;
    }
    // Coface the cell is paired with (cell is the facet side), or kNoCell.
    CellId partner_up(CellId c) const { return partner_up_[c]; }
    // Facet the cell is paired with (cell is the coface side), or kNoCell.
    CellId partner_down(CellId c) const { return partner_down_[c]; }

    std::vector<CellId> critical_cells() const;
    std::size_t pair_count() const { return pair_count_; }

    // Persistence of a cell's pairing in the filtration (+inf for essential).
    double cell_persistence(CellId c) const { return persistence_[c]; }

    // Structural invariants: pairings are mutual, partners are facet/coface
    // related, and the V-path graph is acyclic. Throws std::logic_error.
    void check_invariants() const;

private:
    friend class MorseCancellation;
    std::shared_ptr<const CubicalComplex> complex_;
    double epsilon_ = 0.0;
    std::size_t pair_count_ = 0;
    std::vector<CellId> partner_up_;
    std::vector<CellId> partner_down_;
    std::vector<double> persistence_;
};

// One ridge branch: the V-path through a saddle edge, from maximum to
// maximum, with the persistence of the saddle's pairing.
struct Branch {
    std::vector<CellId> cells;          // ordered path, saddle included
    CellId saddle = kNoCell;
    double persistence = 0.0;
    std::vector<std::uint32_t> pixels;  // rasterized, sorted unique pixel indices
};

// Family of branches sorted by descending persistence; query(eps) keeps the
// branches whose persistence is at least eps (monotone in eps).
class SkeletonFamily {
public:
    SkeletonFamily() = default;
    SkeletonFamily(GridDims dims, double base_epsilon, std::vector<Branch> branches);

    const GridDims& dims() const { return dims_; }
    double base_epsilon() const { return base_epsilon_; }
    const std::vector<Branch>& branches() const { return branches_; }

    BinaryMask query(double eps) const;

private:
    GridDims dims_;
    double base_epsilon_ = 0.0;
    std::vector<Branch> branches_;
};

VectorField build_field(const ScalarGrid& grid, double epsilon);

// 1-stable manifolds: for every surviving critical edge (saddle), the V-path
// flowing into it from its maxima, rasterized to pixels.
SkeletonFamily skeleton_1d(const ScalarGrid& grid, double epsilon);
SkeletonFamily skeleton_1d(const VectorField& field);

// Boundary of the maximum-spanning-forest basins of minima with persistence
// >= eps; one crest pixel (the higher endpoint) per inter-tree edge. 2D only.
BinaryMask sheets_2d_approx(const ScalarGrid& grid, double epsilon);

// Persistence-filtered topology watershed: ascending union-find sweep on the
// 4-connectivity pixel graph; an edge joining basins whose younger side has
// persistence >= theta becomes a watershed edge. Returns the union of
// watershed-edge endpoints. 2D only.
BinaryMask ph_watershed(const ScalarGrid& grid, double theta);

// Union of the pruned 1-stable skeleton and the basin-boundary sheets: the
// pixel-weight mask for a Morse-structure-restricted loss. 2D only.
BinaryMask dmt_critical_mask(const ScalarGrid& likelihood, double epsilon,
                             bool include_sheets = true);

// Candidate instance-separating boundaries of a blob mask: watershed of the
// background-side distance transform. One branch per adjacent basin pair,
// its persistence the saddle depth at which the pair's basins would merge;
// branches below eps are dropped. 2D only.
SkeletonFamily boundary_skeleton_from_mask(const BinaryMask& mask, double epsilon);

void write_branches_csv(std::ostream& os, const SkeletonFamily& family);

}  // namespace topokit
