#pragma once

#include <cstdint>
#include <vector>

#include "topokit/grid.hpp"

namespace topokit {

using CellId = std::uint64_t;
constexpr CellId kNoCell = ~CellId(0);

// Cubical complex of a scalar grid in the doubled-grid encoding: a cell at
// doubled coordinates (cx,cy,cz) has dimension = number of odd coordinates;
// even coordinates locate vertices at pixels (cx/2, cy/2, cz/2). Cell IDs are
// row-major over the doubled grid with x fastest.
//
// Filtration: superlevel sweep in descending value. A cell enters together
// with its lowest vertex, so value(cell) = min over incident vertices; ties
// are broken by (ascending dimension, ascending cell ID).
class CubicalComplex {
public:
    // relative_frame pads the grid with a one-pixel border of value 1.0
    // before building, so structures are measured relative to the boundary.
    CubicalComplex(const ScalarGrid& grid, bool relative_frame);

    const GridDims& grid_dims() const { return grid_.dims(); }
    const ScalarGrid& grid() const { return grid_; }
    bool relative_frame() const { return relative_frame_; }
    int top_dim() const { return grid_.dims().is3d() ? 3 : 2; }

    CellId cell_count() const { return cell_count_; }
    int dim(CellId c) const;
    double value(CellId c) const { return values_[c]; }

    CellId cell_at(int cx, int cy, int cz = 0) const {
        return CellId(cx) + CellId(dw_) * (CellId(cy) + CellId(dh_) * CellId(cz));
    }
    void coords(CellId c, int& cx, int& cy, int& cz) const {
        cx = int(c % dw_);
        cy = int((c / dw_) % dh_);
        cz = int(c / (CellId(dw_) * dh_));
    }

    CellId vertex_cell(int x, int y, int z = 0) const { return cell_at(2 * x, 2 * y, 2 * z); }

    // Facets (codim-1 faces); always in range for a valid cell.
    int facets(CellId c, CellId out[6]) const;
    // Cofacets (codim-1 cofaces) within the grid.
    int cofacets(CellId c, CellId out[6]) const;
    // Pixel indices (into grid()) of the cell's incident vertices.
    int vertex_pixels(CellId c, std::size_t out[8]) const;

    // Vertex attaining the cell's (minimum) value; ties by smallest pixel index.
    std::size_t representative_pixel(CellId c) const;

    // True if the representative pixel lies on the synthetic frame border.
    bool pixel_in_frame(std::size_t pixel) const;
    // Maps a padded-grid pixel back to the unpadded grid (frame pixels: kNoCell).
    std::uint64_t pixel_to_original(std::size_t pixel) const;

    // Cells sorted by (value desc, dim asc, id asc); built lazily.
    const std::vector<CellId>& filtration_order() const;

private:
    ScalarGrid grid_;  // padded when relative_frame_
    bool relative_frame_ = false;
    int dw_ = 0, dh_ = 0, dd_ = 0;
    CellId cell_count_ = 0;
    std::vector<double> values_;
    mutable std::vector<CellId> order_;
};

// One persistence pair of the superlevel filtration: the birth cell enters
// first (higher value) and creates a class that the death cell destroys.
struct PersistencePair {
    CellId birth = kNoCell;
    CellId death = kNoCell;
    int dim = 0;            // dimension of the class (= dim of birth cell)
    double birth_value = 0;
    double death_value = 0;
    double persistence() const { return birth_value - death_value; }
};

// Full pairing of all cells. Cells not in any pair are essential.
struct Pairing {
    std::vector<PersistencePair> pairs;  // includes zero-persistence pairs
    std::vector<CellId> essential;       // sorted by filtration position
};

// Boundary-matrix reduction (clearing optimization) over Z/2.
Pairing compute_pairing(const CubicalComplex& complex);

}  // namespace topokit
