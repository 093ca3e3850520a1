#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "topokit/cubical.hpp"
#include "topokit/grid.hpp"

namespace topokit {

// Convention for reporting the death of the essential component: either the
// grid minimum (true end of the sweep) or the fixed value 1.0.
enum class EssentialDeath { grid_min, dies_at_one };

struct PersistentDot {
    int dim = 0;
    double birth = 0.0;
    double death = 0.0;       // grid minimum for essential dots
    CellId birth_cell = kNoCell;
    CellId death_cell = kNoCell;  // kNoCell for essential dots
    bool essential = false;

    double persistence() const { return birth - death; }
    double death_as(EssentialDeath mode) const {
        return essential && mode == EssentialDeath::dies_at_one ? 1.0 : death;
    }
};

class PersistenceDiagram {
public:
    PersistenceDiagram() = default;
    PersistenceDiagram(GridDims dims, std::uint64_t provenance, double min_value,
                       std::vector<PersistentDot> dots);

    const GridDims& dims() const { return dims_; }
    std::uint64_t provenance() const { return provenance_; }
    double min_value() const { return min_value_; }
    const std::vector<PersistentDot>& dots() const { return dots_; }

    std::vector<PersistentDot> dots_of_dim(int dim) const;

    // Number of dots of dimension `dim` alive at threshold alpha
    // (birth >= alpha and, unless essential, death < alpha).
    long long alive_count(int dim, double alpha) const;

private:
    GridDims dims_;
    std::uint64_t provenance_ = 0;
    double min_value_ = 0.0;
    std::vector<PersistentDot> dots_;
};

std::uint64_t grid_provenance(const ScalarGrid& grid);

// Builds the complex (optionally frame-padded) and reduces its boundary
// matrix. Zero-persistence pairs are dropped from the diagram; essential
// classes appear with death = min grid value and the essential flag set.
PersistenceDiagram compute_diagram(const CubicalComplex& complex);
PersistenceDiagram compute_diagram(const ScalarGrid& grid, bool relative_frame = false);

// Union-find sweep over pixels in descending value; dim-0 dots only. With
// 4-/6-adjacency this matches compute_diagram's dim-0 restriction exactly
// (merge cells are complex edges); with 8-/26-adjacency the death cell of a
// diagonal merge is recorded as the merging pixel's vertex.
PersistenceDiagram zero_dim_sweep(const ScalarGrid& grid, Adjacency adjacency);

// CSV: header dim,birth,death,birth_cell,death_cell, one dot per row.
// Essential deaths are written as "inf" (sentinel view) or as 1.0 when the
// dies_at_one convention is requested; essential death cells as "-".
void write_diagram_csv(std::ostream& os, const PersistenceDiagram& diagram,
                       EssentialDeath mode = EssentialDeath::grid_min);

}  // namespace topokit
