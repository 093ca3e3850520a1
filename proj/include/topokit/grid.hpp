#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace topokit {

// Grid extents. depth == 1 means a 2D grid; all indexing is row-major
// with x fastest: index = x + w*(y + h*z).
struct GridDims {
    int w = 0;
    int h = 0;
    int d = 1;

    bool operator==(const GridDims&) const = default;

    std::size_t size() const { return std::size_t(w) * h * d; }
    bool is3d() const { return d > 1; }

    std::size_t index(int x, int y, int z = 0) const {
        return std::size_t(x) + std::size_t(w) * (std::size_t(y) + std::size_t(h) * z);
    }
    bool contains(int x, int y, int z = 0) const {
        return x >= 0 && x < w && y >= 0 && y < h && z >= 0 && z < d;
    }
    void validate() const {
        if (w < 1 || h < 1 || d < 1)
            throw std::invalid_argument("grid dims must be positive, got " +
                                        std::to_string(w) + "x" + std::to_string(h) + "x" +
                                        std::to_string(d));
    }
};

// Jordan-paired pixel connectivity. Foreground and background always use
// complementary adjacencies: (4,8)/(8,4) in 2D, (6,26)/(26,6) in 3D.
struct Adjacency {
    int foreground = 4;

    static Adjacency for_dims(const GridDims& dims) {
        return Adjacency{dims.is3d() ? 6 : 4};
    }

    int background() const {
        switch (foreground) {
            case 4: return 8;
            case 8: return 4;
            case 6: return 26;
            case 26: return 6;
        }
        throw std::invalid_argument("invalid foreground adjacency " + std::to_string(foreground));
    }
    void validate(const GridDims& dims) const {
        const bool ok2d = !dims.is3d() && (foreground == 4 || foreground == 8);
        const bool ok3d = dims.is3d() && (foreground == 6 || foreground == 26);
        if (!ok2d && !ok3d)
            throw std::invalid_argument("adjacency " + std::to_string(foreground) +
                                        " invalid for " + (dims.is3d() ? "3D" : "2D") + " grid");
    }
    bool operator==(const Adjacency&) const = default;
};

// Real-valued field sampled at pixels, values nominally in [0,1].
class ScalarGrid {
public:
    ScalarGrid() = default;
    ScalarGrid(GridDims dims, std::vector<double> values);
    ScalarGrid(GridDims dims, double fill);

    const GridDims& dims() const { return dims_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double at(std::size_t i) const { return values_[i]; }
    double at(int x, int y, int z = 0) const { return values_[dims_.index(x, y, z)]; }
    void set(int x, int y, double v) { values_[dims_.index(x, y)] = v; }
    void set(int x, int y, int z, double v) { values_[dims_.index(x, y, z)] = v; }

    double min_value() const;
    double max_value() const;

private:
    GridDims dims_;
    std::vector<double> values_;
};

// Binary segmentation mask with its adjacency convention.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(GridDims dims, Adjacency adjacency, bool fill = false);
    BinaryMask(GridDims dims, Adjacency adjacency, std::vector<std::uint8_t> bits);

    const GridDims& dims() const { return dims_; }
    const Adjacency& adjacency() const { return adjacency_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    bool at(std::size_t i) const { return bits_[i] != 0; }
    bool at(int x, int y, int z = 0) const { return bits_[dims_.index(x, y, z)] != 0; }
    void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
    void set(int x, int y, bool v) { bits_[dims_.index(x, y)] = v ? 1 : 0; }
    void set(int x, int y, int z, bool v) { bits_[dims_.index(x, y, z)] = v ? 1 : 0; }

    std::size_t count() const;
    bool operator==(const BinaryMask&) const = default;

    BinaryMask complement() const;
    BinaryMask xor_with(const BinaryMask& other) const;
    BinaryMask or_with(const BinaryMask& other) const;

private:
    GridDims dims_;
    Adjacency adjacency_;
    std::vector<std::uint8_t> bits_;
};

// Per-pixel distances in pixel units. FG pixels carry the distance to the
// nearest BG pixel and vice versa; +inf where the opposite set is empty.
struct DistanceMap {
    GridDims dims;
    std::vector<double> distances;
};

struct BettiNumbers {
    long long b0 = 0;
    long long b1 = 0;
    long long b2 = 0;  // meaningful only for 3D masks
    bool operator==(const BettiNumbers&) const = default;
};

enum class ComponentSet { foreground, background };

// Superlevel threshold: bit(p) = grid(p) >= alpha. alpha must lie in (0,1).
BinaryMask threshold(const ScalarGrid& grid, double alpha, Adjacency adjacency);
BinaryMask threshold(const ScalarGrid& grid, double alpha);

// Labels the selected set 1..count in raster scan order, 0 elsewhere.
// Connectivity follows the mask's convention for that set.
std::pair<std::vector<std::int32_t>, int> connected_components(const BinaryMask& mask,
                                                               ComponentSet which);

BettiNumbers betti_numbers(const BinaryMask& mask);

DistanceMap distance_transform(const BinaryMask& mask);

// Offsets of the neighborhood for a given connectivity (4/8/6/26).
const std::vector<std::array<int, 3>>& neighbor_offsets(int connectivity);

}  // namespace topokit
