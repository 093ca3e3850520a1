#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topokit/grid.hpp"

namespace topokit {

// Deterministic synthetic scenes used by the CLI (`synth`) and the test
// corpus. Every scene documents its analytically known properties in a JSON
// sidecar string.
struct SynthScene {
    std::string name;
    std::optional<ScalarGrid> grid;  // scenes producing a scalar field
    std::optional<BinaryMask> mask;  // scenes producing a binary mask
    std::string sidecar_json;        // known Betti numbers, skeleton, parameters
};

// Supported scenes:
//   ring       - mask: annulus, b0=1 b1=1
//   bars       - mask pair encoded as one scene? no: the broken/full bar masks
//                are produced by "bars" (full bar) and "bars-broken"
//   bars-broken- mask: bar split by a gap plus an attached bump
//   two-peak   - grid: two Gaussian-ish peaks joined by a ridge with a dip
//   xcross     - grid: X-shaped ridge likelihood
//   dumbbell   - mask: two blobs separated by a narrow background channel
//   yframe     - grid: Y-shaped unit-value structure crossing the border
//   smooth     - grid: seeded smoothed noise, all values distinct
//   blobs      - mask: k disjoint rectangular blobs (k from seed)
std::vector<std::string> synth_scene_names();
SynthScene make_scene(const std::string& name, int size, std::uint64_t seed);

// Smoothed random grid with pairwise-distinct values; used all over the tests.
ScalarGrid smoothed_noise_grid(int w, int h, std::uint64_t seed, int blur_passes = 2);

// Uniformly random mask with the given foreground probability.
BinaryMask random_mask(int w, int h, std::uint64_t seed, double fg_prob, Adjacency adj);

// Random grid with pairwise-distinct values (permutation of an even ladder).
ScalarGrid distinct_random_grid(int w, int h, std::uint64_t seed);

}  // namespace topokit
