#pragma once

// Brute-force boundary sampling: independent ground truth for square counts.

#include <cstddef>
#include <utility>
#include <vector>

#include "squarepeg/enumerator.hpp"
#include "squarepeg/geom.hpp"
#include "squarepeg/line_square.hpp"

namespace squarepeg {

struct ApproxSquareCluster {
    Square representative;
    std::size_t hits = 0;
    double residual = 0;  // max vertex distance to the boundary, in units of D
    double chain_length = 0;  // boundary arc covered by the cluster's sample points
};

struct OracleOptions {
    std::size_t samples = 4000;
    double delta = 0.01;
};

/// Samples `samples` equally spaced boundary points and completes every pair
/// to the two squares having it as a side; a completion is a hit when both new
/// vertices lie within delta * D of the boundary. Hits missing by more than
/// delta * D / 2 are ignored for clustering; the rest are clustered with merge
/// radius 5 * delta * D; clusters whose best hit misses by more than
/// delta * D / 4 are dropped as near misses. Throws NonGeneric ("continuum suspected") when one
/// cluster's chain is longer than 50 merge radii.
std::vector<ApproxSquareCluster> approx_squares(const Polygon& poly, OracleOptions opts = {});

struct OracleComparison {
    std::vector<std::pair<std::size_t, std::size_t>> matched;  // (exact index, cluster index)
    std::vector<std::size_t> unmatched_exact;
    std::vector<std::size_t> unmatched_approx;

    bool agree() const { return unmatched_exact.empty() && unmatched_approx.empty(); }
};

OracleComparison compare(const std::vector<InscribedSquare>& exact, const std::vector<ApproxSquareCluster>& approx,
                         double delta, double diameter);

}  // namespace squarepeg
