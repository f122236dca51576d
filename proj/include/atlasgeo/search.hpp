#pragma once

#include <vector>

#include "atlasgeo/graph.hpp"
#include "atlasgeo/types.hpp"

namespace atlasgeo {

/// A shortest path through the latent graph: the piecewise linear geodesic
/// approximation between its node coordinates.
struct GeodesicPath {
    std::vector<LatentCoord> nodes;
    std::vector<double> segment_lengths;   // size nodes.size() - 1
    std::vector<EdgeKind> segment_kinds;   // size nodes.size() - 1
    double total_length = 0.0;
};

/// Ambient chord between the cached decodings of u and goal. Admissible and
/// consistent: every edge weight dominates the chord of its endpoints.
double heuristic(const LatentGraph& graph, int u, int goal);

/// A* shortest path. Priority ties are broken by lower node id. Throws
/// no_path_error (naming both components' sizes) when disconnected.
GeodesicPath astar(const LatentGraph& graph, int start, int goal);

/// Plain Dijkstra, kept independent of astar as a correctness oracle.
GeodesicPath dijkstra_oracle(const LatentGraph& graph, int start, int goal);

/// Full query: assign each endpoint to its argmax chart, encode, attach as
/// ephemeral query nodes with k connections, run astar, restore the graph.
GeodesicPath geodesic_between(LatentGraph& graph, const Atlas& atlas, const AmbientPoint& x0,
                              const AmbientPoint& x1, int k);

struct PathSample {
    LatentCoord coord;
    AmbientPoint x;
};

/// count samples equidistant in arc length along the path. Samples landing
/// strictly inside a cross-chart segment snap to the nearer endpoint (there
/// is no latent interpolant across charts). First/last samples are exactly
/// the path endpoints; a zero-length path yields count copies of its
/// endpoint.
std::vector<PathSample> resample_equidistant(const GeodesicPath& path, const Atlas& atlas,
                                             int count);

}  // namespace atlasgeo
