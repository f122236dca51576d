#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atlasgeo/atlas.hpp"
#include "atlasgeo/metric.hpp"
#include "atlasgeo/types.hpp"

namespace atlasgeo {

enum class EdgeKind { intra_chart, cross_chart };

const char* edge_kind_name(EdgeKind k);
EdgeKind edge_kind_from_string(const std::string& s);

struct BuildConfig {
    int sample_count = 2000;  // N: points drawn from the dataset
    int neighbors = 20;       // k: nearest neighbors per node
    int curve_steps = 15;     // n: samples for discretized edge lengths
    double eps = 0.05;        // membership threshold on psi
    uint64_t seed = 0;
    double fd_step = kDefaultFdStep;
};

struct GraphNode {
    int id = -1;
    LatentCoord coord;
    AmbientPoint decoded;   // cached G(coord), set at insertion
    int source_index = -1;  // index into the sampled dataset; -1 for query nodes
};

struct HalfEdge {
    int to = -1;
    double weight = 0.0;
    EdgeKind kind = EdgeKind::intra_chart;
};

struct GraphEdge {
    int a = -1, b = -1;
    double weight = 0.0;
    EdgeKind kind = EdgeKind::intra_chart;
};

struct GraphStats {
    size_t node_count = 0;
    size_t edge_count = 0;
    int diameter = 0;  // hop diameter of the largest connected component
    size_t component_count = 0;
    std::vector<size_t> per_chart;  // node counts, index = chart - 1
};

/**
 * Nodes with cached decodings plus symmetric weighted adjacency. Intra-chart
 * edges join k-NN encodings within one chart; cross-chart edges identify the
 * encodings of a shared data point in two charts.
 */
struct LatentGraph {
    std::string atlas_spec;
    int charts = 0, latent_dim = 0, ambient_dim = 0;  // atlas fingerprint
    BuildConfig config;
    std::vector<GraphNode> nodes;
    std::vector<std::vector<HalfEdge>> adjacency;
    std::vector<std::string> warnings;  // build diagnostics, not serialized

    void add_node(GraphNode n);
    void add_edge(int a, int b, double weight, EdgeKind kind);
    /// Removes the most recently added node and its incident edges.
    void pop_node();

    /// Edges listed once with a < b, sorted by (a, b).
    std::vector<GraphEdge> edge_list() const;

    size_t edge_count() const;

    /// Throws format_error if the graph was not built against this atlas.
    void check_fingerprint(const Atlas& atlas) const;
};

/// Part 1 of the build: sample cfg.sample_count points from data without
/// replacement, form per-chart k-NN graphs over the encodings of the points
/// each chart claims (psi > eps), weight intra-chart edges with the
/// discretized curve length, and join charts with cross-chart edges weighted
/// by the ambient jump between the two decodings.
LatentGraph build_graph(const Atlas& atlas, const std::vector<AmbientPoint>& data,
                        const BuildConfig& cfg);

/// Appends a query node and connects it to its k nearest nodes within its
/// own chart (intra-chart weights). Returns the new node id. Throws
/// no_connection_error if the chart subgraph is empty.
int add_query_node(LatentGraph& graph, const Atlas& atlas, const LatentCoord& p, int k);

GraphStats graph_stats(const LatentGraph& graph);

}  // namespace atlasgeo
