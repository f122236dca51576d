#include "atlasgeo/search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace atlasgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_node_id(const LatentGraph& graph, int id, const char* which) {
    if (id < 0 || id >= static_cast<int>(graph.nodes.size()))
        throw usage_error(std::string(which) + " node id " + std::to_string(id) +
                          " outside the graph");
}

size_t component_size(const LatentGraph& graph, int start) {
    std::vector<char> seen(graph.nodes.size(), 0);
    std::deque<int> queue{start};
    seen[start] = 1;
    size_t count = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        ++count;
        for (const HalfEdge& he : graph.adjacency[u])
            if (!seen[he.to]) {
                seen[he.to] = 1;
                queue.push_back(he.to);
            }
    }
    return count;
}

[[noreturn]] void throw_no_path(const LatentGraph& graph, int start, int goal) {
    throw no_path_error("no path from node " + std::to_string(start) + " (component of " +
                        std::to_string(component_size(graph, start)) + " nodes) to node " +
                        std::to_string(goal) + " (component of " +
                        std::to_string(component_size(graph, goal)) + " nodes)");
}

GeodesicPath assemble(const LatentGraph& graph, int start, int goal,
                      const std::vector<int>& parent, const std::vector<double>& parent_weight,
                      const std::vector<EdgeKind>& parent_kind) {
    std::vector<int> order;
    for (int v = goal; v != -1; v = parent[v]) order.push_back(v);
    std::reverse(order.begin(), order.end());

    GeodesicPath path;
    path.nodes.reserve(order.size());
    for (int v : order) path.nodes.push_back(graph.nodes[v].coord);
    path.total_length = 0.0;
    for (size_t i = 1; i < order.size(); ++i) {
        path.segment_lengths.push_back(parent_weight[order[i]]);
        path.segment_kinds.push_back(parent_kind[order[i]]);
        path.total_length += parent_weight[order[i]];
    }
    (void)start;
    return path;
}

}  // namespace

double heuristic(const LatentGraph& graph, int u, int goal) {
    check_node_id(graph, u, "heuristic");
    check_node_id(graph, goal, "heuristic goal");
    return euclidean_distance(graph.nodes[u].decoded, graph.nodes[goal].decoded);
}

GeodesicPath astar(const LatentGraph& graph, int start, int goal) {
    check_node_id(graph, start, "start");
    check_node_id(graph, goal, "goal");
    const size_t n = graph.nodes.size();
    if (start == goal) {
        GeodesicPath path;
        path.nodes.push_back(graph.nodes[start].coord);
        return path;
    }

    std::vector<double> dist(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<double> parent_weight(n, 0.0);
    std::vector<EdgeKind> parent_kind(n, EdgeKind::intra_chart);
    std::vector<char> settled(n, 0);

    using Item = std::pair<double, int>;  // (f, id); ties resolve to lower id
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
    dist[start] = 0.0;
    open.emplace(heuristic(graph, start, goal), start);

    while (!open.empty()) {
        const int u = open.top().second;
        open.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        if (u == goal) break;
        for (const HalfEdge& he : graph.adjacency[u]) {
            if (settled[he.to]) continue;
            const double tentative = dist[u] + he.weight;
            if (tentative < dist[he.to]) {
                dist[he.to] = tentative;
                parent[he.to] = u;
                parent_weight[he.to] = he.weight;
                parent_kind[he.to] = he.kind;
                open.emplace(tentative + heuristic(graph, he.to, goal), he.to);
            }
        }
    }
    if (!settled[goal]) throw_no_path(graph, start, goal);
    return assemble(graph, start, goal, parent, parent_weight, parent_kind);
}

GeodesicPath dijkstra_oracle(const LatentGraph& graph, int start, int goal) {
    check_node_id(graph, start, "start");
    check_node_id(graph, goal, "goal");
    const size_t n = graph.nodes.size();
    if (start == goal) {
        GeodesicPath path;
        path.nodes.push_back(graph.nodes[start].coord);
        return path;
    }

    std::vector<double> dist(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<double> parent_weight(n, 0.0);
    std::vector<EdgeKind> parent_kind(n, EdgeKind::intra_chart);
    std::vector<char> done(n, 0);

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    dist[start] = 0.0;
    queue.emplace(0.0, start);

    while (!queue.empty()) {
        const auto [du, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        done[u] = 1;
        if (u == goal) break;
        for (const HalfEdge& he : graph.adjacency[u]) {
            if (done[he.to]) continue;
            const double candidate = du + he.weight;
            if (candidate < dist[he.to]) {
                dist[he.to] = candidate;
                parent[he.to] = u;
                parent_weight[he.to] = he.weight;
                parent_kind[he.to] = he.kind;
                queue.emplace(candidate, he.to);
            }
        }
    }
    if (!done[goal]) throw_no_path(graph, start, goal);
    return assemble(graph, start, goal, parent, parent_weight, parent_kind);
}

GeodesicPath geodesic_between(LatentGraph& graph, const Atlas& atlas, const AmbientPoint& x0,
                              const AmbientPoint& x1, int k) {
    graph.check_fingerprint(atlas);
    const size_t base = graph.nodes.size();
    try {
        const int chart0 = atlas.argmax_chart(x0);
        const int chart1 = atlas.argmax_chart(x1);
        const LatentCoord p0{chart0, atlas.encode(chart0, x0)};
        const LatentCoord p1{chart1, atlas.encode(chart1, x1)};
        const int q0 = add_query_node(graph, atlas, p0, k);
        const int q1 = add_query_node(graph, atlas, p1, k);
        GeodesicPath path = astar(graph, q0, q1);
        while (graph.nodes.size() > base) graph.pop_node();
        return path;
    } catch (...) {
        while (graph.nodes.size() > base) graph.pop_node();
        throw;
    }
}

std::vector<PathSample> resample_equidistant(const GeodesicPath& path, const Atlas& atlas,
                                             int count) {
    if (count < 2) throw usage_error("resample count must be >= 2");
    if (path.nodes.empty()) throw usage_error("cannot resample an empty path");
    const size_t nseg = path.segment_lengths.size();
    if (path.nodes.size() != nseg + 1 || path.segment_kinds.size() != nseg)
        throw usage_error("inconsistent geodesic path");

    std::vector<PathSample> out;
    out.reserve(count);

    const double total = path.total_length;
    if (nseg == 0 || total <= 0.0) {
        const PathSample endpoint{path.nodes.back(), atlas.decode(path.nodes.back())};
        return std::vector<PathSample>(count, endpoint);
    }

    std::vector<double> cum(nseg + 1, 0.0);
    for (size_t i = 0; i < nseg; ++i) cum[i + 1] = cum[i] + path.segment_lengths[i];

    size_t seg = 0;
    for (int j = 0; j < count; ++j) {
        if (j == 0) {
            out.push_back({path.nodes.front(), atlas.decode(path.nodes.front())});
            continue;
        }
        if (j == count - 1) {
            out.push_back({path.nodes.back(), atlas.decode(path.nodes.back())});
            continue;
        }
        const double target = static_cast<double>(j) * total / (count - 1);
        while (seg + 1 < nseg && cum[seg + 1] < target) ++seg;

        const LatentCoord& a = path.nodes[seg];
        const LatentCoord& b = path.nodes[seg + 1];
        const double len = path.segment_lengths[seg];
        double alpha = len > 0.0 ? (target - cum[seg]) / len : 0.0;
        alpha = std::clamp(alpha, 0.0, 1.0);

        if (path.segment_kinds[seg] == EdgeKind::cross_chart) {
            // No latent interpolant exists across charts; snap to the nearer
            // endpoint of the jump.
            const LatentCoord& snap = alpha < 0.5 ? a : b;
            out.push_back({snap, atlas.decode(snap)});
        } else {
            LatentCoord p{a.chart, Vec(a.z.size())};
            for (size_t i = 0; i < a.z.size(); ++i)
                p.z[i] = (1.0 - alpha) * a.z[i] + alpha * b.z[i];
            AmbientPoint x = atlas.decode(p);
            out.push_back({std::move(p), std::move(x)});
        }
    }
    return out;
}

}  // namespace atlasgeo
