#include "atlasgeo/graph.hpp"

#include <algorithm>
#include <deque>

#include "atlasgeo/kdtree.hpp"
#include "atlasgeo/rng.hpp"
#include "parallel.hpp"

namespace atlasgeo {

const char* edge_kind_name(EdgeKind k) {
    return k == EdgeKind::intra_chart ? "intra_chart" : "cross_chart";
}

EdgeKind edge_kind_from_string(const std::string& s) {
    if (s == "intra_chart") return EdgeKind::intra_chart;
    if (s == "cross_chart") return EdgeKind::cross_chart;
    throw format_error("unknown edge kind '" + s + "'");
}

void LatentGraph::add_node(GraphNode n) {
    n.id = static_cast<int>(nodes.size());
    nodes.push_back(std::move(n));
    adjacency.emplace_back();
}

void LatentGraph::add_edge(int a, int b, double weight, EdgeKind kind) {
    if (a == b) throw usage_error("self-loop edges are not allowed");
    if (weight < 0.0) throw usage_error("edge weights must be >= 0");
    adjacency[a].push_back({b, weight, kind});
    adjacency[b].push_back({a, weight, kind});
}

void LatentGraph::pop_node() {
    if (nodes.empty()) throw usage_error("pop_node on an empty graph");
    const int id = nodes.back().id;
    for (const HalfEdge& he : adjacency.back()) {
        auto& peer = adjacency[he.to];
        peer.erase(std::remove_if(peer.begin(), peer.end(),
                                  [id](const HalfEdge& e) { return e.to == id; }),
                   peer.end());
    }
    adjacency.pop_back();
    nodes.pop_back();
}

std::vector<GraphEdge> LatentGraph::edge_list() const {
    std::vector<GraphEdge> edges;
    for (size_t a = 0; a < adjacency.size(); ++a)
        for (const HalfEdge& he : adjacency[a])
            if (static_cast<int>(a) < he.to)
                edges.push_back({static_cast<int>(a), he.to, he.weight, he.kind});
    std::sort(edges.begin(), edges.end(), [](const GraphEdge& l, const GraphEdge& r) {
        return l.a < r.a || (l.a == r.a && l.b < r.b);
    });
    return edges;
}

size_t LatentGraph::edge_count() const {
    size_t half = 0;
    for (const auto& adj : adjacency) half += adj.size();
    return half / 2;
}

void LatentGraph::check_fingerprint(const Atlas& atlas) const {
    if (atlas_spec != atlas.spec_string() || charts != atlas.chart_count() ||
        latent_dim != atlas.latent_dim() || ambient_dim != atlas.ambient_dim())
        throw format_error("graph fingerprint (" + atlas_spec + ", m=" + std::to_string(charts) +
                           ", d=" + std::to_string(latent_dim) + ", D=" +
                           std::to_string(ambient_dim) + ") does not match atlas " +
                           atlas.spec_string());
}

LatentGraph build_graph(const Atlas& atlas, const std::vector<AmbientPoint>& data,
                        const BuildConfig& cfg) {
    if (cfg.neighbors < 1) throw usage_error("neighbor count k must be >= 1");
    if (cfg.sample_count < cfg.neighbors + 1)
        throw usage_error("sample count N must be >= k+1");
    if (cfg.curve_steps < 1) throw usage_error("curve step count n must be >= 1");
    if (cfg.eps < 0.0) throw usage_error("membership threshold eps must be >= 0");
    if (data.size() < static_cast<size_t>(cfg.sample_count))
        throw usage_error("dataset has " + std::to_string(data.size()) +
                          " points, fewer than the requested N=" +
                          std::to_string(cfg.sample_count));

    LatentGraph graph;
    graph.atlas_spec = atlas.spec_string();
    graph.charts = atlas.chart_count();
    graph.latent_dim = atlas.latent_dim();
    graph.ambient_dim = atlas.ambient_dim();
    graph.config = cfg;

    std::mt19937_64 gen(cfg.seed);
    const std::vector<size_t> picks =
        sample_without_replacement(data.size(), static_cast<size_t>(cfg.sample_count), gen);

    const int m = atlas.chart_count();
    std::vector<SimplexWeights> weights;  // one partition evaluation per sample
    weights.reserve(picks.size());
    for (size_t s = 0; s < picks.size(); ++s) weights.push_back(atlas.partition(data[picks[s]]));

    // node id of sample s in chart y, or -1 when psi_y <= eps
    std::vector<std::vector<int>> chart_node(m, std::vector<int>(picks.size(), -1));

    for (int chart = 1; chart <= m; ++chart) {
        std::vector<int> members;  // sample indices claimed by this chart
        for (size_t s = 0; s < picks.size(); ++s)
            if (weights[s].w[chart - 1] > cfg.eps) members.push_back(static_cast<int>(s));
        if (members.empty()) {
            graph.warnings.push_back("chart " + std::to_string(chart) +
                                     " claims no sampled points; skipped");
            continue;
        }

        std::vector<Vec> z(members.size());
        const int first_id = static_cast<int>(graph.nodes.size());
        for (size_t i = 0; i < members.size(); ++i) {
            const int s = members[i];
            z[i] = atlas.encode(chart, data[picks[s]]);
            GraphNode node;
            node.coord = LatentCoord{chart, z[i]};
            node.decoded = atlas.decode(node.coord);
            node.source_index = s;
            graph.add_node(std::move(node));
            chart_node[chart - 1][s] = first_id + static_cast<int>(i);
        }

        int k = cfg.neighbors;
        if (members.size() <= static_cast<size_t>(k)) {
            k = static_cast<int>(members.size()) - 1;
            graph.warnings.push_back("chart " + std::to_string(chart) + " has only " +
                                     std::to_string(members.size()) +
                                     " nodes; reduced k to " + std::to_string(k));
        }
        if (k < 1) continue;  // a single-node chart has no intra edges

        const auto neighbor_lists = knn(z, k);
        std::vector<std::pair<int, int>> pairs;  // local (a < b), k-NN union
        for (size_t i = 0; i < neighbor_lists.size(); ++i)
            for (int j : neighbor_lists[i])
                pairs.emplace_back(std::min<int>(static_cast<int>(i), j),
                                   std::max<int>(static_cast<int>(i), j));
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

        std::vector<double> weights(pairs.size());
        detail::parallel_for(pairs.size(), [&](size_t e) {
            weights[e] = curve_length_discrete(
                atlas, SegmentSpec{chart, z[pairs[e].first], z[pairs[e].second],
                                   cfg.curve_steps});
        });
        for (size_t e = 0; e < pairs.size(); ++e)
            graph.add_edge(first_id + pairs[e].first, first_id + pairs[e].second, weights[e],
                           EdgeKind::intra_chart);
    }

    // One edge per shared point: the weight is the ambient jump between the
    // two chart decodings of that point.
    for (int i = 2; i <= m; ++i)
        for (int j = 1; j < i; ++j)
            for (size_t s = 0; s < picks.size(); ++s) {
                const int a = chart_node[j - 1][s];
                const int b = chart_node[i - 1][s];
                if (a < 0 || b < 0) continue;
                const double w =
                    euclidean_distance(graph.nodes[a].decoded, graph.nodes[b].decoded);
                graph.add_edge(a, b, w, EdgeKind::cross_chart);
            }

    return graph;
}

int add_query_node(LatentGraph& graph, const Atlas& atlas, const LatentCoord& p, int k) {
    graph.check_fingerprint(atlas);
    if (k < 1) throw usage_error("query neighbor count must be >= 1");

    std::vector<int> chart_ids;
    for (const GraphNode& n : graph.nodes)
        if (n.coord.chart == p.chart) chart_ids.push_back(n.id);
    if (chart_ids.empty())
        throw no_connection_error("chart " + std::to_string(p.chart) +
                                  " has no graph nodes to connect a query point to");

    // (distance, id) selection over one chart; a linear scan is exact and
    // keeps the lower-id tie rule trivially.
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(chart_ids.size());
    for (int id : chart_ids) ranked.emplace_back(squared_distance(p.z, graph.nodes[id].coord.z), id);
    const size_t take = std::min<size_t>(ranked.size(), static_cast<size_t>(k));
    std::partial_sort(ranked.begin(), ranked.begin() + take, ranked.end());

    GraphNode node;
    node.coord = p;
    node.decoded = atlas.decode(p);
    node.source_index = -1;
    graph.add_node(std::move(node));
    const int qid = graph.nodes.back().id;

    for (size_t i = 0; i < take; ++i) {
        const int other = ranked[i].second;
        const double w = curve_length_discrete(
            atlas,
            SegmentSpec{p.chart, p.z, graph.nodes[other].coord.z, graph.config.curve_steps});
        graph.add_edge(qid, other, w, EdgeKind::intra_chart);
    }
    return qid;
}

GraphStats graph_stats(const LatentGraph& graph) {
    GraphStats st;
    st.node_count = graph.nodes.size();
    st.edge_count = graph.edge_count();
    st.per_chart.assign(std::max(graph.charts, 0), 0);
    for (const GraphNode& n : graph.nodes) {
        if (n.coord.chart > static_cast<int>(st.per_chart.size()))
            st.per_chart.resize(n.coord.chart, 0);
        ++st.per_chart[n.coord.chart - 1];
    }

    const size_t n = graph.nodes.size();
    std::vector<int> component(n, -1);
    std::vector<size_t> comp_size;
    for (size_t start = 0; start < n; ++start) {
        if (component[start] >= 0) continue;
        const int comp = static_cast<int>(comp_size.size());
        size_t count = 0;
        std::deque<int> queue{static_cast<int>(start)};
        component[start] = comp;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            ++count;
            for (const HalfEdge& he : graph.adjacency[u])
                if (component[he.to] < 0) {
                    component[he.to] = comp;
                    queue.push_back(he.to);
                }
        }
        comp_size.push_back(count);
    }
    st.component_count = comp_size.size();
    if (n == 0) return st;

    int largest = 0;
    for (size_t c = 1; c < comp_size.size(); ++c)
        if (comp_size[c] > comp_size[largest]) largest = static_cast<int>(c);

    // Hop diameter of the largest component: BFS from each of its nodes.
    int diameter = 0;
    std::vector<int> hops(n);
    for (size_t start = 0; start < n; ++start) {
        if (component[start] != largest) continue;
        std::fill(hops.begin(), hops.end(), -1);
        std::deque<int> queue{static_cast<int>(start)};
        hops[start] = 0;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            diameter = std::max(diameter, hops[u]);
            for (const HalfEdge& he : graph.adjacency[u])
                if (hops[he.to] < 0) {
                    hops[he.to] = hops[u] + 1;
                    queue.push_back(he.to);
                }
        }
    }
    st.diameter = diameter;
    return st;
}

}  // namespace atlasgeo
