// Command-line surface for atlas graph geodesics: build latent graphs from
// datasets or builtin manifolds, run interpolation queries, and export
// plot-ready evaluation data.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atlasgeo/analytic.hpp"
#include "atlasgeo/atlas.hpp"
#include "atlasgeo/io.hpp"
#include "atlasgeo/metric.hpp"
#include "atlasgeo/rng.hpp"
#include "atlasgeo/search.hpp"

namespace {

using namespace atlasgeo;

bool is_builtin(const std::string& spec) {
    return spec == "flat" || spec == "circle" || spec == "sphere";
}

Vec parse_coords(const std::string& text) {
    Vec out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        const size_t end = comma == std::string::npos ? text.size() : comma;
        double v = 0.0;
        const auto res = std::from_chars(text.data() + pos, text.data() + end, v);
        if (res.ec != std::errc{} || res.ptr != text.data() + end)
            throw usage_error("malformed coordinate list '" + text + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw usage_error("empty coordinate list");
    return out;
}

std::vector<AmbientPoint> load_points(const std::string& path, const std::string& format,
                                      int expected_dim) {
    const DatasetMatrix ds = load_dataset(path, dataset_format_from_string(format));
    if (ds.rows > 0 && static_cast<int>(ds.dim) != expected_dim)
        throw usage_error("dataset dimension " + std::to_string(ds.dim) +
                          " does not match atlas ambient dim " + std::to_string(expected_dim));
    return ds.to_points();
}

void print_stats(const LatentGraph& graph) {
    const GraphStats st = graph_stats(graph);
    std::printf("graph: %zu nodes / %zu edges / diameter %d\n", st.node_count, st.edge_count,
                st.diameter);
    std::printf("components: %zu\n", st.component_count);
    for (size_t i = 0; i < st.per_chart.size(); ++i)
        std::printf("chart %zu: %zu nodes\n", i + 1, st.per_chart[i]);
    for (const std::string& w : graph.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

std::string chart_sequence(const std::vector<PathSample>& samples) {
    std::string seq;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (i) {
            const int prev = samples[i - 1].coord.chart;
            const int cur = samples[i].coord.chart;
            if (prev != cur)
                seq += " y" + std::to_string(prev) + "/y" + std::to_string(cur);
            seq += ' ';
        }
        seq += "y" + std::to_string(samples[i].coord.chart);
    }
    return seq;
}

struct BuildArgs {
    std::string atlas, data, format = "csv", out;
    int n = 2000, k = 20, steps = 15;
    double eps = 0.05;
    uint64_t seed = 0;
};

int cmd_build_graph(const BuildArgs& a) {
    const AtlasPtr atlas = resolve_atlas(a.atlas);
    std::vector<AmbientPoint> data;
    if (!a.data.empty()) {
        data = load_points(a.data, a.format, atlas->ambient_dim());
    } else if (is_builtin(a.atlas)) {
        data = sample_manifold(a.atlas, a.n, a.seed);
    } else {
        throw usage_error("--data is required for a neural atlas");
    }
    BuildConfig cfg;
    cfg.sample_count = a.n;
    cfg.neighbors = a.k;
    cfg.curve_steps = a.steps;
    cfg.eps = a.eps;
    cfg.seed = a.seed;
    const LatentGraph graph = build_graph(*atlas, data, cfg);
    save_graph(graph, a.out);
    print_stats(graph);
    std::printf("wrote %s\n", a.out.c_str());
    return 0;
}

struct InterpolateArgs {
    std::string graph, atlas, from_coords, to_coords, out, frames, frame_shape;
    int from_index = -1, to_index = -1;
    int samples = 8;
};

int cmd_interpolate(const InterpolateArgs& a) {
    const AtlasPtr atlas = resolve_atlas(a.atlas);
    LatentGraph graph = load_graph(a.graph);
    graph.check_fingerprint(*atlas);

    const bool by_index = a.from_index >= 0 || a.to_index >= 0;
    const bool by_coords = !a.from_coords.empty() || !a.to_coords.empty();
    if (by_index == by_coords)
        throw usage_error("give either --from-index/--to-index or --from-coords/--to-coords");

    AmbientPoint x0, x1;
    if (by_index) {
        if (a.from_index < 0 || a.to_index < 0 ||
            a.from_index >= static_cast<int>(graph.nodes.size()) ||
            a.to_index >= static_cast<int>(graph.nodes.size()))
            throw usage_error("node index outside the graph (0.." +
                              std::to_string(graph.nodes.size()) + ")");
        x0 = graph.nodes[a.from_index].decoded;
        x1 = graph.nodes[a.to_index].decoded;
    } else {
        x0 = parse_coords(a.from_coords);
        x1 = parse_coords(a.to_coords);
        if (static_cast<int>(x0.size()) != atlas->ambient_dim() ||
            static_cast<int>(x1.size()) != atlas->ambient_dim())
            throw usage_error("endpoint coordinates must have ambient dim " +
                              std::to_string(atlas->ambient_dim()));
    }

    const GeodesicPath path =
        geodesic_between(graph, *atlas, x0, x1, graph.config.neighbors);
    const std::vector<PathSample> samples = resample_equidistant(path, *atlas, a.samples);
    save_path(path, samples, a.out);

    size_t cross = 0;
    for (EdgeKind k : path.segment_kinds)
        if (k == EdgeKind::cross_chart) ++cross;
    std::printf("total length %s\n", format_double(path.total_length).c_str());
    std::printf("charts: %s\n", chart_sequence(samples).c_str());
    std::printf("cross-chart segments: %zu\n", cross);
    std::printf("wrote %s\n", a.out.c_str());

    if (!a.frames.empty()) {
        int w = 0, h = 0;
        if (std::sscanf(a.frame_shape.c_str(), "%dx%d", &w, &h) != 2 || w < 1 || h < 1)
            throw usage_error("--frame-shape must be WxH (e.g. 28x28)");
        std::filesystem::create_directories(a.frames);
        for (size_t i = 0; i < samples.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%03zu.pgm", i);
            write_pgm(samples[i].x, w, h, (std::filesystem::path(a.frames) / name).string());
        }
        std::printf("wrote %zu frames to %s\n", samples.size(), a.frames.c_str());
    }
    return 0;
}

struct EvalArgs {
    std::string graph, atlas, out, data, format = "csv";
    int pairs = 100;
    uint64_t seed = 0;
};

int cmd_eval(const EvalArgs& a) {
    const AtlasPtr atlas = resolve_atlas(a.atlas);
    LatentGraph graph = load_graph(a.graph);
    graph.check_fingerprint(*atlas);
    if (a.pairs < 1) throw usage_error("--pairs must be >= 1");

    std::vector<AmbientPoint> pool;
    if (!a.data.empty()) {
        pool = load_points(a.data, a.format, atlas->ambient_dim());
        if (pool.empty()) throw usage_error("evaluation dataset is empty");
    } else if (is_builtin(a.atlas)) {
        pool = sample_manifold(a.atlas, 2 * a.pairs, a.seed);
    } else {
        throw usage_error("--data is required to evaluate a neural atlas");
    }

    const bool with_oracle = is_builtin(a.atlas);
    std::mt19937_64 gen(a.seed);
    std::ofstream csv(a.out, std::ios::binary);
    if (!csv) throw format_error("cannot write '" + a.out + "'");
    csv << "pair,oracle,graph_length,hops,cross_chart_segments\n";

    double ratio_sum = 0.0;
    size_t ratio_count = 0;
    for (int p = 0; p < a.pairs; ++p) {
        AmbientPoint x0, x1;
        if (!a.data.empty()) {
            x0 = pool[uniform_below(gen, pool.size())];
            x1 = pool[uniform_below(gen, pool.size())];
        } else {
            x0 = pool[2 * p];
            x1 = pool[2 * p + 1];
        }
        const GeodesicPath path =
            geodesic_between(graph, *atlas, x0, x1, graph.config.neighbors);
        size_t cross = 0;
        for (EdgeKind k : path.segment_kinds)
            if (k == EdgeKind::cross_chart) ++cross;

        csv << p << ',';
        if (with_oracle) {
            const double oracle = oracle_distance(a.atlas, x0, x1);
            csv << format_double(oracle);
            if (oracle > 0.0) {
                ratio_sum += path.total_length / oracle;
                ++ratio_count;
            }
        }
        csv << ',' << format_double(path.total_length) << ',' << path.nodes.size() - 1 << ','
            << cross << '\n';
    }
    std::printf("wrote %s (%d pairs)\n", a.out.c_str(), a.pairs);
    if (ratio_count > 0)
        std::printf("mean length/oracle ratio: %.6f\n", ratio_sum / ratio_count);
    return 0;
}

struct ConfidenceArgs {
    std::string atlas, data, format = "csv", out;
    int n = 1000;
    uint64_t seed = 0;
};

int cmd_confidence(const ConfidenceArgs& a) {
    const AtlasPtr atlas = resolve_atlas(a.atlas);
    std::vector<AmbientPoint> pts;
    if (!a.data.empty()) {
        pts = load_points(a.data, a.format, atlas->ambient_dim());
    } else if (is_builtin(a.atlas)) {
        pts = sample_manifold(a.atlas, a.n, a.seed);
    } else {
        throw usage_error("--data is required for a neural atlas");
    }
    std::ofstream csv(a.out, std::ios::binary);
    if (!csv) throw format_error("cannot write '" + a.out + "'");
    csv << "max_psi\n";
    for (const AmbientPoint& x : pts) {
        const SimplexWeights psi = atlas->partition(x);
        double best = 0.0;
        for (double w : psi.w) best = std::max(best, w);
        csv << format_double(best) << '\n';
    }
    std::printf("wrote %s (%zu points)\n", a.out.c_str(), pts.size());
    return 0;
}

struct MetricArgs {
    std::string atlas, point;
    int chart = 1;
};

int cmd_metric(const MetricArgs& a) {
    const AtlasPtr atlas = resolve_atlas(a.atlas);
    const Vec z = parse_coords(a.point);
    const MetricMatrix g = pullback_metric(*atlas, LatentCoord{a.chart, z});
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c)
            std::printf("%s%s", c ? " " : "", format_double(g.at(r, c)).c_str());
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent graph geodesics for multi-chart generative models"};
    app.require_subcommand(1);

    BuildArgs build;
    CLI::App* sb = app.add_subcommand("build-graph", "Build a latent k-NN graph");
    sb->add_option("--atlas", build.atlas, "Atlas spec: flat|circle|sphere|neural:<path>")
        ->required();
    sb->add_option("--data", build.data, "Dataset path (omit to sample a builtin manifold)");
    sb->add_option("--format", build.format, "Dataset format: csv|raw_f32|idx");
    sb->add_option("--n", build.n, "Points sampled into the graph");
    sb->add_option("--k", build.k, "Nearest neighbors per node");
    sb->add_option("--steps", build.steps, "Curve-length discretization steps");
    sb->add_option("--eps", build.eps, "Chart membership threshold");
    sb->add_option("--seed", build.seed, "RNG seed");
    sb->add_option("--out", build.out, "Output graph JSON")->required();

    InterpolateArgs interp;
    CLI::App* si = app.add_subcommand("interpolate", "Geodesic interpolation between two points");
    si->add_option("--graph", interp.graph, "Graph JSON from build-graph")->required();
    si->add_option("--atlas", interp.atlas, "Atlas spec the graph was built with")->required();
    si->add_option("--from-index", interp.from_index, "Start graph node id");
    si->add_option("--to-index", interp.to_index, "Goal graph node id");
    si->add_option("--from-coords", interp.from_coords, "Start ambient point (comma-separated)");
    si->add_option("--to-coords", interp.to_coords, "Goal ambient point (comma-separated)");
    si->add_option("--samples", interp.samples, "Equidistant samples along the path");
    si->add_option("--out", interp.out, "Output path JSON")->required();
    si->add_option("--frames", interp.frames, "Directory for PGM frames (one per sample)");
    si->add_option("--frame-shape", interp.frame_shape, "Frame shape WxH, W*H == ambient dim");

    EvalArgs eval;
    CLI::App* se = app.add_subcommand("eval", "Batch geodesic queries to CSV");
    se->add_option("--graph", eval.graph, "Graph JSON from build-graph")->required();
    se->add_option("--atlas", eval.atlas, "Atlas spec the graph was built with")->required();
    se->add_option("--pairs", eval.pairs, "Number of random endpoint pairs");
    se->add_option("--seed", eval.seed, "RNG seed for pair sampling");
    se->add_option("--out", eval.out, "Output CSV")->required();
    se->add_option("--data", eval.data, "Endpoint pool (required for neural atlases)");
    se->add_option("--format", eval.format, "Dataset format: csv|raw_f32|idx");

    ConfidenceArgs conf;
    CLI::App* sc = app.add_subcommand("confidence", "Chart assignment confidence per point");
    sc->add_option("--atlas", conf.atlas, "Atlas spec")->required();
    sc->add_option("--data", conf.data, "Dataset path (omit to sample a builtin manifold)");
    sc->add_option("--format", conf.format, "Dataset format: csv|raw_f32|idx");
    sc->add_option("--n", conf.n, "Sample count when --data is omitted");
    sc->add_option("--seed", conf.seed, "RNG seed when --data is omitted");
    sc->add_option("--out", conf.out, "Output CSV")->required();

    MetricArgs metric;
    CLI::App* sm = app.add_subcommand("metric", "Print the pullback metric at a latent point");
    sm->add_option("--atlas", metric.atlas, "Atlas spec")->required();
    sm->add_option("--chart", metric.chart, "Chart index (1-based)")->required();
    sm->add_option("--point", metric.point, "Latent point (comma-separated)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sb->parsed()) return cmd_build_graph(build);
        if (si->parsed()) return cmd_interpolate(interp);
        if (se->parsed()) return cmd_eval(eval);
        if (sc->parsed()) return cmd_confidence(conf);
        if (sm->parsed()) return cmd_metric(metric);
        return 2;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const no_path_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const format_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 5;
    }
}
