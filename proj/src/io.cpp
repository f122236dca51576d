#include "atlasgeo/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace atlasgeo {

using nlohmann::json;

DatasetFormat dataset_format_from_string(const std::string& s) {
    if (s == "csv") return DatasetFormat::csv;
    if (s == "raw_f32") return DatasetFormat::raw_f32;
    if (s == "idx") return DatasetFormat::idx;
    throw usage_error("unknown dataset format '" + s + "' (expected csv, raw_f32 or idx)");
}

std::vector<AmbientPoint> DatasetMatrix::to_points() const {
    std::vector<AmbientPoint> pts;
    pts.reserve(rows);
    for (size_t i = 0; i < rows; ++i) pts.push_back(row(i));
    return pts;
}

std::string format_double(double v) {
    char buf[36];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_cell(std::string_view cell, const std::string& path, size_t line, size_t column) {
    size_t begin = 0, end = cell.size();
    while (begin < end && (cell[begin] == ' ' || cell[begin] == '\t')) ++begin;
    while (end > begin && (cell[end - 1] == ' ' || cell[end - 1] == '\t' || cell[end - 1] == '\r'))
        --end;
    const std::string_view body = cell.substr(begin, end - begin);
    double value = 0.0;
    const auto res = std::from_chars(body.data(), body.data() + body.size(), value);
    // strict decimal grammar: full consumption and a digit tail (rejects
    // truncation artifacts like "4." or "1e")
    if (res.ec != std::errc{} || res.ptr != body.data() + body.size() || body.empty() ||
        !(body.back() >= '0' && body.back() <= '9'))
        throw format_error(path + ": line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": not a number: '" + std::string(cell) + "'");
    if (!std::isfinite(value))
        throw format_error(path + ": line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": non-finite value");
    return value;
}

DatasetMatrix load_csv(const std::string& path) {
    const std::string text = read_file(path);
    DatasetMatrix ds;
    ds.provenance = path + " (csv)";

    size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        const size_t line_end = eol == std::string::npos ? text.size() : eol;
        std::string_view line(text.data() + pos, line_end - pos);
        ++line_no;
        pos = eol == std::string::npos ? text.size() : eol + 1;

        if (line.empty() || line == "\r") {
            if (pos >= text.size()) break;  // tolerate one trailing blank line
            throw format_error(path + ": line " + std::to_string(line_no) + ": empty line");
        }

        size_t count = 0, cell_start = 0;
        for (size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                ds.data.push_back(
                    parse_cell(line.substr(cell_start, i - cell_start), path, line_no, count + 1));
                ++count;
                cell_start = i + 1;
            }
        }
        if (ds.rows == 0) {
            ds.dim = count;
        } else if (count != ds.dim) {
            throw format_error(path + ": line " + std::to_string(line_no) + ": expected " +
                               std::to_string(ds.dim) + " values, got " + std::to_string(count));
        }
        ++ds.rows;
    }
    return ds;
}

uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
           static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint32_t read_u32_be(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) << 24 | static_cast<uint32_t>(p[1]) << 16 |
           static_cast<uint32_t>(p[2]) << 8 | static_cast<uint32_t>(p[3]);
}

DatasetMatrix load_raw_f32(const std::string& path) {
    const std::string text = read_file(path);
    const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
    if (text.size() < 16)
        throw format_error(path + ": truncated header at byte offset " +
                           std::to_string(text.size()) + " (need 16 bytes)");
    if (text.compare(0, 4, "AGMD") != 0)
        throw format_error(path + ": bad magic at byte offset 0 (expected \"AGMD\")");
    const uint64_t rows = read_u32_le(bytes + 4);
    const uint64_t dim = read_u32_le(bytes + 8);
    // bytes 12..15 are reserved
    const uint64_t expected = 16 + rows * dim * 4;
    if (text.size() != expected)
        throw format_error(path + ": payload size mismatch: header declares " +
                           std::to_string(rows) + "x" + std::to_string(dim) + " (" +
                           std::to_string(expected) + " bytes), file has " +
                           std::to_string(text.size()));

    DatasetMatrix ds;
    ds.rows = rows;
    ds.dim = dim;
    ds.provenance = path + " (raw_f32)";
    ds.data.reserve(rows * dim);
    for (uint64_t i = 0; i < rows * dim; ++i) {
        const uint64_t off = 16 + i * 4;
        const float f = std::bit_cast<float>(read_u32_le(bytes + off));
        if (!std::isfinite(f))
            throw format_error(path + ": non-finite value at byte offset " + std::to_string(off));
        ds.data.push_back(static_cast<double>(f));
    }
    return ds;
}

DatasetMatrix load_idx(const std::string& path) {
    const std::string text = read_file(path);
    const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
    if (text.size() < 4)
        throw format_error(path + ": truncated magic at byte offset " +
                           std::to_string(text.size()));
    const uint32_t magic = read_u32_be(bytes);
    if (magic != 0x00000803u)
        throw format_error(path + ": bad IDX magic at byte offset 0 (expected 0x00000803 for a "
                                  "u8 3-D tensor)");
    if (text.size() < 16)
        throw format_error(path + ": truncated dimension header at byte offset " +
                           std::to_string(text.size()) + " (need 16 bytes)");
    const uint64_t count = read_u32_be(bytes + 4);
    const uint64_t rows_px = read_u32_be(bytes + 8);
    const uint64_t cols_px = read_u32_be(bytes + 12);
    const uint64_t expected = 16 + count * rows_px * cols_px;
    if (text.size() != expected)
        throw format_error(path + ": payload size mismatch: header declares " +
                           std::to_string(count) + "x" + std::to_string(rows_px) + "x" +
                           std::to_string(cols_px) + " (" + std::to_string(expected) +
                           " bytes), file has " + std::to_string(text.size()));

    DatasetMatrix ds;
    ds.rows = count;
    ds.dim = rows_px * cols_px;
    ds.provenance = path + " (idx)";
    ds.data.reserve(count * ds.dim);
    for (uint64_t i = 16; i < text.size(); ++i)
        ds.data.push_back(static_cast<double>(bytes[i]) / 255.0);
    return ds;
}

}  // namespace

DatasetMatrix load_dataset(const std::string& path, DatasetFormat format) {
    switch (format) {
        case DatasetFormat::csv: return load_csv(path);
        case DatasetFormat::raw_f32: return load_raw_f32(path);
        case DatasetFormat::idx: return load_idx(path);
    }
    throw usage_error("unhandled dataset format");
}

namespace {

void emit_vec(std::string& out, const Vec& v) {
    out += '[';
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    out += ']';
}

}  // namespace

std::string graph_to_json(const LatentGraph& graph) {
    std::string out;
    out.reserve(graph.nodes.size() * 160 + 64);
    out += "{\"atlas\":";
    out += json(graph.atlas_spec).dump();  // quote/escape the spec string
    out += ",\"dims\":{\"m\":" + std::to_string(graph.charts) +
           ",\"d\":" + std::to_string(graph.latent_dim) +
           ",\"D\":" + std::to_string(graph.ambient_dim) + "}";
    out += ",\"config\":{\"N\":" + std::to_string(graph.config.sample_count) +
           ",\"k\":" + std::to_string(graph.config.neighbors) +
           ",\"n\":" + std::to_string(graph.config.curve_steps) +
           ",\"eps\":" + format_double(graph.config.eps) +
           ",\"seed\":" + std::to_string(graph.config.seed) +
           ",\"h\":" + format_double(graph.config.fd_step) + "},\n\"nodes\":[\n";
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        const GraphNode& n = graph.nodes[i];
        if (i) out += ",\n";
        out += "{\"id\":" + std::to_string(n.id) + ",\"chart\":" + std::to_string(n.coord.chart) +
               ",\"z\":";
        emit_vec(out, n.coord.z);
        out += ",\"decoded\":";
        emit_vec(out, n.decoded);
        out += ",\"src\":";
        out += n.source_index < 0 ? "null" : std::to_string(n.source_index);
        out += '}';
    }
    out += "\n],\n\"edges\":[\n";
    const std::vector<GraphEdge> edges = graph.edge_list();
    for (size_t i = 0; i < edges.size(); ++i) {
        if (i) out += ",\n";
        out += "{\"a\":" + std::to_string(edges[i].a) + ",\"b\":" + std::to_string(edges[i].b) +
               ",\"w\":" + format_double(edges[i].weight) + ",\"kind\":\"" +
               edge_kind_name(edges[i].kind) + "\"}";
    }
    out += "\n]}\n";
    return out;
}

void save_graph(const LatentGraph& graph, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw format_error("cannot write graph file '" + path + "'");
    f << graph_to_json(graph);
}

namespace {

const json& require_key(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw format_error(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw format_error(where + ": missing field '" + key + "'");
    return *it;
}

int require_int(const json& obj, const char* key, const std::string& where) {
    const json& v = require_key(obj, key, where);
    if (!v.is_number_integer())
        throw format_error(where + "." + key + ": expected an integer");
    return v.get<int>();
}

double require_number(const json& obj, const char* key, const std::string& where) {
    const json& v = require_key(obj, key, where);
    if (!v.is_number()) throw format_error(where + "." + key + ": expected a number");
    return v.get<double>();
}

Vec require_vec(const json& obj, const char* key, const std::string& where, size_t len) {
    const json& v = require_key(obj, key, where);
    if (!v.is_array() || v.size() != len)
        throw format_error(where + "." + key + ": expected an array of length " +
                           std::to_string(len));
    Vec out(len);
    for (size_t i = 0; i < len; ++i) {
        if (!v[i].is_number())
            throw format_error(where + "." + key + "[" + std::to_string(i) +
                               "]: expected a number");
        out[i] = v[i].get<double>();
    }
    return out;
}

}  // namespace

LatentGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open graph file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw format_error("graph file '" + path + "': " + e.what());
    }

    LatentGraph g;
    const json& atlas = require_key(j, "atlas", "$");
    if (!atlas.is_string()) throw format_error("$.atlas: expected a string");
    g.atlas_spec = atlas.get<std::string>();

    const json& dims = require_key(j, "dims", "$");
    g.charts = require_int(dims, "m", "$.dims");
    g.latent_dim = require_int(dims, "d", "$.dims");
    g.ambient_dim = require_int(dims, "D", "$.dims");
    if (g.charts < 1 || g.latent_dim < 1 || g.ambient_dim < 1)
        throw format_error("$.dims: dimensions must be positive");

    const json& cfg = require_key(j, "config", "$");
    g.config.sample_count = require_int(cfg, "N", "$.config");
    g.config.neighbors = require_int(cfg, "k", "$.config");
    g.config.curve_steps = require_int(cfg, "n", "$.config");
    g.config.eps = require_number(cfg, "eps", "$.config");
    const json& seed = require_key(cfg, "seed", "$.config");
    if (!seed.is_number_unsigned() && !seed.is_number_integer())
        throw format_error("$.config.seed: expected an integer");
    g.config.seed = seed.get<uint64_t>();
    g.config.fd_step = require_number(cfg, "h", "$.config");

    const json& nodes = require_key(j, "nodes", "$");
    if (!nodes.is_array()) throw format_error("$.nodes: expected an array");
    for (size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "$.nodes[" + std::to_string(i) + "]";
        const json& jn = nodes[i];
        GraphNode n;
        if (require_int(jn, "id", where) != static_cast<int>(i))
            throw format_error(where + ".id: node ids must be dense and ascending from 0");
        n.coord.chart = require_int(jn, "chart", where);
        if (n.coord.chart < 1 || n.coord.chart > g.charts)
            throw format_error(where + ".chart: outside 1.." + std::to_string(g.charts));
        n.coord.z = require_vec(jn, "z", where, g.latent_dim);
        n.decoded = require_vec(jn, "decoded", where, g.ambient_dim);
        const json& src = require_key(jn, "src", where);
        if (src.is_null()) {
            n.source_index = -1;
        } else if (src.is_number_integer()) {
            n.source_index = src.get<int>();
        } else {
            throw format_error(where + ".src: expected an integer or null");
        }
        g.add_node(std::move(n));
    }

    const json& edges = require_key(j, "edges", "$");
    if (!edges.is_array()) throw format_error("$.edges: expected an array");
    for (size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "$.edges[" + std::to_string(i) + "]";
        const json& je = edges[i];
        const int a = require_int(je, "a", where);
        const int b = require_int(je, "b", where);
        if (a < 0 || b < 0 || a >= static_cast<int>(g.nodes.size()) ||
            b >= static_cast<int>(g.nodes.size()) || a == b)
            throw format_error(where + ": invalid endpoints " + std::to_string(a) + "," +
                               std::to_string(b));
        const double w = require_number(je, "w", where);
        if (!(w >= 0.0)) throw format_error(where + ".w: expected a weight >= 0");
        const json& kind = require_key(je, "kind", where);
        if (!kind.is_string()) throw format_error(where + ".kind: expected a string");
        EdgeKind ek;
        try {
            ek = edge_kind_from_string(kind.get<std::string>());
        } catch (const format_error&) {
            throw format_error(where + ".kind: unknown edge kind '" + kind.get<std::string>() +
                               "'");
        }
        g.add_edge(a, b, w, ek);
    }
    return g;
}

std::string path_to_json(const GeodesicPath& path, const std::vector<PathSample>& samples) {
    std::string out = "{\"total_length\":" + format_double(path.total_length) + ",\n\"nodes\":[\n";
    for (size_t i = 0; i < path.nodes.size(); ++i) {
        if (i) out += ",\n";
        out += "{\"chart\":" + std::to_string(path.nodes[i].chart) + ",\"z\":";
        emit_vec(out, path.nodes[i].z);
        out += '}';
    }
    out += "\n],\n\"segments\":[\n";
    for (size_t i = 0; i < path.segment_lengths.size(); ++i) {
        if (i) out += ",\n";
        out += "{\"len\":" + format_double(path.segment_lengths[i]) + ",\"kind\":\"" +
               edge_kind_name(path.segment_kinds[i]) + "\"}";
    }
    out += "\n],\n\"samples\":[\n";
    for (size_t i = 0; i < samples.size(); ++i) {
        if (i) out += ",\n";
        out += "{\"chart\":" + std::to_string(samples[i].coord.chart) + ",\"z\":";
        emit_vec(out, samples[i].coord.z);
        out += ",\"x\":";
        emit_vec(out, samples[i].x);
        out += '}';
    }
    out += "\n]}\n";
    return out;
}

void save_path(const GeodesicPath& path, const std::vector<PathSample>& samples,
               const std::string& path_file) {
    std::ofstream f(path_file, std::ios::binary);
    if (!f) throw format_error("cannot write path file '" + path_file + "'");
    f << path_to_json(path, samples);
}

void write_pgm(const AmbientPoint& x, int width, int height, const std::string& path) {
    if (width < 1 || height < 1) throw usage_error("PGM dimensions must be positive");
    if (static_cast<size_t>(width) * height != x.size())
        throw usage_error("PGM shape " + std::to_string(width) + "x" + std::to_string(height) +
                          " does not match vector length " + std::to_string(x.size()));
    std::ofstream f(path, std::ios::binary);
    if (!f) throw format_error("cannot write PGM file '" + path + "'");
    f << "P5\n" << width << ' ' << height << "\n255\n";
    std::string pixels(x.size(), '\0');
    for (size_t i = 0; i < x.size(); ++i) {
        const double v = std::clamp(x[i], 0.0, 1.0);
        pixels[i] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
    f.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace atlasgeo
