#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "atlasgeo/analytic.hpp"
#include "atlasgeo/io.hpp"
#include "helpers.hpp"

using namespace atlasgeo;
using nlohmann::json;

namespace {

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void push_u32_le(std::string& s, uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void push_u32_be(std::string& s, uint32_t v) {
    for (int i = 3; i >= 0; --i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void push_f32_le(std::string& s, float f) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    push_u32_le(s, bits);
}

std::string valid_raw_f32() {
    std::string s = "AGMD";
    push_u32_le(s, 2);  // rows
    push_u32_le(s, 3);  // dim
    push_u32_le(s, 0);  // reserved
    for (float f : {1.5f, -2.0f, 0.25f, 3.0f, 4.0f, 5.5f}) push_f32_le(s, f);
    return s;
}

std::string valid_idx() {
    std::string s;
    push_u32_be(s, 0x00000803u);
    push_u32_be(s, 2);  // images
    push_u32_be(s, 2);  // rows
    push_u32_be(s, 2);  // cols
    for (unsigned char b : {0, 51, 128, 255, 10, 20, 30, 40}) s.push_back(static_cast<char>(b));
    return s;
}

LatentGraph small_sphere_graph() {
    const AtlasPtr sphere = make_atlas("sphere");
    BuildConfig cfg;
    cfg.sample_count = 60;
    cfg.neighbors = 5;
    cfg.seed = 44;
    return build_graph(*sphere, sample_manifold("sphere", 60, 44), cfg);
}

}  // namespace

TEST_CASE("csv datasets") {
    write_bytes("tmp_ds.csv", "1.0,2.0\n3.0,4.0");
    const DatasetMatrix ds = load_dataset("tmp_ds.csv", DatasetFormat::csv);
    CHECK(ds.rows == 2);
    CHECK(ds.dim == 2);
    CHECK(ds.data == std::vector<double>{1.0, 2.0, 3.0, 4.0});

    write_bytes("tmp_ds.csv", "1.0,2.0\n3.0,4.0\n");  // trailing newline is fine
    CHECK(load_dataset("tmp_ds.csv", DatasetFormat::csv).rows == 2);

    write_bytes("tmp_ds.csv", " 4.5e1 ,\t-2\r\n");  // padded cells, CRLF
    const DatasetMatrix padded = load_dataset("tmp_ds.csv", DatasetFormat::csv);
    CHECK(padded.data == std::vector<double>{45.0, -2.0});

    write_bytes("tmp_ds.csv", "");
    CHECK(load_dataset("tmp_ds.csv", DatasetFormat::csv).rows == 0);

    write_bytes("tmp_ds.csv", "1.0,oops\n");
    CHECK_THROWS_WITH_AS(load_dataset("tmp_ds.csv", DatasetFormat::csv),
                         doctest::Contains("line 1"), format_error);

    write_bytes("tmp_ds.csv", "1.0,2.0\n3.0\n");
    CHECK_THROWS_WITH_AS(load_dataset("tmp_ds.csv", DatasetFormat::csv),
                         doctest::Contains("line 2"), format_error);

    write_bytes("tmp_ds.csv", "1.0,\n");  // empty cell
    CHECK_THROWS_AS(load_dataset("tmp_ds.csv", DatasetFormat::csv), format_error);

    write_bytes("tmp_ds.csv", "1.0,inf\n");  // non-finite
    CHECK_THROWS_AS(load_dataset("tmp_ds.csv", DatasetFormat::csv), format_error);

    // dropping the final byte leaves a trailing '.' in the last cell
    const std::string canon = "1.0,2.0\n3.0,4.0";
    write_bytes("tmp_ds.csv", canon.substr(0, canon.size() - 1));
    CHECK_THROWS_AS(load_dataset("tmp_ds.csv", DatasetFormat::csv), format_error);

    CHECK_THROWS_AS(load_dataset("no_such_file.csv", DatasetFormat::csv), format_error);
    CHECK_THROWS_AS(dataset_format_from_string("parquet"), usage_error);
}

TEST_CASE("raw_f32 datasets") {
    const std::string canon = valid_raw_f32();
    write_bytes("tmp_ds.raw", canon);
    const DatasetMatrix ds = load_dataset("tmp_ds.raw", DatasetFormat::raw_f32);
    CHECK(ds.rows == 2);
    CHECK(ds.dim == 3);
    CHECK(ds.data[0] == 1.5);
    CHECK(ds.data[5] == 5.5);

    // every truncation fails (header or payload)
    for (size_t len = 0; len < canon.size(); ++len) {
        write_bytes("tmp_ds.raw", canon.substr(0, len));
        CHECK_THROWS_AS(load_dataset("tmp_ds.raw", DatasetFormat::raw_f32), format_error);
    }

    std::string bad = canon;
    bad[0] = 'X';
    write_bytes("tmp_ds.raw", bad);
    CHECK_THROWS_WITH_AS(load_dataset("tmp_ds.raw", DatasetFormat::raw_f32),
                         doctest::Contains("magic"), format_error);

    // header declares more data than the file holds
    std::string overdeclared = canon;
    overdeclared[4] = 100;
    write_bytes("tmp_ds.raw", overdeclared);
    CHECK_THROWS_WITH_AS(load_dataset("tmp_ds.raw", DatasetFormat::raw_f32),
                         doctest::Contains("size mismatch"), format_error);

    std::string nonfinite = canon.substr(0, 16);
    push_u32_le(nonfinite, 0x7f800000u);  // +inf
    for (int i = 0; i < 5; ++i) push_f32_le(nonfinite, 0.0f);
    write_bytes("tmp_ds.raw", nonfinite);
    CHECK_THROWS_WITH_AS(load_dataset("tmp_ds.raw", DatasetFormat::raw_f32),
                         doctest::Contains("non-finite"), format_error);
}

TEST_CASE("idx datasets") {
    const std::string canon = valid_idx();
    write_bytes("tmp_ds.idx", canon);
    const DatasetMatrix ds = load_dataset("tmp_ds.idx", DatasetFormat::idx);
    CHECK(ds.rows == 2);
    CHECK(ds.dim == 4);
    CHECK(ds.data[0] == 0.0);
    CHECK(ds.data[3] == 1.0);
    CHECK(ds.data[2] == doctest::Approx(128.0 / 255.0));
    for (double v : ds.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    for (size_t len = 0; len < canon.size(); ++len) {
        write_bytes("tmp_ds.idx", canon.substr(0, len));
        CHECK_THROWS_AS(load_dataset("tmp_ds.idx", DatasetFormat::idx), format_error);
    }

    std::string bad;
    push_u32_be(bad, 0x00000801u);  // u8 1-D tensor, not supported
    bad += canon.substr(4);
    write_bytes("tmp_ds.idx", bad);
    CHECK_THROWS_WITH_AS(load_dataset("tmp_ds.idx", DatasetFormat::idx),
                         doctest::Contains("magic"), format_error);
}

TEST_CASE("pgm writer") {
    write_pgm({0.0, 0.0, 0.0, 0.0}, 2, 2, "tmp.pgm");
    CHECK(read_bytes("tmp.pgm") == std::string("P5\n2 2\n255\n\0\0\0\0", 15));

    write_pgm({1.0, 0.5, -0.25, 2.0}, 2, 2, "tmp.pgm");
    const std::string body = read_bytes("tmp.pgm").substr(11);
    CHECK(static_cast<unsigned char>(body[0]) == 255);
    CHECK(static_cast<unsigned char>(body[1]) == 128);  // round half up
    CHECK(static_cast<unsigned char>(body[2]) == 0);    // clamped below
    CHECK(static_cast<unsigned char>(body[3]) == 255);  // clamped above

    CHECK_THROWS_AS(write_pgm({0.0, 0.0, 0.0}, 2, 2, "tmp.pgm"), usage_error);
    CHECK_THROWS_AS(write_pgm({0.0}, 0, 1, "tmp.pgm"), usage_error);
}

TEST_CASE("graph JSON round trip is canonical") {
    const LatentGraph g = small_sphere_graph();
    save_graph(g, "tmp_graph.json");
    const LatentGraph loaded = load_graph("tmp_graph.json");

    const GraphStats a = graph_stats(g);
    const GraphStats b = graph_stats(loaded);
    CHECK(a.node_count == b.node_count);
    CHECK(a.edge_count == b.edge_count);
    CHECK(a.diameter == b.diameter);
    CHECK(a.component_count == b.component_count);
    CHECK(a.per_chart == b.per_chart);
    CHECK(loaded.config.seed == g.config.seed);
    CHECK(loaded.atlas_spec == "sphere");

    save_graph(loaded, "tmp_graph2.json");
    CHECK(read_bytes("tmp_graph.json") == read_bytes("tmp_graph2.json"));

    // node coordinates and weights survive bit-exactly
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        CHECK(testutil::bits_equal(g.nodes[i].coord.z, loaded.nodes[i].coord.z));
        CHECK(testutil::bits_equal(g.nodes[i].decoded, loaded.nodes[i].decoded));
    }
}

TEST_CASE("graph JSON validation errors name their field") {
    const LatentGraph g = small_sphere_graph();
    save_graph(g, "tmp_graph.json");
    json j = json::parse(read_bytes("tmp_graph.json"));

    {
        json bad = j;
        bad.erase("edges");
        write_bytes("tmp_bad_graph.json", bad.dump());
        CHECK_THROWS_WITH_AS(load_graph("tmp_bad_graph.json"), doctest::Contains("edges"),
                             format_error);
    }
    {
        json bad = j;
        bad["nodes"][3]["chart"] = 9;
        write_bytes("tmp_bad_graph.json", bad.dump());
        CHECK_THROWS_WITH_AS(load_graph("tmp_bad_graph.json"), doctest::Contains("nodes[3]"),
                             format_error);
    }
    {
        json bad = j;
        bad["edges"][0]["w"] = -2.0;
        write_bytes("tmp_bad_graph.json", bad.dump());
        CHECK_THROWS_WITH_AS(load_graph("tmp_bad_graph.json"), doctest::Contains("edges[0]"),
                             format_error);
    }

    // one-byte truncation can never parse
    const std::string bytes = read_bytes("tmp_graph.json");
    write_bytes("tmp_bad_graph.json", bytes.substr(0, bytes.size() - 2));
    CHECK_THROWS_AS(load_graph("tmp_bad_graph.json"), format_error);

    // a graph saved against one atlas refuses queries against another
    const LatentGraph loaded = load_graph("tmp_graph.json");
    CHECK_THROWS_AS(loaded.check_fingerprint(*make_atlas("flat")), format_error);
}

TEST_CASE("path JSON carries nodes, segments and samples") {
    GeodesicPath p;
    p.nodes = {LatentCoord{1, {0.0, 0.0}}, LatentCoord{1, {1.0, 0.0}}};
    p.segment_lengths = {1.0};
    p.segment_kinds = {EdgeKind::intra_chart};
    p.total_length = 1.0;
    std::vector<PathSample> samples = {{p.nodes[0], {0.0, 0.0, 0.0}},
                                       {p.nodes[1], {1.0, 0.0, 0.0}}};
    save_path(p, samples, "tmp_path.json");
    const json j = json::parse(read_bytes("tmp_path.json"));
    CHECK(j["total_length"] == 1.0);
    CHECK(j["nodes"].size() == 2);
    CHECK(j["segments"][0]["kind"] == "intra_chart");
    CHECK(j["samples"].size() == 2);
    CHECK(j["samples"][1]["x"].size() == 3);
}

TEST_CASE("format_double round-trips doubles exactly") {
    for (double v : {1.0 / 3.0, 0.1, 1e-300, 6.02e23, -0.0, 5.0, 3.141592653589793,
                     -123456.789012345678, 4.9406564584124654e-324}) {
        const double back = std::strtod(format_double(v).c_str(), nullptr);
        CHECK(testutil::bits_equal(back, v));
    }
}
