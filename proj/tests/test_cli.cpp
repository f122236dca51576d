#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "helpers.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ATLASGEO_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string read_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

size_t line_count(const std::string& text) {
    size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("build-graph smoke runs and prints stats") {
    const RunResult r =
        run_cli("build-graph --atlas sphere --n 300 --k 8 --seed 7 --out cli_sphere.json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("nodes") != std::string::npos);
    CHECK(r.output.find("diameter") != std::string::npos);
    CHECK(fs::exists("cli_sphere.json"));
}

TEST_CASE("build-graph usage errors exit with code 2") {
    CHECK(run_cli("build-graph --atlas sphere --n 300 --k 8").exit_code == 2);  // missing --out
    CHECK(run_cli("build-graph --atlas mystery --out x.json").exit_code == 2);
    const std::string img = testutil::fixture("img_net.json");
    CHECK(run_cli("build-graph --atlas neural:" + img + " --out x.json").exit_code == 2);
}

TEST_CASE("build-graph on flat data reports a single chart") {
    const RunResult r =
        run_cli("build-graph --atlas flat --n 200 --k 6 --seed 3 --out cli_flat.json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("chart 1: 200") != std::string::npos);
    CHECK(r.output.find("chart 2") == std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical outputs") {
    const std::string flags = "build-graph --atlas sphere --n 200 --k 6 --seed 12 --out ";
    CHECK(run_cli(flags + "cli_rep1.json").exit_code == 0);
    CHECK(run_cli(flags + "cli_rep2.json").exit_code == 0);
    CHECK(read_bytes("cli_rep1.json") == read_bytes("cli_rep2.json"));
}

TEST_CASE("interpolate crosses charts on antipodal sphere queries") {
    REQUIRE(run_cli("build-graph --atlas sphere --n 400 --k 10 --seed 5 --out cli_s.json")
                .exit_code == 0);
    const RunResult r = run_cli(
        "interpolate --graph cli_s.json --atlas sphere --from-coords 0,0,1 --to-coords 0,0,-1 "
        "--samples 9 --out cli_path.json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("total length") != std::string::npos);
    CHECK(r.output.find("/y") != std::string::npos);  // a y<i>/y<j> transition marker

    const json path = json::parse(read_bytes("cli_path.json"));
    bool has_cross = false;
    for (const json& seg : path["segments"])
        if (seg["kind"] == "cross_chart") has_cross = true;
    CHECK(has_cross);
    CHECK(path["samples"].size() == 9);
}

TEST_CASE("interpolate with --samples 2 emits exactly the endpoints") {
    REQUIRE(fs::exists("cli_s.json"));
    const RunResult r = run_cli(
        "interpolate --graph cli_s.json --atlas sphere --from-index 0 --to-index 5 "
        "--samples 2 --out cli_path2.json");
    CHECK(r.exit_code == 0);
    const json path = json::parse(read_bytes("cli_path2.json"));
    CHECK(path["samples"].size() == 2);
}

TEST_CASE("interpolate argument validation") {
    REQUIRE(fs::exists("cli_s.json"));
    CHECK(run_cli("interpolate --graph cli_s.json --atlas sphere --from-index 0 "
                  "--to-coords 0,0,1 --samples 3 --out x.json")
              .exit_code == 2);
    CHECK(run_cli("interpolate --graph cli_s.json --atlas sphere --from-coords 0,0 "
                  "--to-coords 0,0,1 --samples 3 --out x.json")
              .exit_code == 2);
    CHECK(run_cli("interpolate --graph cli_s.json --atlas flat --from-index 0 --to-index 1 "
                  "--out x.json")
              .exit_code == 4);  // fingerprint mismatch
    CHECK(run_cli("interpolate --graph missing.json --atlas sphere --from-index 0 --to-index 1 "
                  "--out x.json")
              .exit_code == 4);
}

TEST_CASE("disconnected graphs yield exit code 3 with a component diagnostic") {
    std::ofstream csv("cli_clusters.csv");
    std::mt19937_64 gen(9);
    for (int i = 0; i < 30; ++i)
        csv << 0.1 * (i % 5) << "," << 0.1 * (i / 5) << ",0\n";
    for (int i = 0; i < 30; ++i)
        csv << 100.0 + 0.1 * (i % 5) << "," << 100.0 + 0.1 * (i / 5) << ",0\n";
    csv.close();
    REQUIRE(run_cli("build-graph --atlas flat --data cli_clusters.csv --n 60 --k 4 "
                    "--out cli_disc.json")
                .exit_code == 0);
    const RunResult r = run_cli(
        "interpolate --graph cli_disc.json --atlas flat --from-coords 0,0,0 "
        "--to-coords 100,100,0 --samples 3 --out x.json");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("component") != std::string::npos);
}

TEST_CASE("neural frames come out image-shaped") {
    const std::string img = testutil::fixture("img_net.json");

    std::ofstream csv("cli_imgdata.csv");
    std::mt19937_64 gen(31);
    for (int r = 0; r < 60; ++r) {
        for (int c = 0; c < 784; ++c)
            csv << (c ? "," : "") << (static_cast<double>(gen() >> 11) * 0x1.0p-53);
        csv << "\n";
    }
    csv.close();

    REQUIRE(run_cli("build-graph --atlas neural:" + img +
                    " --data cli_imgdata.csv --n 40 --k 5 --out cli_img.json")
                .exit_code == 0);
    fs::remove_all("cli_frames");
    const RunResult r = run_cli("interpolate --graph cli_img.json --atlas neural:" + img +
                                " --from-index 0 --to-index 3 --samples 4 --out cli_imgpath.json "
                                "--frames cli_frames --frame-shape 28x28");
    CHECK(r.exit_code == 0);
    int frames = 0;
    for (const auto& entry : fs::directory_iterator("cli_frames")) {
        ++frames;
        const std::string bytes = read_bytes(entry.path().string());
        CHECK(bytes.rfind("P5\n28 28\n255\n", 0) == 0);
        CHECK(bytes.size() == 13 + 784);
    }
    CHECK(frames == 4);
}

TEST_CASE("eval writes one row per pair with the oracle column filled") {
    REQUIRE(fs::exists("cli_s.json"));
    const RunResult r = run_cli(
        "eval --graph cli_s.json --atlas sphere --pairs 20 --seed 4 --out cli_eval.csv");
    CHECK(r.exit_code == 0);
    const std::string csv = read_bytes("cli_eval.csv");
    CHECK(line_count(csv) == 21);
    CHECK(csv.rfind("pair,oracle,graph_length,hops,cross_chart_segments\n", 0) == 0);
    CHECK(csv.find("0,,") == std::string::npos);  // oracle present on every row

    const RunResult again = run_cli(
        "eval --graph cli_s.json --atlas sphere --pairs 20 --seed 4 --out cli_eval2.csv");
    CHECK(again.exit_code == 0);
    CHECK(read_bytes("cli_eval.csv") == read_bytes("cli_eval2.csv"));
}

TEST_CASE("eval on a neural atlas leaves the oracle column empty") {
    const std::string img = testutil::fixture("img_net.json");
    REQUIRE(fs::exists("cli_img.json"));
    const RunResult r = run_cli("eval --graph cli_img.json --atlas neural:" + img +
                                " --pairs 5 --seed 2 --data cli_imgdata.csv --out cli_eval3.csv");
    CHECK(r.exit_code == 0);
    const std::string csv = read_bytes("cli_eval3.csv");
    CHECK(line_count(csv) == 6);
    CHECK(csv.find("0,,") != std::string::npos);
}

TEST_CASE("confidence output") {
    const RunResult r = run_cli("confidence --atlas flat --n 50 --out cli_conf.csv");
    CHECK(r.exit_code == 0);
    const std::string csv = read_bytes("cli_conf.csv");
    CHECK(line_count(csv) == 51);
    CHECK(csv.find("\n1\n") != std::string::npos);  // flat confidence is identically 1

    std::ofstream empty("cli_empty.csv");
    empty.close();
    const RunResult e = run_cli("confidence --atlas sphere --data cli_empty.csv "
                                "--out cli_conf2.csv");
    CHECK(e.exit_code == 0);
    CHECK(read_bytes("cli_conf2.csv") == "max_psi\n");

    // sphere confidences live in [0.5, 1]
    const RunResult s = run_cli("confidence --atlas sphere --n 200 --seed 6 --out cli_conf3.csv");
    CHECK(s.exit_code == 0);
    std::istringstream rows(read_bytes("cli_conf3.csv"));
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
        const double v = std::stod(line);
        CHECK(v >= 0.5);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("metric subcommand prints the pullback matrix") {
    const RunResult flat = run_cli("metric --atlas flat --chart 1 --point 2,3");
    CHECK(flat.exit_code == 0);
    {
        std::istringstream lines(flat.output);
        double g00 = 0, g01 = 0, g10 = 0, g11 = 0;
        lines >> g00 >> g01 >> g10 >> g11;
        CHECK(g00 == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(g11 == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(g01) <= 1e-9);
        CHECK(std::abs(g10) <= 1e-9);
    }

    const RunResult sphere = run_cli("metric --atlas sphere --chart 1 --point 0,0");
    CHECK(sphere.exit_code == 0);
    std::istringstream lines(sphere.output);
    double g00 = 0, g01 = 0, g10 = 0, g11 = 0;
    lines >> g00 >> g01 >> g10 >> g11;
    CHECK(g00 == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(g11 == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(std::abs(g01) <= 1e-6);
    CHECK(std::abs(g10) <= 1e-6);

    CHECK(run_cli("metric --atlas sphere --chart 1 --point 0,zero").exit_code == 2);
    CHECK(run_cli("metric --atlas sphere --chart 7 --point 0,0").exit_code == 2);
}
