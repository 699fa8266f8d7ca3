#include "oracles.hpp"

#include "synpat/bench.hpp"
#include "synpat/cli.hpp"
#include "synpat/spike_data.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace synpat;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "synpat");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string example_path() {
    return (std::filesystem::path(SYNPAT_TEST_DATA) / "example.csv").string();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "synpat_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("mine prints labelled episodes") {
    const auto r = run({"mine", example_path(), "--expiry", "5", "--threshold", "1", "--max-level", "3",
                        "--delta-t", "1"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.rfind("episode\tsize\tcount\tthreshold_used\n", 0) == 0);
    CHECK(r.out.find("\nA,B,C\t3\t1\t1\n") != std::string::npos);
    // size descending, then count descending
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    std::pair<int, int> prev{99, 99};
    while (std::getline(in, line)) {
        std::istringstream cols(line);
        std::string ep;
        int size = 0, count = 0;
        std::getline(cols, ep, '\t');
        cols >> size >> count;
        CHECK((size < prev.first || (size == prev.first && count <= prev.second)));
        prev = {size, count};
    }
}

TEST_CASE("mine at level one lists event counts") {
    const auto r = run({"mine", example_path(), "--expiry", "5", "--threshold", "1", "--max-level", "1",
                        "--delta-t", "1"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out == "episode\tsize\tcount\tthreshold_used\nA\t1\t3\t1\nB\t1\t3\t1\nC\t1\t3\t1\nD\t1\t1\t1\nE\t1\t1\t1\n");
}

TEST_CASE("mine as JSON") {
    const auto r = run({"mine", example_path(), "--expiry", "5", "--threshold", "2", "--delta-t", "1",
                        "--format", "json"});
    REQUIRE(r.code == exit_ok);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["episodes"].size() >= 3);
    CHECK(j["episodes"][0]["count"].get<int>() >= 2);
}

TEST_CASE("mine usage errors exit 2") {
    CHECK(run({"mine", example_path(), "--expiry", "5"}).code == exit_usage);
    CHECK(run({"mine", example_path(), "--expiry", "5", "--threshold", "1", "--epsilon", "0.05"}).code ==
          exit_usage);
    CHECK(run({"mine", example_path(), "--threshold", "1"}).code == exit_usage);
    CHECK(run({"mine", "/nonexistent/file.csv", "--expiry", "5", "--threshold", "1"}).code == exit_usage);
    CHECK(run({"mine", example_path(), "--expiry", "5", "--epsilon", "0.05", "--rate-model", "known"}).code ==
          exit_usage);
    CHECK(run({}).code == exit_usage);
    CHECK(run({"--help"}).code == exit_ok);
}

TEST_CASE("threshold subcommand") {
    const auto r = run({"threshold", "--L", "50000", "--T", "6", "--n", "3", "--rho", "5", "--epsilon", "0.05"});
    REQUIRE(r.code == exit_ok);
    std::istringstream in(r.out);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "p\tF\tV\tk\tthreshold\tmin_count");
    CHECK(row.rfind("1.1375", 0) == 0);
    CHECK(row.substr(row.rfind('\t') + 1) == "5");

    const auto zero = run({"threshold", "--L", "10", "--T", "20", "--n", "2", "--rho", "5", "--epsilon", "0.05",
                           "--format", "json"});
    REQUIRE(zero.code == exit_ok);
    const auto j = nlohmann::json::parse(zero.out);
    CHECK(j["F"].get<double>() == 0.0);
    CHECK(j["V"].get<double>() == 0.0);
    CHECK(j["threshold"].get<double>() == 0.0);

    CHECK(run({"threshold", "--L", "100", "--T", "5", "--n", "2", "--rho", "5000", "--epsilon", "0.05"}).code ==
          exit_usage);
    CHECK(run({"threshold", "--help"}).out.find("F(L-T)") != std::string::npos);
}

TEST_CASE("simulate writes data and truth, deterministically") {
    const auto cfg = scratch("sim.cfg");
    std::ofstream(cfg) << "num_neurons = 6\nlength_ticks = 5000\nrate_hz = 5\nembed = 0,1,2 jitter=2 rate=4\n";
    const auto a = scratch("a.csv"), b = scratch("b.csv");
    REQUIRE(run({"simulate", cfg.string(), "--seed", "3", "--output", a.string()}).code == exit_ok);
    REQUIRE(run({"simulate", cfg.string(), "--seed", "3", "-o", b.string()}).code == exit_ok);
    std::stringstream x, y;
    x << std::ifstream(a).rdbuf();
    y << std::ifstream(b).rdbuf();
    CHECK(x.str() == y.str());
    std::ifstream truth(a.string() + ".truth.tsv");
    std::string header;
    std::getline(truth, header);
    CHECK(header == "pattern_types\tanchor_tick");
    const auto seq = parse_spike_file(a, 0.001);
    CHECK(seq.num_types() == 6);
    CHECK(seq.length_ticks() == 5000);

    std::ofstream(scratch("bad.cfg")) << "num_neurons = 2\nrate_hz = 3000\nlength_ticks=10\n";
    CHECK(run({"simulate", scratch("bad.cfg").string(), "-o", scratch("c.csv").string()}).code == exit_usage);
}

TEST_CASE("baseline subcommand") {
    const auto r = run({"baseline", example_path(), "--expiry", "5", "--delta-t", "1", "--trials", "1",
                        "--surrogates", "5", "--all", "--max-size", "3"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.rfind("pattern\tsize\tobserved_mean\tsurrogate_quantile\tsignificant\n", 0) == 0);
    CHECK(r.out.find("\nA,B,C\t3\t2\t") != std::string::npos);
    CHECK(run({"baseline", example_path(), "--expiry", "0", "--delta-t", "1"}).code == exit_usage);
}

TEST_CASE("bench subcommand") {
    const auto r = run({"bench", "--vary", "expiry", "3", "5", "--length", "5000", "--neurons", "8",
                        "--patterns", "3", "--embed-rate", "10", "--pe-runs", "2", "--baseline-runs", "1",
                        "--surrogates", "3", "--trials", "4", "--max-size", "3"});
    REQUIRE(r.code == exit_ok);
    std::istringstream in(r.out);
    const auto report = parse_bench_tsv(in);
    CHECK(report.rows.size() == 4);
    CHECK(r.out.find("# expiry") != std::string::npos);

    const auto none = run({"bench", "--vary", "length", "5000", "--neurons", "4", "--patterns", "none",
                           "--methods", "pe", "--runs", "1"});
    REQUIRE(none.code == exit_ok);
    CHECK(none.out.find("\tn/a\n") != std::string::npos);

    CHECK(run({"bench", "--vary", "speed", "1"}).code == exit_usage);
    CHECK(run({"bench", "--vary", "expiry", "abc"}).code == exit_usage);
    CHECK(run({"bench", "--vary", "expiry", "-3"}).code == exit_usage);
    CHECK(run({"bench", "--vary", "expiry"}).code == exit_usage);
}
