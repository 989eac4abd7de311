#include "cli.h"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "output.h"

using namespace enverify;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.push_back("");
        }
        rows.push_back(cells);
    }
    return rows;
}

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("enverify_cli_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST(cli, analytic_rank2_full) {
    auto r = run({"analytic", "--strategy", "rank2-full", "--fidelity", "0.9", "--n", "22"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    ASSERT_NEAR(j["delta"].get<double>(), 0.0984770902183611, 1e-15);
    ASSERT_EQ(j["copies_consumed"], 5);
    ASSERT_EQ(j["mode"], "float");
}

TEST(cli, analytic_single_copy_search) {
    auto r = run({"analytic", "--strategy", "single-copy", "--delta", "0.1", "--fidelity", "0.9"});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(json::parse(r.out)["copies"], 22);
}

TEST(cli, analytic_noiseless_limit) {
    auto r = run({"analytic", "--strategy", "werner-full", "--fidelity", "1.0", "--n", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(json::parse(r.out)["delta"].get<double>(), 1.0);
}

TEST(cli, analytic_exact_mode) {
    auto r = run({"analytic", "--strategy", "werner-subspace", "--fidelity", "0.7", "--n", "3", "--m", "1", "--exact"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    ASSERT_EQ(j["delta_exact"], "76/125");
    ASSERT_EQ(j["mode"], "exact");
    auto frac = run({"analytic", "--strategy", "rank2-full", "--fidelity", "9/10", "--n", "2", "--exact"});
    ASSERT_EQ(json::parse(frac.out)["delta_exact"], "81/100");
}

TEST(cli, exit_codes) {
    ASSERT_EQ(run({"analytic", "--strategy", "werner-full", "--fidelity", "0.1", "--n", "3"}).code, 2);
    ASSERT_EQ(run({"analytic", "--strategy", "rank2-full", "--fidelity", "0.9"}).code, 2);
    ASSERT_EQ(run({"analytic", "--strategy", "rank2-full", "--fidelity", "abc", "--n", "2"}).code, 2);
    ASSERT_EQ(run({"bogus"}).code, 2);
    ASSERT_EQ(run({"simulate", "--strategy", "werner-full", "--fidelity", "0.9", "--n", "20000", "--method", "oracle"}).code, 3);
    auto dir = scratch("exit_codes");
    ASSERT_EQ(run({"dump-state", "--n", "5", "--out", (dir / "big.bin").string()}).code, 3);
    ASSERT_EQ(run({"--help"}).code, 0);
}

TEST(cli, simulate_header_and_pure_target) {
    auto r = run({"simulate", "--strategy", "rank2-full", "--noise", "pure", "--fidelity", "0.9", "--n", "4", "--trials", "5000"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = parse_csv(r.out);
    ASSERT_EQ(r.out.substr(0, r.out.find('\n')), cli::kCsvHeader);
    ASSERT_EQ(rows.size(), 2u);
    ASSERT_EQ(rows[1][10], "1");
    ASSERT_EQ(rows[1][5], "1");
}

TEST(cli, simulate_werner_estimate) {
    auto r = run({"simulate", "--strategy", "werner-full", "--fidelity", "0.7", "--n", "2", "--trials", "1000000", "--workers", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows[1][5], "0.66");
    const double est = std::stod(rows[1][10]);
    const double sigma = std::sqrt(0.66 * 0.34 / 1e6);
    ASSERT_LT(std::abs(est - 0.66), 4 * sigma);
    ASSERT_LE(std::stod(rows[1][11]), est);
    ASSERT_GE(std::stod(rows[1][12]), est);
}

TEST(cli, simulate_is_byte_identical) {
    std::vector<std::string> args = {"simulate", "--strategy", "werner-full", "werner-subspace", "embed-eng",
                                     "--fidelity", "0.8", "0.95", "--n", "3", "6", "--trials", "30000", "--seed", "99"};
    auto a = run(args);
    auto b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(a.out, b.out);
    auto workers = args;
    workers.insert(workers.end(), {"--workers", "6"});
    ASSERT_EQ(run(workers).out, a.out);
    auto other_seed = args;
    other_seed[other_seed.size() - 1] = "100";
    ASSERT_NE(run(other_seed).out, a.out);

    auto dir = scratch("bytes");
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", dir.string()});
    ASSERT_EQ(run(with_out).code, 0);
    ASSERT_EQ(read_file(dir / "simulate.csv"), a.out);
}

TEST(cli, simulate_methods_agree) {
    auto base = std::vector<std::string>{"simulate", "--strategy", "werner-subspace", "--fidelity", "0.85", "--n", "3", "--m", "1"};
    auto oracle = base;
    oracle.insert(oracle.end(), {"--method", "oracle"});
    auto dense = base;
    dense.insert(dense.end(), {"--method", "dense"});
    auto o = parse_csv(run(oracle).out);
    auto d = parse_csv(run(dense).out);
    ASSERT_NEAR(std::stod(o[1][10]), std::stod(d[1][10]), 1e-10);
    ASSERT_NEAR(std::stod(o[1][10]), std::stod(o[1][5]), 1e-15);
}

TEST(cli, simulate_isotropic_noise) {
    auto r = run({"simulate", "--strategy", "werner-full", "--noise", "isotropic", "--dim", "3", "--fidelity", "0.8",
                  "--n", "2", "--method", "oracle"});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(parse_csv(r.out).size(), 2u);
}

TEST(cli, json_config_mirrors_flags) {
    auto dir = scratch("config");
    {
        std::ofstream cfg(dir / "sweep.json");
        cfg << R"({"simulate": {"strategy": ["rank2-full"], "fidelity": ["0.7", "0.9"], "n": [2, 5], "trials": 4000, "seed": 3}})";
    }
    auto from_config = run({"--config", (dir / "sweep.json").string(), "simulate"});
    ASSERT_EQ(from_config.code, 0) << from_config.err;
    auto from_flags = run({"simulate", "--strategy", "rank2-full", "--fidelity", "0.7", "0.9", "--n", "2", "5",
                           "--trials", "4000", "--seed", "3"});
    ASSERT_EQ(from_config.out, from_flags.out);
    ASSERT_EQ(parse_csv(from_config.out).size(), 5u);
}

TEST(cli, reproduce_copies_figure) {
    auto dir = scratch("fig2a");
    auto r = run({"reproduce", "--figure", "2a", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = parse_csv(read_file(dir / "fig2a_copies.csv"));
    ASSERT_EQ(rows.size(), 1 + 3 * 11u);
    for (size_t i = 1; i < rows.size(); i++) {
        const auto &row = rows[i];
        if (row[1] == "0.9" && row[0] == "single-copy") {
            ASSERT_EQ(row[6], "22");
        }
        if (row[1] == "0.9" && row[0] == "rank2-full") {
            ASSERT_EQ(row[6], "5");
        }
        if (row[0] == "rank2-subspace") {
            ASSERT_EQ(row[6], "4");
            ASSERT_EQ(row[8], "asymptotic");
        }
    }
}

TEST(cli, reproduce_failure_figure_noiseless_limit) {
    auto dir = scratch("fig2b");
    auto r = run({"reproduce", "--figure", "2b", "--out", dir.string(), "--fidelity", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = parse_csv(read_file(dir / "fig2b_failure.csv"));
    ASSERT_EQ(rows.size(), 4u);
    for (size_t i = 1; i < rows.size(); i++) {
        ASSERT_EQ(rows[i][5], "1") << rows[i][0];
        ASSERT_EQ(rows[i][6], "9");
    }
}

TEST(cli, reproduce_all_writes_every_dataset) {
    auto dir = scratch("all");
    auto r = run({"reproduce", "--figure", "all", "--out", dir.string(), "--fidelity", "0.7", "0.9"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char *name : {"fig2a_copies.csv", "fig2b_failure.csv", "appc_rank2_ratio.csv", "appc_werner_ratio.csv",
                             "appc_embed_vs_global.csv", "appc_aux_source.csv"}) {
        auto text = read_file(dir / name);
        ASSERT_EQ(text.substr(0, text.find('\n')), cli::kCsvHeader) << name;
    }
}

TEST(cli, crosscheck_report) {
    auto ok = run({"crosscheck", "--max-n", "3", "--trials", "20000", "--fidelity", "0.7", "0.9"});
    ASSERT_EQ(ok.code, 0) << ok.out;
    ASSERT_NE(ok.out.find("PASS analytic-exact-vs-oracle"), std::string::npos);
    ASSERT_NE(ok.out.find("max_deviation="), std::string::npos);
    auto bad = run({"crosscheck", "--max-n", "3", "--trials", "20000", "--fidelity", "0.7", "--inject-fault"});
    ASSERT_EQ(bad.code, 4);
    ASSERT_NE(bad.out.find("FAIL"), std::string::npos);
}

TEST(cli, dump_state_writes_readable_file) {
    auto dir = scratch("dump");
    auto path = (dir / "state.bin").string();
    auto r = run({"dump-state", "--n", "2", "--fidelity", "0.8", "--out", path});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    ASSERT_EQ(j["dims"], json::parse("[2, 2, 2, 2, 3, 3]"));
    auto bytes = read_file(path);
    ASSERT_EQ(bytes.substr(0, 4), "ENVS");
    ASSERT_EQ(bytes.size(), 4 + 12 + 4 * 6 + 144u * 144u * 16u);
}
