#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(HFS_CLI_BIN) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult r{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

double parse_kv(const std::string& output, const std::string& key) {
    std::istringstream in(output);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + "=", 0) == 0) return std::stod(line.substr(key.size() + 1));
    }
    FAIL("missing key ", key, " in output:\n", output);
    return 0.0;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("hfs_cli_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const std::string kMaterial = std::string(HFS_DATA_DIR) + "/material_dark.json";

}  // namespace

TEST_CASE("physics subcommand reports derived quantities") {
    auto r = run("physics --material " + kMaterial);
    CHECK(r.exit_code == 0);
    CHECK(parse_kv(r.output, "l_e_m") == doctest::Approx(1.95e-6).epsilon(0.01));
    CHECK(parse_kv(r.output, "zeta_N_m") == doctest::Approx(1.02e-7).epsilon(0.01));
    CHECK(parse_kv(r.output, "max_modes_Wc_400nm") == 15);
    CHECK(r.output.find("clean_limit=true") != std::string::npos);

    auto r2 = run("physics --material " + kMaterial + " --temperature 2.1");
    CHECK(parse_kv(r2.output, "zeta_N_m") == doctest::Approx(2.04e-7).epsilon(0.01));
}

TEST_CASE("physics subcommand exits 2 on a bad material file") {
    const auto dir = temp_dir("badmat");
    const auto path = dir / "material.json";
    std::ofstream(path) << "{\"mu_e_m2_per_Vs\": 25.0, \"m_star_ratio\": 0.039}";
    auto r = run("physics --material " + path.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("n_s_per_m2") != std::string::npos);
}

TEST_CASE("chip-new emits a loadable manifest") {
    const auto dir = temp_dir("chipnew");
    const auto path = dir / "chip.json";
    auto r = run("chip-new --chip-id C4 --material " + kMaterial + " -o " + path.string());
    CHECK(r.exit_code == 0);
    const std::string text = slurp(path);
    CHECK(text.find("\"chip_id\": \"C4\"") != std::string::npos);
    CHECK(text.find("\"W_c_nm\": 300.0") != std::string::npos);
}

TEST_CASE("simulate writes 16 deterministic trace files per chip") {
    const auto dir_a = temp_dir("sim_a");
    const auto dir_b = temp_dir("sim_b");
    auto r = run("simulate --gen-chips 1 --seed 7 --out " + dir_a.string());
    CHECK(r.exit_code == 0);
    auto r2 = run("simulate --gen-chips 1 --seed 7 --out " + dir_b.string());
    CHECK(r2.exit_code == 0);

    int csvs = 0;
    for (const auto& de : fs::directory_iterator(dir_a)) {
        if (de.path().extension() != ".csv") continue;
        ++csvs;
        CHECK(slurp(de.path()) == slurp(dir_b / de.path().filename()));
    }
    CHECK(csvs == 16);
}

TEST_CASE("analyze rejects an empty directory with exit 2") {
    const auto dir = temp_dir("empty");
    auto r = run("analyze --traces " + dir.string() + " --out " + dir.string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("simulate, analyze, report pipeline") {
    const auto traces = temp_dir("pipe_traces");
    const auto out = temp_dir("pipe_out");
    CHECK(run("simulate --gen-chips 1 --seed 11 --out " + traces.string()).exit_code == 0);
    CHECK(run("analyze --traces " + traces.string() + " --out " + out.string()).exit_code ==
          0);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "metrics.csv"));

    CHECK(run("report --metrics " + (out / "report.json").string() + " --out " +
              out.string())
              .exit_code == 0);
    CHECK(fs::exists(out / "boxes.csv"));

    // one scatter row per junction: all eight Table-1 devices present
    std::istringstream scatter(slurp(out / "scatter_v_pinch_vs_L_J.csv"));
    std::string line;
    std::getline(scatter, line);  // header
    std::set<std::string> junctions;
    while (std::getline(scatter, line)) {
        std::istringstream ss(line);
        std::string chip, junction;
        std::getline(ss, chip, ',');
        std::getline(ss, junction, ',');
        junctions.insert(junction);
    }
    CHECK(junctions.size() == 8);
}

TEST_CASE("report exits 2 on schema mismatch") {
    const auto dir = temp_dir("badreport");
    const auto path = dir / "report.json";
    std::ofstream(path) << "{\"not_a_report\": true}";
    auto r = run("report --metrics " + path.string() + " --out " + dir.string());
    CHECK(r.exit_code == 2);
}
