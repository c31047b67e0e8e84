#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <wolffcap/config.hpp>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_tool(const std::string& args) {
    std::string cmd = std::string(TOOL_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("wolffcap_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("config parsing reports field and line on errors") {
    using wolffcap::Config;
    Config cfg = Config::from_string("phi = power:0.5\nn_list = 5, 10\nseeded = 7\n");
    CHECK(cfg.str("phi") == "power:0.5");
    CHECK(cfg.list("n_list") == std::vector<double>{5.0, 10.0});
    CHECK(cfg.u64("seeded") == 7);
    CHECK(cfg.num_or("missing", 1.5) == 1.5);

    CHECK_THROWS_WITH(Config::from_string("x = abc\n", "f.conf").num("x"),
                      Catch::Matchers::ContainsSubstring("f.conf:1") &&
                          Catch::Matchers::ContainsSubstring("'x'"));
    CHECK_THROWS_WITH(Config::from_string("a = 1\na = 2\n", "f.conf"),
                      Catch::Matchers::ContainsSubstring("duplicate"));
    CHECK_THROWS(Config::from_string("novalue\n"));
    CHECK_THROWS(wolffcap::make_phi("gaussian"));
}

TEST_CASE("tool writes a summary and identical bytes on reruns") {
    TempDir a("a"), b("b");
    fs::path cfg = a.path / "run.conf";
    std::ofstream(cfg) << "phi = power:0.5\ngrid_samples = 64\n";

    int rc1 = run_tool("verify-phi --config " + cfg.string() + " --seed 9 --out " +
                       (a.path / "out").string());
    REQUIRE(rc1 == 0);
    int rc2 = run_tool("verify-phi --config " + cfg.string() + " --seed 9 --out " +
                       (b.path / "out").string());
    REQUIRE(rc2 == 0);

    CHECK(fs::exists(a.path / "out" / "verify-phi_summary.json"));
    std::string csv1 = slurp(a.path / "out" / "phi_validation.csv");
    std::string csv2 = slurp(b.path / "out" / "phi_validation.csv");
    CHECK_FALSE(csv1.empty());
    CHECK(csv1 == csv2);
}

TEST_CASE("tool rejects bad invocations with distinct exit codes") {
    TempDir t("bad");
    fs::path cfg = t.path / "bad.conf";
    std::ofstream(cfg) << "phi = gaussian\n";
    // config errors use the usage exit code
    CHECK(run_tool("verify-phi --config " + cfg.string() + " --out " +
                   (t.path / "o1").string()) == 64);
    // unknown subcommands fail CLI parsing
    CHECK(run_tool("frobnicate --out " + (t.path / "o2").string()) != 0);
    // missing subcommand
    CHECK(run_tool("") != 0);
}

TEST_CASE("cz-check runs end to end on a reduced sample budget") {
    TempDir t("cz");
    fs::path cfg = t.path / "cz.conf";
    std::ofstream(cfg) << "phi = power:0.7\nsamples = 2000\npsi_grid = 512\n";
    int rc = run_tool("cz-check --config " + cfg.string() + " --seed 4 --out " +
                      (t.path / "out").string());
    CHECK(rc == 0);
    std::string csv = slurp(t.path / "out" / "cz_check.csv");
    CHECK(csv.find("smooth_bound") != std::string::npos);
}
