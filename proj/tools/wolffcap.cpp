#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include <wolffcap/acceptance.hpp>
#include <wolffcap/experiments.hpp>

namespace {

int run_acceptance(const std::string& out_dir) {
    auto results = wolffcap::acceptance::run_all();
    int code = wolffcap::acceptance::report(results, stdout);

    wolffcap::CsvWriter csv(out_dir + "/acceptance.csv", {"index", "name", "pass", "seconds"});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : results) {
        csv.row({wolffcap::CsvWriter::count(static_cast<std::size_t>(r.index)), r.name,
                 wolffcap::CsvWriter::flag(r.pass), wolffcap::CsvWriter::num(r.seconds)});
        rows.push_back({{"index", r.index},
                        {"name", r.name},
                        {"pass", r.pass},
                        {"seconds", r.seconds},
                        {"details", r.details}});
    }
    nlohmann::json summary = {{"experiment", "acceptance"},
                              {"version", wolffcap::kVersion},
                              {"ok", code == 0},
                              {"criteria", rows}};
    std::ofstream js(out_dir + "/acceptance_summary.json", std::ios::binary);
    js << summary.dump(2) << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gauge potentials, transformed metrics, and capacity estimators"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    const char* names[] = {"verify-phi",       "metric",   "cz-check",     "energy-ratios",
                           "curvature-corpus", "capacity", "corollary22",  "acceptance"};
    const char* blurbs[] = {
        "gauge monotonicity, doubling, and growth-integral checks",
        "psi table construction with sandwich and metric-axiom checks",
        "kernel size and smoothness constants in the transformed metric",
        "discrete energy against Wolff energy over random measures",
        "permutation-sum margins over random triangles",
        "capacity estimators (LP, star, operator, functional, surrogate) on point sets",
        "log-gauge capacity against the truncated-log surrogate on shrinking balls",
        "the pinned acceptance gate (config and seed flags are ignored)"};
    for (std::size_t i = 0; i < 8; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--out", out_dir, "output directory (created if missing)");
        sub->add_option("--threads", threads, "worker threads for the parallel corpora");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string name = app.get_subcommands().front()->get_name();

    try {
        std::filesystem::create_directories(out_dir);
        if (name == "acceptance") return run_acceptance(out_dir);

        wolffcap::Config cfg = config_path.empty() ? wolffcap::Config::from_string("")
                                                   : wolffcap::Config::load(config_path);
        wolffcap::ExperimentOutcome out =
            wolffcap::run_experiment(name, cfg, seed, out_dir, threads);
        std::printf("%s\n", out.summary.dump(2).c_str());
        return out.ok ? 0 : 2;
    } catch (const wolffcap::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 64;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
