// Command-line front end: run bandit / MDP experiments, summarize CSVs, list presets.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lts/bandit/presets.hpp"
#include "lts/harness/config.hpp"
#include "lts/harness/csv.hpp"
#include "lts/harness/experiment.hpp"
#include "lts/harness/summary.hpp"
#include "lts/lpsrl/presets.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct RunArgs {
    std::string config;
    unsigned workers = 1;
    std::string out;
};

int run_command(lts::harness::ExperimentKind expected, const RunArgs& args) {
    using namespace lts::harness;
    ExperimentConfig cfg;
    try {
        cfg = load_config(args.config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (cfg.kind != expected) {
        std::cerr << "config error: " << args.config << " describes a " << to_string(cfg.kind)
                  << " experiment, not a " << to_string(expected) << " one\n";
        return kExitConfig;
    }
    const std::string out_path = args.out.empty() ? cfg.output : args.out;

    std::vector<RunRecord> records;
    try {
        records = run_experiment(cfg, args.workers);
        if (out_path.empty() || out_path == "-") {
            write_csv(records, cfg.kind, std::cout);
        } else {
            write_csv(records, cfg.kind, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return kExitRuntime;
    }
    std::cerr << format_summary(summarize(records), cfg.kind);

    int code = kExitOk;
    for (const auto& r : records) {
        if (!r.failed) continue;
        std::cerr << "run " << r.run_id << " (" << r.algorithm << ", seed " << r.seed << ") failed: " << r.error
                  << '\n';
        code = kExitRuntime;
    }
    return code;
}

int summarize_command(const std::string& path) {
    using namespace lts::harness;
    try {
        const CsvTable table = read_csv(path);
        std::cout << format_summary(summarize(table.records), table.kind);
        for (const auto& r : table.records)
            if (r.failed) return kExitRuntime;
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "summarize: " << e.what() << '\n';
        return kExitRuntime;
    }
}

void list_presets() {
    for (const auto& p : lts::bandit::bandit_presets()) {
        std::printf("bandit  %-26s %s, %zu arms, means [%g, %g], scale %g, %s prior\n", p.name.c_str(),
                    lts::bandit::to_string(p.kind).c_str(), p.num_arms, p.mean_lo, p.mean_hi, p.scale,
                    p.informative ? "informative" : "uninformative");
    }
    for (const auto& p : lts::lpsrl::mdp_presets()) {
        std::printf("mdp     %-26s %s, horizon %llu\n", p.name.c_str(), lts::lpsrl::to_string(p.kind).c_str(),
                    static_cast<unsigned long long>(p.horizon));
    }
}

void add_run_options(CLI::App* run, RunArgs& args) {
    run->add_option("--config", args.config, "experiment config (YAML)")->required();
    run->add_option("--workers", args.workers, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out", args.out, "output CSV (default: config 'output', else stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Langevin Thompson sampling experiments"};
    app.require_subcommand(1);

    RunArgs bandit_args, mdp_args;
    auto* bandit = app.add_subcommand("bandit", "bandit experiments");
    bandit->require_subcommand(1);
    auto* bandit_run = bandit->add_subcommand("run", "run a bandit experiment");
    add_run_options(bandit_run, bandit_args);

    auto* mdp = app.add_subcommand("mdp", "average-reward MDP experiments");
    mdp->require_subcommand(1);
    auto* mdp_run = mdp->add_subcommand("run", "run an MDP experiment");
    add_run_options(mdp_run, mdp_args);

    std::string summary_in;
    auto* summarize = app.add_subcommand("summarize", "mean and sd per algorithm from a harness CSV");
    summarize->add_option("--in", summary_in, "harness CSV")->required();

    auto* presets = app.add_subcommand("presets", "environment presets");
    presets->require_subcommand(1);
    auto* presets_list = presets->add_subcommand("list", "list available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (bandit_run->parsed()) return run_command(lts::harness::ExperimentKind::kBandit, bandit_args);
    if (mdp_run->parsed()) return run_command(lts::harness::ExperimentKind::kMdp, mdp_args);
    if (summarize->parsed()) return summarize_command(summary_in);
    if (presets_list->parsed()) {
        list_presets();
        return kExitOk;
    }
    return kExitConfig;
}
