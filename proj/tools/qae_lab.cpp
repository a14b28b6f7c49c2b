// qae-lab: experiment runner for the amplitude-estimation library.
//
// Subcommands:
//   bounds  evaluate the closed-form query bounds onto bounds.csv
//   sweep   error-vs-queries sweep for the mean statistic -> sweep.csv
//   tables  mean/VaR/CVaR comparison tables -> tables.json / tables.txt
//   plot    render a bounds or sweep CSV as an SVG chart
//   replay  recompute one sweep row from its coordinates and compare
//
// All randomness derives from the plan's master seed through a
// documented splitting rule, so identical plans give identical bytes and
// any row can be reproduced in isolation.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "qae/bench/plan.hpp"
#include "qae/bench/runner.hpp"
#include "qae/bench/svg.hpp"

namespace {

struct CommonArgs {
    std::string plan_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
    cmd->add_option("--plan", args.plan_path, "plan JSON file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    if (with_out) cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override the plan's master seed")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--workers", args.workers,
                    "worker threads (default: plan, then $QAE_LAB_WORKERS, then all cores)");
}

qae::bench::Plan resolve_plan(const CommonArgs& args) {
    qae::bench::Plan plan =
        args.plan_path.empty() ? qae::bench::Plan{} : qae::bench::load_plan(args.plan_path);
    if (args.seed_set) plan.master_seed = args.seed;
    if (args.workers >= 0) plan.workers = args.workers;
    return plan;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"amplitude-estimation experiment runner"};
    app.require_subcommand(1);

    CommonArgs bounds_args, sweep_args, tables_args, replay_args;

    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate theoretical query bounds");
    add_common(bounds_cmd, bounds_args);

    auto* sweep_cmd = app.add_subcommand("sweep", "run the error-vs-queries sweep");
    add_common(sweep_cmd, sweep_args);

    auto* tables_cmd = app.add_subcommand("tables", "run the mean/VaR/CVaR tables");
    add_common(tables_cmd, tables_args);

    auto* plot_cmd = app.add_subcommand("plot", "render a results CSV as SVG");
    std::string plot_csv, plot_kind = "sweep", plot_out = "plot.svg";
    plot_cmd->add_option("--csv", plot_csv, "input CSV")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--kind", plot_kind, "bounds or sweep")
        ->check(CLI::IsMember({"bounds", "sweep"}));
    plot_cmd->add_option("--out", plot_out, "output SVG path");

    auto* replay_cmd = app.add_subcommand("replay", "recompute one sweep row");
    std::string replay_csv;
    std::size_t replay_row_number = 0;
    add_common(replay_cmd, replay_args, /*with_out=*/false);
    replay_cmd->add_option("--csv", replay_csv, "sweep CSV to replay from")
        ->required()
        ->check(CLI::ExistingFile);
    replay_cmd->add_option("--row", replay_row_number, "1-based data row index")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds_cmd->parsed()) {
            const auto plan = resolve_plan(bounds_args);
            const auto path = qae::bench::run_bounds(plan, bounds_args.out_dir);
            std::printf("wrote %s\n", path.string().c_str());
            return 0;
        }
        if (sweep_cmd->parsed()) {
            const auto plan = resolve_plan(sweep_args);
            const auto rows = qae::bench::run_sweep(plan);
            const auto path = qae::bench::write_sweep_csv(rows, sweep_args.out_dir);
            std::size_t failed = 0;
            for (const auto& r : rows) {
                if (!r.error.empty()) ++failed;
            }
            std::printf("wrote %s (%zu rows, %zu with error tags)\n", path.string().c_str(),
                        rows.size(), failed);
            return failed == 0 ? 0 : 3;
        }
        if (tables_cmd->parsed()) {
            const auto plan = resolve_plan(tables_args);
            const auto path = qae::bench::run_tables_to_dir(plan, tables_args.out_dir);
            std::printf("wrote %s and tables.txt\n", path.string().c_str());
            return 0;
        }
        if (plot_cmd->parsed()) {
            qae::bench::plot_svg(plot_csv, plot_kind, plot_out);
            std::printf("wrote %s\n", plot_out.c_str());
            return 0;
        }
        if (replay_cmd->parsed()) {
            const auto plan = resolve_plan(replay_args);
            const auto outcome =
                qae::bench::replay_row(plan, replay_csv, replay_row_number);
            std::printf("file:     %s", outcome.file_line.c_str());
            std::printf("replayed: %s", outcome.replayed_line.c_str());
            std::printf("%s\n", outcome.matches ? "match" : "MISMATCH");
            return outcome.matches ? 0 : 3;
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
    return 1;
}
