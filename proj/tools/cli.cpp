#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <map>

#include "cplearn/harness.hpp"

namespace fs = std::filesystem;
using namespace cplearn;

namespace {

std::vector<std::string> collect_instances(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto ext = e.path().extension().string();
        if (ext == ".col" || ext == ".tsptw") files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

int cmd_train(const std::string& config_path) {
    const RunConfig config = load_run_config(config_path);
    const TrainOutput out = train(config);
    std::cout << "checkpoint: " << out.checkpoint_path << "\n"
              << "best checkpoint: " << out.best_checkpoint_path << "\n"
              << "evaluations: " << out.evaluations << "\n";
    return 0;
}

int cmd_evaluate(const std::string& checkpoint, const std::string& instances,
                 const std::string& baseline, const std::string& out_dir,
                 int trials, long node_limit, unsigned seed) {
    EvalOptions opt;
    opt.instance_files = collect_instances(instances);
    // explicit --baseline wins; otherwise a checkpoint means the learned solver
    opt.solver = !baseline.empty() ? baseline
                 : checkpoint.empty() ? std::string("min-value")
                                      : std::string("learned");
    opt.checkpoint = checkpoint;
    opt.trials = trials;
    opt.seed = seed;
    if (node_limit > 0) opt.limits.node_limit = node_limit;
    const auto rows = evaluate(opt);
    fs::create_directories(out_dir);
    write_eval_csv(rows, out_dir + "/eval_results.csv");
    write_timing_csv(rows, out_dir + "/timing.csv");
    std::cout << "rows: " << rows.size() << "\n"
              << "results: " << out_dir << "/eval_results.csv\n"
              << "timing: " << out_dir << "/timing.csv\n";
    return 0;
}

int cmd_profile(const std::vector<std::string>& inputs,
                const std::string& out_dir) {
    // one metric series per solver, keyed by instance name
    std::map<std::string, std::map<std::string, double>> by_solver;
    for (const auto& path : inputs)
        for (const auto& r : read_eval_csv(path))
            by_solver[r.solver][r.instance] =
                r.status == "optimal" ? r.nodes_avg : profile_failure;

    const auto& reference = by_solver.begin()->second;
    std::map<std::string, std::vector<double>> metrics;
    for (const auto& [solver, rows] : by_solver) {
        for (const auto& [instance, _] : reference) {
            if (!rows.count(instance))
                throw std::runtime_error("profile: solver " + solver +
                                         " missing instance " + instance);
            metrics[solver].push_back(rows.at(instance));
        }
    }
    const auto curves = performance_profile(metrics);
    fs::create_directories(out_dir);
    write_profile_csv(curves, out_dir + "/profile.csv");
    plot_profile(out_dir + "/profile.csv", out_dir + "/profile.svg");
    std::cout << "profile: " << out_dir << "/profile.csv\n";
    return 0;
}

int cmd_generate(const std::string& problem, int n, int count, unsigned seed,
                 const std::string& out_dir, double p, int k, double grid,
                 int max_tw_width) {
    const auto paths = generate_instances(problem, n, p, k, grid, max_tw_width,
                                          count, seed, out_dir);
    std::cout << "wrote " << paths.size() << " instances to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learned value-selection for constraint solving"};
    app.require_subcommand(1);

    std::string config_path;
    auto* train_cmd = app.add_subcommand("train", "Train an agent from a config");
    train_cmd->add_option("--config", config_path, "Run config JSON")
        ->required()
        ->check(CLI::ExistingFile);

    std::string checkpoint, instances, baseline, eval_out = ".";
    int trials = 200;
    long node_limit = 0;
    unsigned eval_seed = 123;
    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a solver on instances");
    eval_cmd->add_option("--checkpoint", checkpoint, "Agent checkpoint JSON");
    eval_cmd->add_option("--instances", instances, "Instance directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    eval_cmd->add_option("--baseline", baseline,
                         "min-value|random|closest-city|learned");
    eval_cmd->add_option("--out", eval_out, "Output directory");
    eval_cmd->add_option("--trials", trials, "Random baseline trial count");
    eval_cmd->add_option("--node-limit", node_limit, "Node limit per solve");
    eval_cmd->add_option("--seed", eval_seed, "Random baseline seed");

    std::vector<std::string> profile_inputs;
    std::string profile_out = ".";
    auto* profile_cmd = app.add_subcommand("profile", "Build performance profiles");
    profile_cmd->add_option("--inputs", profile_inputs, "Evaluation CSVs")
        ->required();
    profile_cmd->add_option("--out", profile_out, "Output directory");

    std::string gen_problem, gen_out = ".";
    int gen_n = 10, gen_count = 10, gen_k = 4, gen_tw = 60000;
    unsigned gen_seed = 1;
    double gen_p = 0.5, gen_grid = 100.0;
    auto* gen_cmd = app.add_subcommand("generate", "Generate instance files");
    gen_cmd->add_option("--problem", gen_problem, "coloring|tsptw")->required();
    gen_cmd->add_option("--n", gen_n, "Instance size")->required();
    gen_cmd->add_option("--count", gen_count, "Number of instances")->required();
    gen_cmd->add_option("--seed", gen_seed, "Base seed")->required();
    gen_cmd->add_option("--out", gen_out, "Output directory")->required();
    gen_cmd->add_option("--p", gen_p, "Coloring edge probability");
    gen_cmd->add_option("--k", gen_k, "Coloring group count");
    gen_cmd->add_option("--grid", gen_grid, "Routing grid side");
    gen_cmd->add_option("--tw-width", gen_tw,
                        "Max time-window width (x100-scaled distance units)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) return cmd_train(config_path);
        if (*eval_cmd)
            return cmd_evaluate(checkpoint, instances, baseline, eval_out,
                                trials, node_limit, eval_seed);
        if (*profile_cmd) return cmd_profile(profile_inputs, profile_out);
        if (*gen_cmd)
            return cmd_generate(gen_problem, gen_n, gen_count, gen_seed, gen_out,
                                gen_p, gen_k, gen_grid, gen_tw);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
