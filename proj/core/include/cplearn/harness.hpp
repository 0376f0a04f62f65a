#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cplearn/checkpoint.hpp"
#include "cplearn/dqn.hpp"
#include "cplearn/profile.hpp"
#include "cplearn/rl.hpp"

namespace cplearn {

// One experiment: problem family, generator parameters, agent settings and
// the evaluation protocol. Serialized to JSON (config.json echo in the run
// directory).
struct RunConfig {
    std::string problem = "coloring"; // "coloring" | "tsptw"

    // generator parameters
    int n = 10;
    double p = 0.5;          // coloring: cross-group edge probability
    int k = 4;               // coloring: generator group count
    double grid = 100.0;       // tsptw
    int max_tw_width = 60000;  // tsptw; same x100-scaled units as travel times

    AgentConfig agent;
    RewardSpec reward;

    int episodes = 500;
    int eval_every = 30;     // evaluate on the validation set at this cadence
    int eval_set_size = 10;  // frozen validation instances
    int baseline_trials = 200;

    std::optional<long> node_limit;
    std::optional<double> time_limit_s;

    unsigned instance_seed = 1;      // training instance stream
    unsigned validation_seed = 9000; // validation set, generated once
    std::string out_dir = "run";

    void validate() const;
    SearchLimits limits() const { return {node_limit, time_limit_s}; }
};

std::string run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Network input widths and action caps per problem family.
NetworkSpec network_spec_for(const RunConfig& config);
FeatureConfig feature_config_for(const RunConfig& config);

struct TrainOutput {
    std::string checkpoint_path;      // final agent
    std::string best_checkpoint_path; // lowest validation mean_nodes (early
                                      // stopping); final when no cadence hit
    double best_validation = 0.0;     // its validation mean_nodes
    int evaluations = 0;              // rows appended to train_curve.csv
};

// Fresh instance per episode; greedy validation pass every eval_every
// episodes (never mutates weights); writes config.json, train_curve.csv,
// train_curve.svg and checkpoints/ under config.out_dir.
TrainOutput train(const RunConfig& config);

struct EvalRow {
    std::string instance;
    std::string solver;
    std::string status;     // "optimal" | "limit" | "infeasible"
    std::optional<int> objective;
    double nodes_avg = 0;   // == best == worst for deterministic solvers
    long nodes_best = 0;
    long nodes_worst = 0;
    int trials = 1;
    double wall_s = 0;      // total across trials
    double per_node_s = 0;  // wall time / nodes explored
};

struct EvalOptions {
    std::string problem;                     // inferred from files when empty
    std::vector<std::string> instance_files; // .col or .tsptw
    std::string solver = "min-value"; // min-value|random|closest-city|learned
    std::string checkpoint;           // required for "learned"
    int trials = 200;                 // random baseline only
    SearchLimits limits;
    unsigned seed = 123;              // random baseline trial seeds
};

std::vector<EvalRow> evaluate(const EvalOptions& options);

// eval_results.csv holds only deterministic columns; wall times go to a
// separate timing.csv so result files are byte-stable across runs.
void write_eval_csv(const std::vector<EvalRow>& rows, const std::string& path);
void write_timing_csv(const std::vector<EvalRow>& rows, const std::string& path);
std::vector<EvalRow> read_eval_csv(const std::string& path);

void write_profile_csv(const std::vector<ProfileCurve>& curves,
                       const std::string& path);
std::vector<ProfileCurve> read_profile_csv(const std::string& path);

// CSV -> SVG renderers (deterministic per input).
void plot_train_curve(const std::string& curve_csv, const std::string& svg_path);
void plot_profile(const std::string& profile_csv, const std::string& svg_path);

// Writes `count` instances named <problem>_<index>.<col|tsptw> into out_dir.
std::vector<std::string> generate_instances(const std::string& problem, int n,
                                            double p, int k, double grid,
                                            int max_tw_width, int count,
                                            unsigned seed,
                                            const std::string& out_dir);

} // namespace cplearn
