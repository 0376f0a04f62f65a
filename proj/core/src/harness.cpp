#include "cplearn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "cplearn/problems/coloring.hpp"
#include "cplearn/problems/tsptw.hpp"
#include "cplearn/svg.hpp"

namespace cplearn {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
    if (problem != "coloring" && problem != "tsptw")
        throw std::invalid_argument("config: problem must be coloring or tsptw");
    if (n <= 0) throw std::invalid_argument("config: n must be positive");
    if (problem == "coloring") {
        if (p <= 0.0 || p > 1.0)
            throw std::invalid_argument("config: p must be in (0, 1]");
        if (k < 2 || k > n)
            throw std::invalid_argument("config: k must be in [2, n]");
    }
    if (episodes < 0) throw std::invalid_argument("config: episodes negative");
    if (eval_every <= 0 || eval_set_size <= 0 || baseline_trials <= 0)
        throw std::invalid_argument("config: evaluation counts must be positive");
    if (out_dir.empty()) throw std::invalid_argument("config: out_dir empty");
    agent.validate();
}

namespace {

json agent_config_to_json(const AgentConfig& c) {
    return {{"gamma", c.gamma},
            {"lr", c.lr},
            {"batch_size", c.batch_size},
            {"update_horizon", c.update_horizon},
            {"min_replay_history", c.min_replay_history},
            {"update_freq", c.update_freq},
            {"target_update_freq", c.target_update_freq},
            {"buffer_capacity", c.buffer_capacity},
            {"eps_init", c.eps_init},
            {"eps_stable", c.eps_stable},
            {"decay_steps", c.decay_steps},
            {"warmup_steps", c.warmup_steps},
            {"double_dqn", c.double_dqn},
            {"seed", c.seed}};
}

void agent_config_from_json(const json& j, AgentConfig& c) {
    c.gamma = j.value("gamma", c.gamma);
    c.lr = j.value("lr", c.lr);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.update_horizon = j.value("update_horizon", c.update_horizon);
    c.min_replay_history = j.value("min_replay_history", c.min_replay_history);
    c.update_freq = j.value("update_freq", c.update_freq);
    c.target_update_freq = j.value("target_update_freq", c.target_update_freq);
    c.buffer_capacity = j.value("buffer_capacity", c.buffer_capacity);
    c.eps_init = j.value("eps_init", c.eps_init);
    c.eps_stable = j.value("eps_stable", c.eps_stable);
    c.decay_steps = j.value("decay_steps", c.decay_steps);
    c.warmup_steps = j.value("warmup_steps", c.warmup_steps);
    c.double_dqn = j.value("double_dqn", c.double_dqn);
    c.seed = j.value("seed", c.seed);
}

} // namespace

std::string run_config_to_json(const RunConfig& c) {
    json j;
    j["problem"] = c.problem;
    j["n"] = c.n;
    j["p"] = c.p;
    j["k"] = c.k;
    j["grid"] = c.grid;
    j["max_tw_width"] = c.max_tw_width;
    j["agent"] = agent_config_to_json(c.agent);
    j["reward"] = {{"kind", c.reward.kind == RewardKind::step_penalty
                                ? "step_penalty"
                                : "two_term"},
                   {"w_feas", c.reward.w_feas},
                   {"w_obj", c.reward.w_obj}};
    j["episodes"] = c.episodes;
    j["eval_every"] = c.eval_every;
    j["eval_set_size"] = c.eval_set_size;
    j["baseline_trials"] = c.baseline_trials;
    if (c.node_limit) j["node_limit"] = *c.node_limit;
    if (c.time_limit_s) j["time_limit_s"] = *c.time_limit_s;
    j["instance_seed"] = c.instance_seed;
    j["validation_seed"] = c.validation_seed;
    j["out_dir"] = c.out_dir;
    return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunConfig c;
    c.problem = j.value("problem", c.problem);
    c.n = j.value("n", c.n);
    c.p = j.value("p", c.p);
    c.k = j.value("k", c.k);
    c.grid = j.value("grid", c.grid);
    c.max_tw_width = j.value("max_tw_width", c.max_tw_width);
    if (j.contains("agent")) agent_config_from_json(j.at("agent"), c.agent);
    if (j.contains("reward")) {
        const auto& r = j.at("reward");
        c.reward.kind = r.value("kind", std::string("step_penalty")) == "two_term"
                            ? RewardKind::two_term
                            : RewardKind::step_penalty;
        c.reward.w_feas = r.value("w_feas", c.reward.w_feas);
        c.reward.w_obj = r.value("w_obj", c.reward.w_obj);
    }
    c.episodes = j.value("episodes", c.episodes);
    c.eval_every = j.value("eval_every", c.eval_every);
    c.eval_set_size = j.value("eval_set_size", c.eval_set_size);
    c.baseline_trials = j.value("baseline_trials", c.baseline_trials);
    if (j.contains("node_limit")) c.node_limit = j.at("node_limit").get<long>();
    if (j.contains("time_limit_s"))
        c.time_limit_s = j.at("time_limit_s").get<double>();
    c.instance_seed = j.value("instance_seed", c.instance_seed);
    c.validation_seed = j.value("validation_seed", c.validation_seed);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return run_config_from_json(text);
}

FeatureConfig feature_config_for(const RunConfig& config) {
    FeatureConfig fc;
    if (config.problem == "coloring") fc.action_cap = config.k + 2;
    return fc;
}

NetworkSpec network_spec_for(const RunConfig& config) {
    if (config.problem == "coloring")
        return default_gat_spec(FeatureConfig::node_width, config.k + 2);
    return default_s2v_spec(6 + FeatureConfig::global_width, config.n, 1);
}

namespace {

EpisodeResult run_coloring_episode(const coloring::GraphColoringInstance& inst,
                                   DQNLearner& learner, bool training,
                                   const FeatureConfig& fc,
                                   const RewardSpec& reward,
                                   const SearchLimits& limits) {
    auto built = coloring::build_model(inst);
    auto selector = [&](const RLState& s) { return learner.act(s, training); };
    return episode_run(*built.model, min_domain_heuristic(),
                       tripartite_encoder(fc), selector, reward, limits);
}

EpisodeResult run_tsptw_episode(const tsptw::TSPTWInstance& inst,
                                DQNLearner& learner, bool training,
                                const FeatureConfig& fc,
                                const RewardSpec& reward,
                                const SearchLimits& limits) {
    auto built = tsptw::build_model(inst);
    auto selector = [&](const RLState& s) { return learner.act(s, training); };
    return episode_run(*built.model, first_unbound_heuristic(),
                       tsptw_encoder(built, fc), selector, reward, limits);
}

std::string csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string csv_double6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

[[noreturn]] void csv_error(const std::string& path, int line,
                            const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::string status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::optimal: return "optimal";
        case SearchStatus::infeasible: return "infeasible";
        default: return "limit";
    }
}

} // namespace

TrainOutput train(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    fs::create_directories(config.out_dir + "/checkpoints");
    {
        std::ofstream out(config.out_dir + "/config.json");
        out << run_config_to_json(config);
    }

    const FeatureConfig fc = feature_config_for(config);
    DQNLearner learner(network_spec_for(config), config.agent);
    ReplayBuffer buffer(config.agent.buffer_capacity);
    const SearchLimits limits = config.limits();

    // validation set generated once from its own seed and frozen
    std::vector<coloring::GraphColoringInstance> val_col;
    std::vector<tsptw::TSPTWInstance> val_tsp;
    for (int i = 0; i < config.eval_set_size; ++i) {
        if (config.problem == "coloring")
            val_col.push_back(coloring::generate(config.n, config.p, config.k,
                                                 config.validation_seed + i));
        else
            val_tsp.push_back(tsptw::generate(config.n, config.grid,
                                              config.max_tw_width,
                                              config.validation_seed + i));
    }

    std::ofstream curve(config.out_dir + "/train_curve.csv");
    curve << "episode,mean_nodes\n";

    auto run_validation = [&]() {
        double total = 0;
        for (int i = 0; i < config.eval_set_size; ++i) {
            EpisodeResult r =
                config.problem == "coloring"
                    ? run_coloring_episode(val_col[i], learner, false, fc,
                                           config.reward, limits)
                    : run_tsptw_episode(val_tsp[i], learner, false, fc,
                                        config.reward, limits);
            total += static_cast<double>(r.result.stats.nodes_visited);
        }
        return total / config.eval_set_size;
    };

    TrainOutput out;
    long pushes = 0;
    for (int ep = 1; ep <= config.episodes; ++ep) {
        EpisodeResult r;
        const unsigned seed = config.instance_seed + static_cast<unsigned>(ep - 1);
        if (config.problem == "coloring") {
            const auto inst = coloring::generate(config.n, config.p, config.k, seed);
            r = run_coloring_episode(inst, learner, true, fc, config.reward,
                                     limits);
        } else {
            const auto inst =
                tsptw::generate(config.n, config.grid, config.max_tw_width, seed);
            r = run_tsptw_episode(inst, learner, true, fc, config.reward, limits);
        }
        buffer.start_episode();
        for (auto& t : r.transitions) {
            buffer.push(std::move(t));
            ++pushes;
            if (pushes % config.agent.update_freq == 0 &&
                buffer.size() >= config.agent.min_replay_history)
                learner.update(buffer);
        }
        if (ep % config.eval_every == 0) {
            const double val = run_validation();
            curve << ep << "," << csv_double(val) << "\n";
            ++out.evaluations;
            const std::string path = config.out_dir + "/checkpoints/ep_" +
                                     std::to_string(ep) + ".json";
            save_agent(learner, path);
            if (out.best_checkpoint_path.empty() || val < out.best_validation) {
                out.best_checkpoint_path = path;
                out.best_validation = val;
            }
        }
    }
    curve.close();

    out.checkpoint_path = config.out_dir + "/checkpoints/final.json";
    save_agent(learner, out.checkpoint_path);
    if (out.best_checkpoint_path.empty()) {
        out.best_checkpoint_path = out.checkpoint_path;
        out.best_validation = 0.0;
    }
    plot_train_curve(config.out_dir + "/train_curve.csv",
                     config.out_dir + "/train_curve.svg");
    return out;
}

namespace {

std::string problem_of_file(const std::string& path) {
    const auto ext = fs::path(path).extension().string();
    if (ext == ".col") return "coloring";
    if (ext == ".tsptw") return "tsptw";
    throw std::invalid_argument("evaluate: unknown instance extension " + path);
}

struct SingleRun {
    SearchResult result;
};

// One deterministic solve of an instance file with a given value heuristic.
SearchResult solve_instance(const std::string& problem, const std::string& file,
                            ValueHeuristic& h, const SearchLimits& limits) {
    if (problem == "coloring") {
        const auto inst = coloring::load_file(file);
        auto built = coloring::build_model(inst);
        return dfs_solve(*built.model, min_domain_heuristic(), h, limits);
    }
    const auto inst = tsptw::load_file(file);
    auto built = tsptw::build_model(inst);
    return dfs_solve(*built.model, first_unbound_heuristic(), h, limits);
}

SearchResult solve_learned(const std::string& problem, const std::string& file,
                           DQNLearner& learner, const SearchLimits& limits) {
    FeatureConfig fc;
    auto selector = [&](const RLState& s) { return learner.act(s, false); };
    if (problem == "coloring") {
        const auto inst = coloring::load_file(file);
        auto built = coloring::build_model(inst);
        fc.action_cap = learner.spec().action_count;
        return episode_run(*built.model, min_domain_heuristic(),
                           tripartite_encoder(fc), selector, RewardSpec{},
                           limits)
            .result;
    }
    const auto inst = tsptw::load_file(file);
    auto built = tsptw::build_model(inst);
    return episode_run(*built.model, first_unbound_heuristic(),
                       tsptw_encoder(built, fc), selector, RewardSpec{}, limits)
        .result;
}

} // namespace

std::vector<EvalRow> evaluate(const EvalOptions& options) {
    if (options.instance_files.empty())
        throw std::invalid_argument("evaluate: no instances");
    std::optional<DQNLearner> learner;
    if (options.solver == "learned") {
        if (options.checkpoint.empty())
            throw std::invalid_argument("evaluate: learned solver needs a checkpoint");
        learner = load_agent(options.checkpoint);
    }

    std::vector<EvalRow> rows;
    for (const auto& file : options.instance_files) {
        const std::string problem =
            options.problem.empty() ? problem_of_file(file) : options.problem;
        EvalRow row;
        row.instance = fs::path(file).filename().string();
        row.solver = options.solver;

        if (options.solver == "random") {
            long total = 0, best = 0, worst = 0;
            double wall = 0;
            std::optional<int> objective;
            std::string status = "optimal";
            for (int t = 0; t < options.trials; ++t) {
                RandomValueHeuristic h(options.seed + static_cast<unsigned>(t));
                const auto r =
                    solve_instance(problem, file, h, options.limits);
                const long nodes = r.stats.nodes_visited;
                total += nodes;
                best = t == 0 ? nodes : std::min(best, nodes);
                worst = t == 0 ? nodes : std::max(worst, nodes);
                wall += r.wall_time;
                if (t == 0) {
                    objective = r.best_objective;
                    status = status_name(r.status);
                }
            }
            row.trials = options.trials;
            row.nodes_avg = static_cast<double>(total) / options.trials;
            row.nodes_best = best;
            row.nodes_worst = worst;
            row.status = status;
            row.objective = objective;
            row.wall_s = wall;
            row.per_node_s = total > 0 ? wall / total : 0.0;
        } else {
            SearchResult r;
            if (options.solver == "min-value") {
                MinValueHeuristic h;
                r = solve_instance(problem, file, h, options.limits);
            } else if (options.solver == "closest-city") {
                if (problem != "tsptw")
                    throw std::invalid_argument(
                        "evaluate: closest-city applies to tsptw only");
                const auto inst = tsptw::load_file(file);
                auto built = tsptw::build_model(inst);
                tsptw::ClosestCityHeuristic h(built);
                r = dfs_solve(*built.model, first_unbound_heuristic(), h,
                              options.limits);
            } else if (options.solver == "learned") {
                r = solve_learned(problem, file, *learner, options.limits);
            } else {
                throw std::invalid_argument("evaluate: unknown solver " +
                                            options.solver);
            }
            row.status = status_name(r.status);
            row.objective = r.best_objective;
            row.nodes_avg = static_cast<double>(r.stats.nodes_visited);
            row.nodes_best = row.nodes_worst = r.stats.nodes_visited;
            row.trials = 1;
            row.wall_s = r.wall_time;
            row.per_node_s = r.stats.nodes_visited > 0
                                 ? r.wall_time / r.stats.nodes_visited
                                 : 0.0;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_eval_csv(const std::vector<EvalRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "instance,solver,status,objective,nodes_avg,nodes_best,nodes_worst,"
           "trials\n";
    for (const auto& r : rows) {
        out << r.instance << "," << r.solver << "," << r.status << ","
            << (r.objective ? std::to_string(*r.objective) : "") << ","
            << csv_double(r.nodes_avg) << "," << r.nodes_best << ","
            << r.nodes_worst << "," << r.trials << "\n";
    }
}

void write_timing_csv(const std::vector<EvalRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "instance,solver,wall_s,per_node_s\n";
    for (const auto& r : rows)
        out << r.instance << "," << r.solver << "," << csv_double6(r.wall_s)
            << "," << csv_double6(r.per_node_s) << "\n";
}

std::vector<EvalRow> read_eval_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    int line_no = 0;
    std::vector<EvalRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (line_no == 1) {
            if (f.empty() || f[0] != "instance")
                csv_error(path, line_no, "expected eval header");
            continue;
        }
        if (f.size() != 8) csv_error(path, line_no, "expected 8 columns");
        EvalRow r;
        try {
            r.instance = f[0];
            r.solver = f[1];
            r.status = f[2];
            if (!f[3].empty()) r.objective = std::stoi(f[3]);
            r.nodes_avg = std::stod(f[4]);
            r.nodes_best = std::stol(f[5]);
            r.nodes_worst = std::stol(f[6]);
            r.trials = std::stoi(f[7]);
        } catch (const std::exception&) {
            csv_error(path, line_no, "malformed numeric field");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_profile_csv(const std::vector<ProfileCurve>& curves,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "solver,tau,rho\n";
    for (const auto& c : curves)
        for (const auto& p : c.points)
            out << c.solver << "," << csv_double6(p.tau) << ","
                << csv_double6(p.rho) << "\n";
}

std::vector<ProfileCurve> read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    int line_no = 0;
    std::vector<ProfileCurve> curves;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (line_no == 1) {
            if (f.empty() || f[0] != "solver")
                csv_error(path, line_no, "expected profile header");
            continue;
        }
        if (f.size() != 3) csv_error(path, line_no, "expected 3 columns");
        try {
            const double tau = std::stod(f[1]);
            const double rho = std::stod(f[2]);
            if (curves.empty() || curves.back().solver != f[0]) {
                curves.push_back({f[0], {}});
            }
            curves.back().points.push_back({tau, rho});
        } catch (const std::exception&) {
            csv_error(path, line_no, "malformed numeric field");
        }
    }
    return curves;
}

void plot_train_curve(const std::string& curve_csv, const std::string& svg_path) {
    std::ifstream in(curve_csv);
    if (!in) throw std::runtime_error("cannot read " + curve_csv);
    std::string line;
    int line_no = 0;
    ChartSeries series;
    series.name = "validation mean nodes";
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (line_no == 1) {
            if (f.empty() || f[0] != "episode")
                csv_error(curve_csv, line_no, "expected curve header");
            continue;
        }
        if (f.size() != 2) csv_error(curve_csv, line_no, "expected 2 columns");
        try {
            series.points.emplace_back(std::stod(f[0]), std::stod(f[1]));
        } catch (const std::exception&) {
            csv_error(curve_csv, line_no, "malformed numeric field");
        }
    }
    std::ofstream out(svg_path);
    if (!out) throw std::runtime_error("cannot write " + svg_path);
    out << render_line_chart("Training progress", "episode",
                             "mean nodes to optimality", {series});
}

void plot_profile(const std::string& profile_csv, const std::string& svg_path) {
    const auto curves = read_profile_csv(profile_csv);
    std::vector<ChartSeries> series;
    for (const auto& c : curves) {
        ChartSeries s;
        s.name = c.solver;
        for (const auto& p : c.points) s.points.emplace_back(p.tau, p.rho);
        series.push_back(std::move(s));
    }
    std::ofstream out(svg_path);
    if (!out) throw std::runtime_error("cannot write " + svg_path);
    out << render_line_chart("Performance profile", "ratio to best",
                             "fraction of instances", series);
}

std::vector<std::string> generate_instances(const std::string& problem, int n,
                                            double p, int k, double grid,
                                            int max_tw_width, int count,
                                            unsigned seed,
                                            const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<std::string> paths;
    for (int i = 0; i < count; ++i) {
        std::ostringstream name;
        if (problem == "coloring") {
            name << out_dir << "/coloring_" << i << ".col";
            coloring::save_file(coloring::generate(n, p, k, seed + i),
                                name.str());
        } else if (problem == "tsptw") {
            name << out_dir << "/tsptw_" << i << ".tsptw";
            tsptw::save_file(tsptw::generate(n, grid, max_tw_width, seed + i),
                             name.str());
        } else {
            throw std::invalid_argument("generate: unknown problem " + problem);
        }
        paths.push_back(name.str());
    }
    return paths;
}

} // namespace cplearn
