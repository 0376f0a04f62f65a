// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Heavier criteria (4, 5) run real training and are bounded
// by generous node limits rather than wall-clock checks.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <vector>

#include "cplearn/constraints.hpp"
#include "cplearn/dqn.hpp"
#include "cplearn/harness.hpp"
#include "cplearn/problems/coloring.hpp"
#include "cplearn/problems/tsptw.hpp"

using namespace cplearn;
namespace fs = std::filesystem;

namespace {

const std::string work_dir = "/tmp/cplearn_acceptance";

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------- criterion 1
bool criterion_solver_correctness(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> nv(2, 6);
        std::uniform_real_distribution<double> pp(0.2, 1.0);
        const int n = nv(rng);
        std::uniform_int_distribution<int> kk(2, std::max(2, n - 1));
        const auto inst = coloring::generate(n, pp(rng), kk(rng), 7000 + trial);
        const auto expected = coloring::brute_force_optimal(inst);
        auto built = coloring::build_model(inst);
        MinValueHeuristic h;
        const auto r = dfs_solve(*built.model, min_domain_heuristic(), h);
        if (!expected.has_value() || !r.best_objective.has_value() ||
            *r.best_objective != *expected) {
            detail = "coloring objective mismatch at trial " + std::to_string(trial);
            return false;
        }
        auto check = coloring::build_model(inst);
        std::vector<int> assignment(check.model->num_vars());
        for (const auto& [var, value] : *r.best_solution) assignment[var] = value;
        if (!check.model->check_assignment(assignment)) {
            detail = "coloring solution fails re-check at trial " +
                     std::to_string(trial);
            return false;
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> nv(2, 6);
        const int n = nv(rng);
        const auto inst = tsptw::generate(n, 100.0, 120, 8000 + trial);
        const auto expected = tsptw::brute_force_optimal(inst);
        auto built = tsptw::build_model(inst);
        MinValueHeuristic h;
        const auto r = dfs_solve(*built.model, first_unbound_heuristic(), h);
        const bool got = r.best_objective.has_value();
        if (got != expected.has_value() ||
            (got && *r.best_objective != *expected)) {
            detail = "routing objective mismatch at trial " + std::to_string(trial);
            return false;
        }
        if (got) {
            auto check = tsptw::build_model(inst);
            std::vector<int> assignment(check.model->num_vars());
            for (const auto& [var, value] : *r.best_solution)
                assignment[var] = value;
            if (!check.model->check_assignment(assignment)) {
                detail = "routing solution fails re-check at trial " +
                         std::to_string(trial);
                return false;
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "300 instances exact in %.1fs",
                  elapsed_s(start));
    detail = buf;
    return true;
}

// ---------------------------------------------------------------- criterion 2
bool fd_check(ParameterStore& store,
              const std::function<double(ParameterStore&, bool)>& loss_fn,
              std::string& detail, const std::string& label) {
    const double step = 1e-5, tol = 1e-4;
    store.zero_grad();
    loss_fn(store, true);
    for (const auto& name : store.names()) {
        Parameter& p = store.get(name);
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double saved = p.value.data[i];
            p.value.data[i] = saved + step;
            const double up = loss_fn(store, false);
            p.value.data[i] = saved - step;
            const double down = loss_fn(store, false);
            p.value.data[i] = saved;
            const double fd = (up - down) / (2.0 * step);
            const double an = p.grad.data[i];
            const double denom = std::max({std::abs(fd), std::abs(an), 1e-6});
            if (std::abs(fd - an) / denom >= tol) {
                detail = label + " " + name + " fd=" + std::to_string(fd) +
                         " analytic=" + std::to_string(an);
                return false;
            }
        }
    }
    return true;
}

bool criterion_gradients(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    for (unsigned seed = 0; seed < 20; ++seed) {
        std::mt19937 rng(400 + seed);
        std::uniform_int_distribution<int> dim(1, 6), nodes(2, 6);
        auto rand_tensor = [&](int r, int c) {
            Tensor t(r, c);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            for (auto& v : t.data) v = u(rng);
            return t;
        };
        const int n = nodes(rng);
        GraphTopology g;
        g.n_nodes = n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && std::uniform_real_distribution<double>(0, 1)(rng) < 0.6) {
                    g.src.push_back(i);
                    g.dst.push_back(j);
                }

        // dense + huber
        {
            const int in = dim(rng), out = dim(rng);
            ParameterStore store;
            store.create("d.W", rand_tensor(in, out));
            store.create("d.b", rand_tensor(1, out));
            const Tensor x = rand_tensor(1, in), target = rand_tensor(1, out);
            if (!fd_check(store,
                          [&](ParameterStore& s, bool bw) {
                              Tape tape;
                              const auto o = dense_forward(
                                  tape, tape.constant(x), {in, out, true}, s, "d.");
                              const auto l = tape.huber_loss(o, target);
                              if (bw) tape.backward(l);
                              return tape.val(l).at(0, 0);
                          },
                          detail, "dense"))
                return false;
        }
        // aggregation layer with edge features
        {
            const int in = dim(rng), out = dim(rng), q = dim(rng);
            GraphLayerSpec spec{GraphLayerKind::s2v, in, out, 1, true, q};
            GraphTopology ge = g;
            ge.edge_features = rand_tensor(ge.n_edges(), q);
            ParameterStore store;
            store.create("s.theta1", rand_tensor(in, out));
            store.create("s.theta2", rand_tensor(in, out));
            store.create("s.theta3", rand_tensor(out, out));
            store.create("s.theta4", rand_tensor(q, out));
            const Tensor x = rand_tensor(n, in), target = rand_tensor(1, out);
            if (!fd_check(store,
                          [&](ParameterStore& s, bool bw) {
                              Tape tape;
                              const auto f = tape.constant(x);
                              const auto o =
                                  s2v_layer_forward(tape, f, f, ge, spec, s, "s.");
                              const auto l = tape.huber_loss(
                                  tape.gather_rows(o, {0}), target);
                              if (bw) tape.backward(l);
                              return tape.val(l).at(0, 0);
                          },
                          detail, "aggregation"))
                return false;
        }
        // attention layer
        {
            const int in = dim(rng), out = dim(rng);
            const int heads = 1 + static_cast<int>(seed % 3);
            GraphLayerSpec spec{GraphLayerKind::gat, in, out, heads, seed % 2 == 0, 0};
            ParameterStore store;
            for (int h = 0; h < heads; ++h) {
                store.create("g.h" + std::to_string(h) + ".W", rand_tensor(in, out));
                store.create("g.h" + std::to_string(h) + ".a",
                             rand_tensor(2 * out, 1));
            }
            const Tensor x = rand_tensor(n, in);
            const Tensor target = rand_tensor(1, spec.output_width());
            if (!fd_check(store,
                          [&](ParameterStore& s, bool bw) {
                              Tape tape;
                              const auto o = gat_layer_forward(
                                  tape, tape.constant(x), g, spec, s, "g.");
                              const auto l = tape.huber_loss(
                                  tape.gather_rows(o, {0}), target);
                              if (bw) tape.backward(l);
                              return tape.val(l).at(0, 0);
                          },
                          detail, "attention"))
                return false;
        }
        // small full network with action selection + huber
        {
            const int in = dim(rng), actions = 1 + dim(rng) % 3, hidden = 4;
            NetworkSpec spec;
            spec.input_width = in;
            spec.raw_feature_width = in;
            spec.graph_chain = {{GraphLayerKind::gat, in, hidden, 1, true, 0}};
            spec.node_chain = {{hidden, hidden, true}};
            spec.output_layer = {hidden, actions, false};
            spec.action_count = actions;
            ParameterStore store;
            init_parameters(spec, store, 900 + seed);
            const Tensor x = rand_tensor(n, in);
            Tensor target(1, 1);
            target.at(0, 0) = rand_tensor(1, 1).at(0, 0);
            const int action = static_cast<int>(seed) % actions;
            if (!fd_check(store,
                          [&](ParameterStore& s, bool bw) {
                              Tape tape;
                              const auto o = network_forward(tape, x, g, 0, spec, s);
                              const auto picked = tape.select(o, 0, action);
                              const auto l = tape.huber_loss(picked, target);
                              if (bw) tape.backward(l);
                              return tape.val(l).at(0, 0);
                          },
                          detail, "network"))
                return false;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "20 seeds x 4 layer kinds in %.1fs",
                  elapsed_s(start));
    detail = buf;
    return true;
}

// ---------------------------------------------------------------- criterion 3
bool criterion_chain_mdp(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<RLState> states;
    for (int i = 0; i < 3; ++i) {
        RLState s;
        s.node_features = Tensor(1, 3);
        s.node_features.at(0, i) = 1.0;
        s.topology.n_nodes = 1;
        s.legal_mask = {true};
        s.action_values = {0};
        states.push_back(s);
    }
    RLState terminal = states[0];
    terminal.terminal = true;

    NetworkSpec spec;
    spec.input_width = 3;
    spec.raw_feature_width = 3;
    spec.node_chain = {{3, 8, true}};
    spec.output_layer = {8, 1, false};
    spec.action_count = 1;

    for (unsigned seed = 1; seed <= 5; ++seed) {
        AgentConfig c;
        c.gamma = 1.0;
        c.lr = 0.01;
        c.batch_size = 8;
        c.target_update_freq = 50;
        c.seed = seed;
        DQNLearner learner(spec, c);
        ReplayBuffer buffer(512);
        for (int ep = 0; ep < 40; ++ep) {
            buffer.start_episode();
            auto push = [&](int i, const RLState& next, bool done) {
                Transition t;
                t.state = states[i];
                t.action = 0;
                t.reward = -1;
                t.next_state = next;
                t.done = done;
                t.seq = i;
                buffer.push(std::move(t));
            };
            push(0, states[1], false);
            push(1, states[2], false);
            push(2, terminal, true);
        }
        bool converged = false;
        for (int u = 0; u < 5000 && !converged; ++u) {
            learner.update(buffer);
            converged = true;
            for (int i = 0; i < 3; ++i) {
                const double q =
                    learner.q_scores(states[i], learner.online()).at(0, 0);
                if (std::abs(q - (-3.0 + i)) > 0.05) converged = false;
            }
        }
        if (!converged) {
            detail = "seed " + std::to_string(seed) +
                     " did not reach (-3,-2,-1) within 5000 updates";
            return false;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "5/5 seeds converged in %.1fs",
                  elapsed_s(start));
    detail = buf;
    return true;
}

// -------------------------------------------------------------- criteria 4+7
struct ColoringStudy {
    bool trained = false;
    std::string run_dir, instance_dir;
    std::vector<EvalRow> learned, minvalue, random_rows;
};

ColoringStudy run_coloring_study() {
    ColoringStudy s;
    s.run_dir = work_dir + "/coloring_run";
    s.instance_dir = work_dir + "/coloring_holdout";

    RunConfig c;
    c.problem = "coloring";
    c.n = 10;
    c.p = 0.5;
    c.k = 4;
    c.episodes = 500;
    c.eval_every = 30;
    c.eval_set_size = 10;
    c.baseline_trials = 200;
    c.node_limit = 20000;
    c.instance_seed = 100;
    c.validation_seed = 9000;
    c.out_dir = s.run_dir;
    const auto trained = train(c);

    const auto files = generate_instances("coloring", c.n, c.p, c.k, 0, 0, 20,
                                          77000, s.instance_dir);
    EvalOptions opt;
    opt.instance_files = files;
    opt.limits.node_limit = 50000;

    opt.solver = "learned";
    opt.checkpoint = trained.checkpoint_path;
    s.learned = evaluate(opt);
    write_eval_csv(s.learned, s.run_dir + "/eval_learned.csv");
    write_timing_csv(s.learned, s.run_dir + "/timing_learned.csv");

    opt.solver = "min-value";
    s.minvalue = evaluate(opt);
    write_eval_csv(s.minvalue, s.run_dir + "/eval_minvalue.csv");
    write_timing_csv(s.minvalue, s.run_dir + "/timing_minvalue.csv");

    opt.solver = "random";
    opt.trials = 200;
    s.random_rows = evaluate(opt);
    write_eval_csv(s.random_rows, s.run_dir + "/eval_random.csv");

    s.trained = true;
    return s;
}

bool criterion_coloring_quality(const ColoringStudy& s, std::string& detail) {
    std::vector<double> learned_nodes, minvalue_nodes;
    int beats_random = 0;
    for (std::size_t i = 0; i < s.learned.size(); ++i) {
        if (s.learned[i].status != "optimal") {
            detail = "learned failed to prove optimality on " +
                     s.learned[i].instance;
            return false;
        }
        learned_nodes.push_back(s.learned[i].nodes_avg);
        minvalue_nodes.push_back(s.minvalue[i].nodes_avg);
        if (s.learned[i].nodes_avg < s.random_rows[i].nodes_avg) ++beats_random;
    }
    const double med_learned = median(learned_nodes);
    const double med_minvalue = median(minvalue_nodes);
    const double frac = static_cast<double>(beats_random) /
                        static_cast<double>(s.learned.size());
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "median nodes learned=%.1f min-value=%.1f (ratio %.2f, need "
                  "<=1.50); beats random avg on %.0f%% (need >=80%%)",
                  med_learned, med_minvalue, med_learned / med_minvalue,
                  100.0 * frac);
    detail = buf;
    return med_learned <= 1.5 * med_minvalue && frac >= 0.8;
}

bool criterion_protocol(const ColoringStudy& s, std::string& detail) {
    // cadence: 500 episodes at eval_every=30 -> floor(500/30) curve rows
    const std::string curve = slurp(s.run_dir + "/train_curve.csv");
    const long rows = std::count(curve.begin(), curve.end(), '\n') - 1;
    if (rows != 500 / 30) {
        detail = "train_curve.csv has " + std::to_string(rows) +
                 " evaluation rows, expected " + std::to_string(500 / 30);
        return false;
    }
    const RunConfig echoed = load_run_config(s.run_dir + "/config.json");
    if (echoed.eval_every != 30 || echoed.eval_set_size != 10) {
        detail = "config echo lost the evaluation cadence";
        return false;
    }
    const auto random_rows = read_eval_csv(s.run_dir + "/eval_random.csv");
    for (const auto& r : random_rows) {
        if (r.trials != 200) {
            detail = "random baseline row has trials=" + std::to_string(r.trials);
            return false;
        }
        if (!(r.nodes_best <= r.nodes_avg && r.nodes_avg <= r.nodes_worst)) {
            detail = "random row order statistics inconsistent";
            return false;
        }
    }
    detail = "30-episode cadence on 10 validation instances; 200-trial "
             "random baseline with avg/best/worst";
    return true;
}

// ---------------------------------------------------------------- criterion 5
bool criterion_tsptw_quality(std::string& detail) {
    const std::string run_dir = work_dir + "/tsptw_run";
    RunConfig c;
    c.problem = "tsptw";
    c.n = 6;
    c.grid = 100.0;
    c.max_tw_width = 60000;
    c.episodes = 1000;
    c.eval_every = 30;
    c.eval_set_size = 10;
    c.node_limit = 20000;
    c.instance_seed = 300;
    c.validation_seed = 9500;
    c.out_dir = run_dir;
    const auto trained = train(c);

    const auto files = generate_instances("tsptw", c.n, 0, 0, c.grid,
                                          c.max_tw_width, 20, 88000,
                                          work_dir + "/tsptw_holdout");
    EvalOptions opt;
    opt.instance_files = files;
    opt.limits.node_limit = 50000;
    opt.solver = "learned";
    opt.checkpoint = trained.checkpoint_path;
    const auto learned = evaluate(opt);
    write_eval_csv(learned, run_dir + "/eval_learned.csv");
    write_timing_csv(learned, run_dir + "/timing_learned.csv");
    opt.solver = "random";
    opt.trials = 200;
    const auto random_rows = evaluate(opt);
    write_eval_csv(random_rows, run_dir + "/eval_random.csv");

    int beats = 0;
    for (std::size_t i = 0; i < learned.size(); ++i)
        if (learned[i].status == "optimal" &&
            learned[i].nodes_avg < random_rows[i].nodes_avg)
            ++beats;
    const double frac = static_cast<double>(beats) / learned.size();
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "beats random average on %.0f%% of 20 instances (need >=80%%)",
                  100.0 * frac);
    detail = buf;
    return frac >= 0.8;
}

// ---------------------------------------------------------------- criterion 6
bool criterion_hyperparameters(std::string& detail) {
    const AgentConfig c;
    struct Check {
        const char* name;
        bool ok;
    } checks[] = {
        {"gamma=0.9999", c.gamma == 0.9999},
        {"lr=0.0005", c.lr == 0.0005},
        {"update_horizon=25", c.update_horizon == 25},
        {"update_freq=10", c.update_freq == 10},
        {"target_update_freq=200", c.target_update_freq == 200},
        {"buffer_capacity=8000", c.buffer_capacity == 8000},
        {"eps_init=1.0", c.eps_init == 1.0},
        {"eps_stable=0.001", c.eps_stable == 0.001},
        {"decay_steps=5000", c.decay_steps == 5000.0},
        {"min_replay_history=1", c.min_replay_history == 1},
    };
    for (const auto& chk : checks)
        if (!chk.ok) {
            detail = std::string("default mismatch: ") + chk.name;
            return false;
        }
    detail = "all defaults match the published configuration";
    return true;
}

// ---------------------------------------------------------------- criterion 8
bool criterion_determinism(std::string& detail) {
    auto one_run = [&](const std::string& dir) {
        RunConfig c;
        c.problem = "coloring";
        c.n = 6;
        c.p = 0.5;
        c.k = 3;
        c.episodes = 30;
        c.eval_every = 10;
        c.eval_set_size = 3;
        c.node_limit = 5000;
        c.agent.batch_size = 8;
        c.out_dir = dir;
        const auto trained = train(c);
        EvalOptions opt;
        opt.instance_files = generate_instances("coloring", 6, 0.5, 3, 0, 0, 4,
                                                123456, dir + "/inst");
        opt.solver = "random";
        opt.trials = 25;
        write_eval_csv(evaluate(opt), dir + "/eval_results.csv");
        opt.solver = "learned";
        opt.checkpoint = trained.checkpoint_path;
        write_eval_csv(evaluate(opt), dir + "/eval_learned.csv");
    };
    one_run(work_dir + "/det_a");
    one_run(work_dir + "/det_b");
    for (const char* file :
         {"/train_curve.csv", "/eval_results.csv", "/eval_learned.csv",
          "/checkpoints/final.json"}) {
        if (slurp(work_dir + "/det_a" + file) !=
            slurp(work_dir + "/det_b" + file)) {
            detail = std::string("mismatch in ") + file;
            return false;
        }
    }
    detail = "two identical runs produced byte-identical CSVs and checkpoints";
    return true;
}

// ---------------------------------------------------------------- criterion 9
bool criterion_timing(const ColoringStudy& s, std::string& detail) {
    const std::string learned_csv = s.run_dir + "/timing_learned.csv";
    const std::string minvalue_csv = s.run_dir + "/timing_minvalue.csv";
    if (!fs::exists(learned_csv) || !fs::exists(minvalue_csv)) {
        detail = "timing CSVs missing";
        return false;
    }
    const std::string header = slurp(learned_csv).substr(0, 33);
    if (header != "instance,solver,wall_s,per_node_s") {
        detail = "timing.csv lacks the per_node_s column";
        return false;
    }
    double learned_pn = 0, minvalue_pn = 0;
    for (const auto& r : s.learned) learned_pn += r.per_node_s;
    for (const auto& r : s.minvalue) minvalue_pn += r.per_node_s;
    learned_pn /= s.learned.size();
    minvalue_pn /= s.minvalue.size();
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "per-node overhead recorded: learned %.2e s/node vs greedy "
                  "%.2e s/node (x%.0f, expected and not a failure)",
                  learned_pn, minvalue_pn,
                  minvalue_pn > 0 ? learned_pn / minvalue_pn : 0.0);
    detail = buf;
    return true;
}

} // namespace

int main() {
    fs::remove_all(work_dir);
    fs::create_directories(work_dir);

    int failures = 0;
    auto report = [&](int idx, const char* name, bool ok,
                      const std::string& detail) {
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << idx << " ("
                  << name << "): " << detail << std::endl;
        if (!ok) ++failures;
    };

    std::string detail;

    bool ok = criterion_solver_correctness(detail);
    report(1, "solver correctness vs exhaustive search", ok, detail);

    ok = criterion_gradients(detail);
    report(2, "analytic gradients vs finite differences", ok, detail);

    ok = criterion_chain_mdp(detail);
    report(3, "chain-MDP Q-learning sanity", ok, detail);

    ColoringStudy study = run_coloring_study();

    ok = criterion_coloring_quality(study, detail);
    report(4, "learned coloring heuristic quality", ok, detail);

    ok = criterion_tsptw_quality(detail);
    report(5, "learned routing heuristic quality", ok, detail);

    ok = criterion_hyperparameters(detail);
    report(6, "hyperparameter defaults", ok, detail);

    ok = criterion_protocol(study, detail);
    report(7, "evaluation protocol on output CSVs", ok, detail);

    ok = criterion_determinism(detail);
    report(8, "byte-identical reruns", ok, detail);

    ok = criterion_timing(study, detail);
    report(9, "per-node timing observation", ok, detail);

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                                : std::to_string(failures) + " CRITERIA FAILED")
              << std::endl;
    return failures;
}
