#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cplearn/harness.hpp"
#include "cplearn/svg.hpp"

using namespace cplearn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

RunConfig tiny_config(const std::string& out_dir) {
    RunConfig c;
    c.problem = "coloring";
    c.n = 6;
    c.p = 0.5;
    c.k = 3;
    c.episodes = 0;
    c.eval_every = 10;
    c.eval_set_size = 3;
    c.node_limit = 2000;
    c.agent.batch_size = 8;
    c.out_dir = out_dir;
    return c;
}

} // namespace

TEST_CASE("run config json round trip") {
    RunConfig c = tiny_config("/tmp/x");
    c.episodes = 77;
    c.agent.lr = 0.001;
    c.reward.kind = RewardKind::two_term;
    c.reward.w_feas = 5.0;
    c.node_limit = 123;
    const RunConfig back = run_config_from_json(run_config_to_json(c));
    CHECK(back.problem == c.problem);
    CHECK(back.n == c.n);
    CHECK(back.k == c.k);
    CHECK(back.episodes == 77);
    CHECK(back.agent.lr == 0.001);
    CHECK(back.reward.kind == RewardKind::two_term);
    CHECK(back.reward.w_feas == 5.0);
    REQUIRE(back.node_limit.has_value());
    CHECK(*back.node_limit == 123);
}

TEST_CASE("run config validation") {
    RunConfig c = tiny_config("/tmp/x");
    SUBCASE("bad problem") {
        c.problem = "sudoku";
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("bad edge probability") {
        c.p = 0.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("k out of range") {
        c.k = 1;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("agent config propagates") {
        c.agent.gamma = 2.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
}

TEST_CASE("train cadence") {
    SUBCASE("zero episodes: initial checkpoint, empty curve") {
        TempDir dir("cplearn_train0");
        RunConfig c = tiny_config(dir.str() + "/run");
        const TrainOutput out = train(c);
        CHECK(out.evaluations == 0);
        CHECK(fs::exists(out.checkpoint_path));
        CHECK(slurp(c.out_dir + "/train_curve.csv") == "episode,mean_nodes\n");
        CHECK(fs::exists(c.out_dir + "/config.json"));
        // checkpoint holds untrained weights identical to a fresh learner
        DQNLearner fresh(network_spec_for(c), c.agent);
        DQNLearner loaded = load_agent(out.checkpoint_path);
        for (const auto& name : fresh.online().names())
            CHECK(loaded.online().get(name).value.data ==
                  fresh.online().get(name).value.data);
    }
    SUBCASE("episodes == eval_every: exactly one evaluation row") {
        TempDir dir("cplearn_train1");
        RunConfig c = tiny_config(dir.str() + "/run");
        c.episodes = 10;
        const TrainOutput out = train(c);
        CHECK(out.evaluations == 1);
        const auto text = slurp(c.out_dir + "/train_curve.csv");
        CHECK(std::count(text.begin(), text.end(), '\n') == 2); // header + 1
    }
    SUBCASE("three evaluation rows over 30 episodes at cadence 10") {
        TempDir dir("cplearn_train3");
        RunConfig c = tiny_config(dir.str() + "/run");
        c.episodes = 30;
        const TrainOutput out = train(c);
        CHECK(out.evaluations == 3);
        const auto text = slurp(c.out_dir + "/train_curve.csv");
        CHECK(std::count(text.begin(), text.end(), '\n') == 4);
        CHECK(fs::exists(c.out_dir + "/checkpoints/ep_10.json"));
        CHECK(fs::exists(c.out_dir + "/checkpoints/ep_30.json"));
        CHECK(fs::exists(c.out_dir + "/train_curve.svg"));
    }
}

TEST_CASE("training is reproducible byte for byte") {
    TempDir dir("cplearn_repro");
    RunConfig c = tiny_config(dir.str() + "/a");
    c.episodes = 20;
    train(c);
    RunConfig c2 = tiny_config(dir.str() + "/b");
    c2.episodes = 20;
    train(c2);
    CHECK(slurp(dir.str() + "/a/train_curve.csv") ==
          slurp(dir.str() + "/b/train_curve.csv"));
    CHECK(slurp(dir.str() + "/a/checkpoints/final.json") ==
          slurp(dir.str() + "/b/checkpoints/final.json"));
}

TEST_CASE("evaluate") {
    TempDir dir("cplearn_eval");
    const auto files = generate_instances("coloring", 6, 0.5, 3, 0, 0, 2, 11,
                                          dir.str() + "/inst");
    REQUIRE(files.size() == 2);

    SUBCASE("min-value: one deterministic row per instance") {
        EvalOptions opt;
        opt.instance_files = {files[0]};
        opt.solver = "min-value";
        const auto rows = evaluate(opt);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].status == "optimal");
        CHECK(rows[0].trials == 1);
        CHECK(rows[0].nodes_best == rows[0].nodes_worst);
        CHECK(rows[0].nodes_avg == doctest::Approx(rows[0].nodes_best));
    }
    SUBCASE("random baseline: best <= avg <= worst over the trials") {
        EvalOptions opt;
        opt.instance_files = files;
        opt.solver = "random";
        opt.trials = 25;
        const auto rows = evaluate(opt);
        REQUIRE(rows.size() == 2);
        for (const auto& r : rows) {
            CHECK(r.trials == 25);
            CHECK(r.nodes_best <= r.nodes_avg);
            CHECK(r.nodes_avg <= r.nodes_worst);
            CHECK(r.status == "optimal");
        }
    }
    SUBCASE("node limit produces a failure row, not a crash") {
        EvalOptions opt;
        opt.instance_files = {files[0]};
        opt.solver = "min-value";
        opt.limits.node_limit = 1;
        const auto rows = evaluate(opt);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].status == "limit");
    }
    SUBCASE("learned solver is deterministic across evaluations") {
        RunConfig c = tiny_config(dir.str() + "/run");
        c.episodes = 10;
        const auto trained = train(c);
        EvalOptions opt;
        opt.instance_files = files;
        opt.solver = "learned";
        opt.checkpoint = trained.checkpoint_path;
        const auto a = evaluate(opt);
        const auto b = evaluate(opt);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].nodes_avg == b[i].nodes_avg);
            CHECK(a[i].objective == b[i].objective);
            CHECK(a[i].status == b[i].status);
        }
    }
    SUBCASE("closest-city rejected on coloring instances") {
        EvalOptions opt;
        opt.instance_files = {files[0]};
        opt.solver = "closest-city";
        CHECK_THROWS_AS(evaluate(opt), std::invalid_argument);
    }
    SUBCASE("eval csv round trip, byte-stable") {
        EvalOptions opt;
        opt.instance_files = files;
        opt.solver = "random";
        opt.trials = 5;
        const auto rows = evaluate(opt);
        const std::string p1 = dir.str() + "/a.csv";
        const std::string p2 = dir.str() + "/b.csv";
        write_eval_csv(rows, p1);
        write_eval_csv(evaluate(opt), p2);
        CHECK(slurp(p1) == slurp(p2));
        const auto back = read_eval_csv(p1);
        REQUIRE(back.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(back[i].instance == rows[i].instance);
            CHECK(back[i].nodes_best == rows[i].nodes_best);
            CHECK(back[i].trials == rows[i].trials);
        }
    }
}

TEST_CASE("tsptw evaluation with closest-city") {
    TempDir dir("cplearn_eval_tsp");
    const auto files = generate_instances("tsptw", 5, 0, 0, 100.0, 100, 2, 21,
                                          dir.str() + "/inst");
    EvalOptions opt;
    opt.instance_files = files;
    opt.solver = "closest-city";
    const auto rows = evaluate(opt);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) CHECK(r.status == "optimal");
}

TEST_CASE("performance profile") {
    SUBCASE("two solvers, one problem") {
        const auto curves =
            performance_profile({{"A", {10.0}}, {"B", {20.0}}});
        REQUIRE(curves.size() == 2);
        const auto& a = curves[0];
        const auto& b = curves[1];
        CHECK(a.solver == "A");
        CHECK(a.points.front().tau == 1.0);
        CHECK(a.points.front().rho == 1.0);
        CHECK(b.points.front().rho == 0.0);
        CHECK(b.points.back().tau == 2.0);
        CHECK(b.points.back().rho == 1.0);
    }
    SUBCASE("identical solvers jump to 1 at tau = 1") {
        const auto curves =
            performance_profile({{"A", {5, 7}}, {"B", {5, 7}}});
        for (const auto& c : curves) {
            CHECK(c.points.front().tau == 1.0);
            CHECK(c.points.front().rho == 1.0);
        }
    }
    SUBCASE("three solvers, four problems, hand-computed") {
        const auto curves = performance_profile({
            {"A", {1, 2, 4, 2}},
            {"B", {2, 2, 2, profile_failure}},
            {"C", {1, 4, 2, 1}},
        });
        auto rho_at = [&](const std::string& solver, double tau) {
            for (const auto& c : curves)
                if (c.solver == solver) {
                    double rho = 0;
                    for (const auto& p : c.points)
                        if (p.tau <= tau) rho = p.rho;
                    return rho;
                }
            FAIL("missing solver");
            return -1.0;
        };
        CHECK(rho_at("A", 1.0) == doctest::Approx(0.5));
        CHECK(rho_at("A", 2.0) == doctest::Approx(1.0));
        CHECK(rho_at("B", 1.0) == doctest::Approx(0.5));
        CHECK(rho_at("B", 2.0) == doctest::Approx(0.75));
        CHECK(rho_at("C", 1.0) == doctest::Approx(0.75));
        CHECK(rho_at("C", 2.0) == doctest::Approx(1.0));
    }
    SUBCASE("curves are monotone and bounded") {
        const auto curves = performance_profile({
            {"A", {3, 9, 1, 6, profile_failure}},
            {"B", {4, 3, 2, 6, 5}},
        });
        for (const auto& c : curves) {
            double prev = 0.0;
            for (const auto& p : c.points) {
                CHECK(p.rho >= prev);
                CHECK(p.rho <= 1.0);
                prev = p.rho;
            }
        }
    }
    SUBCASE("mismatched instance sets are a usage error") {
        CHECK_THROWS_AS(performance_profile({{"A", {1, 2}}, {"B", {1}}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(performance_profile({{"A", {1}}}),
                        std::invalid_argument);
    }
}

TEST_CASE("profile csv round trip") {
    TempDir dir("cplearn_profcsv");
    const auto curves = performance_profile({{"A", {10.0, 6.0}}, {"B", {20.0, 3.0}}});
    const std::string path = dir.str() + "/profile.csv";
    write_profile_csv(curves, path);
    const auto back = read_profile_csv(path);
    REQUIRE(back.size() == curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        CHECK(back[i].solver == curves[i].solver);
        REQUIRE(back[i].points.size() == curves[i].points.size());
        for (std::size_t j = 0; j < curves[i].points.size(); ++j) {
            CHECK(back[i].points[j].tau ==
                  doctest::Approx(curves[i].points[j].tau));
            CHECK(back[i].points[j].rho ==
                  doctest::Approx(curves[i].points[j].rho));
        }
    }
    plot_profile(path, dir.str() + "/profile.svg");
    CHECK(slurp(dir.str() + "/profile.svg").find("<svg") != std::string::npos);
}

TEST_CASE("malformed csv errors carry the line number") {
    TempDir dir("cplearn_badcsv");
    const std::string path = dir.str() + "/bad.csv";
    {
        std::ofstream out(path);
        out << "episode,mean_nodes\n1,2\noops\n";
    }
    try {
        plot_train_curve(path, dir.str() + "/out.svg");
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
}

TEST_CASE("svg rendering") {
    SUBCASE("empty series: axes only") {
        const auto svg = render_line_chart("t", "x", "y", {{"s", {}}});
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("<path") == std::string::npos);
        CHECK(svg.find("<circle") == std::string::npos);
    }
    SUBCASE("single point: one marker") {
        const auto svg =
            render_line_chart("t", "x", "y", {{"s", {{1.0, 2.0}}}});
        std::size_t markers = 0, pos = 0;
        while ((pos = svg.find("<circle", pos)) != std::string::npos) {
            ++markers;
            pos += 7;
        }
        CHECK(markers == 1);
    }
    SUBCASE("deterministic output for fixed input") {
        const std::vector<ChartSeries> series{
            {"a", {{0, 1}, {1, 3}, {2, 2}}},
            {"b", {{0, 2}, {1, 1}, {2, 4}}}};
        CHECK(render_line_chart("t", "x", "y", series) ==
              render_line_chart("t", "x", "y", series));
    }
}
