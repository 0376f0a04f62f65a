#include "cplearn/problems/coloring.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cplearn/constraints.hpp"

namespace cplearn::coloring {

BuiltModel build_model(const GraphColoringInstance& inst) {
    BuiltModel out;
    out.model = std::make_unique<CPModel>();
    CPModel& m = *out.model;
    IntVar& k = m.make_var(0, inst.n_vertex);
    out.k_var = k.id();
    for (int i = 0; i < inst.n_vertex; ++i)
        out.vertex_vars.push_back(m.make_var(1, inst.n_vertex).id());
    for (const auto& [u, v] : inst.edges)
        m.post(std::make_unique<NotEqual>(out.vertex_vars.at(u - 1),
                                          out.vertex_vars.at(v - 1)));
    for (int x : out.vertex_vars)
        m.post(std::make_unique<LessOrEqual>(x, k.id()));
    m.set_objective(k.id());
    return out;
}

GraphColoringInstance generate(int n, double p, int k, unsigned seed) {
    if (n < k) throw std::invalid_argument("generate: n < k");
    if (k < 2 || p <= 0.0 || p > 1.0)
        throw std::invalid_argument("generate: bad density or color count");
    GraphColoringInstance inst;
    inst.n_vertex = n;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    // round-robin groups: vertex i (0-based) in group i % k
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (u % k == v % k) continue;
            if (coin(rng) <= p) inst.edges.emplace_back(u + 1, v + 1);
        }
    }
    return inst;
}

std::optional<int> brute_force_optimal(const GraphColoringInstance& inst) {
    if (inst.n_vertex > 8)
        throw std::invalid_argument("brute_force_optimal: instance too large");
    if (inst.n_vertex == 0) return 0;
    std::vector<int> color(inst.n_vertex, 0);
    for (int k = 1; k <= inst.n_vertex; ++k) {
        std::function<bool(int)> fill = [&](int i) -> bool {
            if (i == inst.n_vertex) return true;
            for (int c = 1; c <= k; ++c) {
                bool ok = true;
                for (const auto& [u, v] : inst.edges) {
                    if (v - 1 == i && u - 1 < i && color[u - 1] == c) ok = false;
                    if (u - 1 == i && v - 1 < i && color[v - 1] == c) ok = false;
                }
                if (!ok) continue;
                color[i] = c;
                if (fill(i + 1)) return true;
            }
            return false;
        };
        if (fill(0)) return k;
    }
    return std::nullopt;
}

std::string to_text(const GraphColoringInstance& inst) {
    std::ostringstream os;
    os << "p edge " << inst.n_vertex << ' ' << inst.n_edge() << '\n';
    for (const auto& [u, v] : inst.edges) os << "e " << u << ' ' << v << '\n';
    return os.str();
}

GraphColoringInstance from_text(const std::string& text) {
    std::istringstream is(text);
    GraphColoringInstance inst;
    std::string tok;
    int m = 0;
    bool header = false;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            std::string kind;
            if (!(ls >> kind >> inst.n_vertex >> m) || kind != "edge")
                throw std::runtime_error("bad DIMACS header");
            header = true;
        } else if (tok == "e") {
            int u, v;
            if (!(ls >> u >> v)) throw std::runtime_error("bad edge line");
            inst.edges.emplace_back(u, v);
        }
    }
    if (!header) throw std::runtime_error("missing DIMACS header");
    if (inst.n_edge() != m) throw std::runtime_error("edge count mismatch");
    return inst;
}

GraphColoringInstance load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_text(ss.str());
}

void save_file(const GraphColoringInstance& inst, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << to_text(inst);
}

} // namespace cplearn::coloring
