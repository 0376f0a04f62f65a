#include "cplearn/encode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace cplearn {

namespace {

int constraint_type_code(const std::string& name) {
    if (name == "not_equal") return 0;
    if (name == "less_or_equal") return 1;
    if (name == "dp_transition") return 2;
    return 0;
}

// depth/|X|, capped backtracks, any-solution flag, revisit flag.
std::array<double, 4> global_features(const SearchStatistics& stats, int n_vars,
                                      const FeatureConfig& config) {
    return {
        n_vars > 0 ? static_cast<double>(stats.depth) / n_vars : 0.0,
        std::min(1.0, static_cast<double>(stats.backtracks) / config.backtrack_cap),
        stats.solutions_found > 0 ? 1.0 : 0.0,
        stats.last_node_revisit ? 1.0 : 0.0,
    };
}

} // namespace

GraphTopology TripartiteGraph::topology() const {
    GraphTopology g;
    g.n_nodes = n_nodes();
    g.src = src;
    g.dst = dst;
    return g;
}

TripartiteGraph encode_tripartite(const CPModel& model, int branching_var,
                                  const SearchStatistics& stats,
                                  const FeatureConfig& config) {
    if (branching_var < 0 || branching_var >= model.num_vars())
        throw std::invalid_argument("encode_tripartite: bad variable id");
    if (model.var(branching_var).bound())
        throw std::invalid_argument("encode_tripartite: branching variable is bound");

    TripartiteGraph g;
    g.n_var = model.num_vars();
    g.n_con = model.num_constraints();

    // Value nodes cover the union of every variable's construction-time
    // range, so node count and action indexing stay fixed while domains
    // shrink and restore during search.
    std::set<int> all_values;
    for (int v = 0; v < g.n_var; ++v) {
        const Domain& d = model.var(v).domain();
        for (int w = d.initial_min(); w <= d.initial_max(); ++w) all_values.insert(w);
    }
    g.value_node_values.assign(all_values.begin(), all_values.end());
    g.n_val = static_cast<int>(g.value_node_values.size());
    std::map<int, int> value_slot;
    for (int i = 0; i < g.n_val; ++i) value_slot[g.value_node_values[i]] = i;

    g.action_cap = config.action_cap > 0 ? config.action_cap : g.n_val;
    g.branching_var_index = branching_var;

    const int n_nodes = g.n_nodes();
    g.node_features = Tensor(n_nodes, FeatureConfig::node_width);
    const auto globals = global_features(stats, g.n_var, config);
    const double k = std::max(1, g.action_cap);

    auto add_edge = [&g](int a, int b) {
        g.src.push_back(a);
        g.dst.push_back(b);
        g.src.push_back(b);
        g.dst.push_back(a);
    };

    for (int v = 0; v < g.n_var; ++v) {
        const Domain& d = model.var(v).domain();
        g.node_features.at(v, 0) = 1.0;
        g.node_features.at(v, 3) = d.size() / k;
        g.node_features.at(v, 4) = v == branching_var ? 1.0 : 0.0;
        g.node_features.at(v, 5) =
            model.objective() && *model.objective() == v ? 1.0 : 0.0;
        for (int w : d.values()) {
            const auto it = value_slot.find(w);
            if (it != value_slot.end()) add_edge(v, g.n_var + it->second);
        }
    }
    for (int i = 0; i < g.n_val; ++i) {
        const int node = g.n_var + i;
        g.node_features.at(node, 1) = 1.0;
        g.node_features.at(node, 3) = g.value_node_values[i] / k;
    }
    for (int c = 0; c < g.n_con; ++c) {
        const int node = g.n_var + g.n_val + c;
        const Constraint& con = model.constraint(c);
        g.node_features.at(node, 2) = 1.0;
        g.node_features.at(node, 3) =
            g.n_var > 0 ? static_cast<double>(con.arity()) / g.n_var : 0.0;
        g.node_features.at(node, 4) =
            static_cast<double>(constraint_type_code(con.name()) + 1) /
            config.n_constraint_types;
        for (int v : con.scope()) add_edge(v, node);
    }
    for (int node = 0; node < n_nodes; ++node)
        for (int j = 0; j < FeatureConfig::global_width; ++j)
            g.node_features.at(node, FeatureConfig::local_width + j) = globals[j];

    const Domain& bd = model.var(branching_var).domain();
    g.legal_value_mask.assign(g.n_val, false);
    for (int w : bd.values()) {
        const auto it = value_slot.find(w);
        if (it != value_slot.end()) g.legal_value_mask[it->second] = true;
    }
    g.legal_action_mask.assign(g.action_cap, false);
    for (int i = 0; i < std::min(g.n_val, g.action_cap); ++i)
        g.legal_action_mask[i] = g.legal_value_mask[i];
    return g;
}

ProblemGraph encode_tsptw(const tsptw::BuiltModel& built,
                          const SearchStatistics& stats,
                          const FeatureConfig& config) {
    const tsptw::TSPTWInstance& inst = *built.instance;
    const CPModel& model = *built.model;
    ProblemGraph g;
    g.n = inst.n;

    // Bound route prefix: visited cities and the current position.
    std::vector<bool> visited(inst.n, false);
    int current = 0;
    int first_unbound = -1;
    for (std::size_t i = 0; i < built.stage_vars.size(); ++i) {
        const IntVar& var = model.var(built.stage_vars[i]);
        if (!var.bound()) {
            first_unbound = static_cast<int>(i);
            break;
        }
        visited[var.value()] = true;
        current = var.value();
    }
    g.current_city = current;

    double horizon = 1.0;
    for (int c = 0; c < inst.n; ++c)
        horizon = std::max(horizon, static_cast<double>(inst.tw_end[c]));

    const int local = 6;
    g.node_features = Tensor(inst.n, local + FeatureConfig::global_width);
    const auto globals = global_features(stats, inst.n, config);
    for (int c = 0; c < inst.n; ++c) {
        g.node_features.at(c, 0) = inst.x[c] / inst.grid;
        g.node_features.at(c, 1) = inst.y[c] / inst.grid;
        g.node_features.at(c, 2) = inst.tw_start[c] / horizon;
        g.node_features.at(c, 3) = inst.tw_end[c] / horizon;
        g.node_features.at(c, 4) = visited[c] ? 1.0 : 0.0;
        g.node_features.at(c, 5) = c == current ? 1.0 : 0.0;
        for (int j = 0; j < FeatureConfig::global_width; ++j)
            g.node_features.at(c, local + j) = globals[j];
    }

    // Complete graph, both directions, scalar travel time per edge
    // normalized by the grid diagonal.
    g.topology.n_nodes = inst.n;
    const double diag = std::max(1.0, inst.grid * std::sqrt(2.0) * 100.0);
    std::vector<double> ef;
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.n; ++j) {
            if (i == j) continue;
            g.topology.src.push_back(i);
            g.topology.dst.push_back(j);
            ef.push_back(inst.dist(i, j) / diag);
        }
    g.topology.edge_features = Tensor(g.topology.n_edges(), 1);
    g.topology.edge_features.data = ef;

    g.legal_mask.assign(inst.n, false);
    if (first_unbound >= 0) {
        const IntVar& next = model.var(built.stage_vars[first_unbound]);
        for (int c : next.domain().values())
            if (c >= 0 && c < inst.n) g.legal_mask[c] = true;
    }
    return g;
}

int value_of_action(const TripartiteGraph& graph, int action_index) {
    if (action_index < 0 || action_index >= graph.action_cap)
        throw std::invalid_argument("value_of_action: index outside action space");
    if (action_index >= graph.n_val)
        throw std::invalid_argument("value_of_action: slot not mapped to a value");
    if (!graph.legal_action_mask[action_index])
        throw std::invalid_argument("value_of_action: action is masked");
    return graph.value_node_values[action_index];
}

} // namespace cplearn
