#pragma once

#include <vector>

#include "cplearn/layers.hpp"
#include "cplearn/model.hpp"
#include "cplearn/problems/tsptw.hpp"
#include "cplearn/search.hpp"
#include "cplearn/tensor.hpp"

namespace cplearn {

// Feature layout and normalization constants shared by both encoders.
struct FeatureConfig {
    // Score-vector length K. 0 means "as many actions as value nodes".
    int action_cap = 0;
    int n_constraint_types = 3;
    // Backtrack counts are squashed into [0, 1] against this cap.
    double backtrack_cap = 1000.0;

    static constexpr int class_width = 3;   // one-hot node class tag
    static constexpr int local_width = 7;   // class tag + per-class features
    static constexpr int global_width = 4;  // search statistics broadcast
    static constexpr int node_width = local_width + global_width;
};

// Solver state as a graph over three node classes: one node per variable,
// one per distinct value any variable could originally take, one per
// constraint. Edges link variables to the values currently in their domain
// and to the constraints watching them; there are no other edges. Node ids
// run [variables | values | constraints].
struct TripartiteGraph {
    int n_var = 0, n_val = 0, n_con = 0;
    std::vector<int> src, dst; // both directions of every undirected edge
    Tensor node_features;      // n_nodes x FeatureConfig::node_width
    int branching_var_index = -1;        // node id of the branching variable
    std::vector<int> value_node_values;  // ascending; value of value node i
    std::vector<bool> legal_value_mask;  // over value nodes
    std::vector<bool> legal_action_mask; // over the K action slots
    int action_cap = 0;

    int n_nodes() const { return n_var + n_val + n_con; }
    GraphTopology topology() const;
};

// City-graph view of a routing state: complete graph, travel times as edge
// features, mask over the cities assignable at the pending decision.
struct ProblemGraph {
    int n = 0;
    Tensor node_features; // n x (6 locals + 4 globals)
    GraphTopology topology;
    std::vector<bool> legal_mask;
    int current_city = 0;
};

// Pure function of (current domains, constraint set, statistics). The
// branching variable must be unbound.
TripartiteGraph encode_tripartite(const CPModel& model, int branching_var,
                                  const SearchStatistics& stats,
                                  const FeatureConfig& config);

// Pure function of (instance, bound route prefix, statistics).
ProblemGraph encode_tsptw(const tsptw::BuiltModel& built,
                          const SearchStatistics& stats,
                          const FeatureConfig& config);

// Integer value denoted by action slot `action_index`; throws when the slot
// is outside the mapped range.
int value_of_action(const TripartiteGraph& graph, int action_index);

} // namespace cplearn
