#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cplearn/tape.hpp"
#include "cplearn/tensor.hpp"

namespace cplearn {

// Directed edge list plus optional scalar-or-vector edge features. Undirected
// graphs list both directions.
struct GraphTopology {
    int n_nodes = 0;
    std::vector<int> src, dst;          // parallel arrays, edge u -> v means u in N(v)
    Tensor edge_features;               // E x q, empty when unused

    int n_edges() const { return static_cast<int>(src.size()); }
};

enum class GraphLayerKind { s2v, gat };

struct GraphLayerSpec {
    GraphLayerKind kind = GraphLayerKind::gat;
    int in = 0;
    int out = 0;       // per-head width for gat
    int heads = 1;     // gat only
    bool concat = true; // gat: concat heads, else average
    int edge_in = 0;   // s2v only: edge feature width (0 = no edge term)

    int output_width() const {
        if (kind == GraphLayerKind::gat) return concat ? out * heads : out;
        return out;
    }
};

struct DenseSpec {
    int in = 0;
    int out = 0;
    bool relu = true;
};

// Graph chain over all nodes, then a dense chain and a linear output head.
// Two readout modes:
//  - focus readout (default): the head runs on the branching node's embedding
//    and emits all K action scores at once (actions carry a global meaning,
//    e.g. color indices);
//  - per-node scores: the head (width 1) runs on every node's embedding and
//    the score of action i is node i's output (actions denote specific nodes,
//    e.g. cities, whose identity only exists through their features).
struct NetworkSpec {
    int input_width = 0;   // raw node feature width (globals included)
    int raw_feature_width = 0; // s2v f_v width; equals input_width
    std::vector<GraphLayerSpec> graph_chain;
    std::vector<DenseSpec> node_chain;
    DenseSpec output_layer; // relu flag ignored: linear
    int action_count = 0;   // K
    bool per_node_scores = false;

    void validate() const;
};

// Default architecture: 4 GAT layers (in->10 h2 concat, 20->10 h3 concat,
// 30->10 h3 concat, 30->20 h2 average), 4 dense 20->20, output 20->K.
NetworkSpec default_gat_spec(int input_width, int action_count);
// s2v alternative with the same dense stack (per-node scores).
NetworkSpec default_s2v_spec(int input_width, int action_count, int edge_width);
// GAT chain with edge-feature attention bias and per-node scores, for graphs
// whose actions denote nodes and whose edges carry metrics (e.g. distances).
NetworkSpec default_routing_spec(int input_width, int action_count,
                                 int edge_width);

// Creates (glorot, deterministic per seed) every parameter the spec needs.
void init_parameters(const NetworkSpec& spec, ParameterStore& store, unsigned seed);

// One aggregation step of the embedding recursion:
//   mu' = sigma(theta1 f_v + theta2 sum_N mu + theta3 sum_N sigma(theta4 h)).
// Parameters are stored input-major (theta1: k x p etc).
Tape::NodeId s2v_layer_forward(Tape& tape, Tape::NodeId raw_features,
                               Tape::NodeId messages, const GraphTopology& g,
                               const GraphLayerSpec& spec, ParameterStore& store,
                               const std::string& prefix);

// Multi-head graph attention with self-loops, LeakyReLU(0.2) scores and ELU
// output activation.
Tape::NodeId gat_layer_forward(Tape& tape, Tape::NodeId features,
                               const GraphTopology& g, const GraphLayerSpec& spec,
                               ParameterStore& store, const std::string& prefix);

Tape::NodeId dense_forward(Tape& tape, Tape::NodeId x, const DenseSpec& spec,
                           ParameterStore& store, const std::string& prefix);

// Full forward: graph chain on all nodes, branching node embedding through
// the dense stack, raw K scores out (masking is separate).
Tape::NodeId network_forward(Tape& tape, const Tensor& node_features,
                             const GraphTopology& g, int focus_node,
                             const NetworkSpec& spec, ParameterStore& store);

// Illegal entries to -inf; argmax of the result is always legal.
Tensor mask_scores(const Tensor& scores, const std::vector<bool>& legal);

// Masked argmax, lowest index on ties.
int masked_argmax(const Tensor& scores, const std::vector<bool>& legal);

} // namespace cplearn
