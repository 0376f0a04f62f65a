#include "cplearn/layers.hpp"

#include <limits>
#include <stdexcept>

namespace cplearn {

void NetworkSpec::validate() const {
    int w = input_width;
    for (const auto& l : graph_chain) {
        if (l.in != w) throw std::invalid_argument("graph chain widths do not compose");
        w = l.output_width();
    }
    for (const auto& l : node_chain) {
        if (l.in != w) throw std::invalid_argument("node chain widths do not compose");
        w = l.out;
    }
    if (output_layer.in != w)
        throw std::invalid_argument("output layer width does not compose");
    if (per_node_scores) {
        if (output_layer.out != 1)
            throw std::invalid_argument(
                "per-node scoring needs a width-1 output head");
    } else if (output_layer.out != action_count) {
        throw std::invalid_argument("output width must equal action count");
    }
}

NetworkSpec default_gat_spec(int input_width, int action_count) {
    NetworkSpec s;
    s.input_width = input_width;
    s.raw_feature_width = input_width;
    s.graph_chain = {
        {GraphLayerKind::gat, input_width, 10, 2, true, 0},
        {GraphLayerKind::gat, 20, 10, 3, true, 0},
        {GraphLayerKind::gat, 30, 10, 3, true, 0},
        {GraphLayerKind::gat, 30, 20, 2, false, 0},
    };
    s.node_chain = {{20, 20, true}, {20, 20, true}, {20, 20, true}, {20, 20, true}};
    s.output_layer = {20, action_count, false};
    s.action_count = action_count;
    return s;
}

NetworkSpec default_s2v_spec(int input_width, int action_count, int edge_width) {
    NetworkSpec s;
    s.input_width = input_width;
    s.raw_feature_width = input_width;
    s.graph_chain = {
        {GraphLayerKind::s2v, input_width, 20, 1, true, edge_width},
        {GraphLayerKind::s2v, 20, 20, 1, true, edge_width},
        {GraphLayerKind::s2v, 20, 20, 1, true, edge_width},
        {GraphLayerKind::s2v, 20, 20, 1, true, edge_width},
    };
    s.node_chain = {{20, 20, true}, {20, 20, true}, {20, 20, true}, {20, 20, true}};
    s.output_layer = {20, 1, false};
    s.action_count = action_count;
    s.per_node_scores = true; // actions are node identities (e.g. cities)
    return s;
}

NetworkSpec default_routing_spec(int input_width, int action_count,
                                 int edge_width) {
    NetworkSpec s;
    s.input_width = input_width;
    s.raw_feature_width = input_width;
    s.graph_chain = {
        {GraphLayerKind::gat, input_width, 10, 2, true, edge_width},
        {GraphLayerKind::gat, 20, 10, 3, true, edge_width},
        {GraphLayerKind::gat, 30, 10, 3, true, edge_width},
        {GraphLayerKind::gat, 30, 20, 2, false, edge_width},
    };
    s.node_chain = {{20, 20, true}, {20, 20, true}, {20, 20, true}, {20, 20, true}};
    s.output_layer = {20, 1, false};
    s.action_count = action_count;
    s.per_node_scores = true;
    return s;
}

namespace {

void create_if_missing(ParameterStore& store, const std::string& name, int rows,
                       int cols, unsigned& seed) {
    if (!store.has(name)) store.create(name, glorot_init(rows, cols, seed));
    ++seed;
}

void create_zero_if_missing(ParameterStore& store, const std::string& name,
                            int rows, int cols) {
    if (!store.has(name)) store.create(name, Tensor(rows, cols));
}

} // namespace

void init_parameters(const NetworkSpec& spec, ParameterStore& store, unsigned seed) {
    spec.validate();
    for (std::size_t i = 0; i < spec.graph_chain.size(); ++i) {
        const auto& l = spec.graph_chain[i];
        const std::string p = "g" + std::to_string(i) + ".";
        if (l.kind == GraphLayerKind::gat) {
            for (int h = 0; h < l.heads; ++h) {
                const std::string hp = p + "h" + std::to_string(h) + ".";
                create_if_missing(store, hp + "W", l.in, l.out, seed);
                create_if_missing(store, hp + "a", 2 * l.out, 1, seed);
                if (l.edge_in > 0)
                    create_if_missing(store, hp + "ae", l.edge_in, 1, seed);
            }
        } else {
            create_if_missing(store, p + "theta1", spec.raw_feature_width, l.out, seed);
            create_if_missing(store, p + "theta2", l.in, l.out, seed);
            if (l.edge_in > 0) {
                create_if_missing(store, p + "theta3", l.out, l.out, seed);
                create_if_missing(store, p + "theta4", l.edge_in, l.out, seed);
            }
        }
    }
    for (std::size_t i = 0; i < spec.node_chain.size(); ++i) {
        const auto& l = spec.node_chain[i];
        const std::string p = "d" + std::to_string(i) + ".";
        create_if_missing(store, p + "W", l.in, l.out, seed);
        create_zero_if_missing(store, p + "b", 1, l.out);
    }
    create_if_missing(store, "out.W", spec.output_layer.in, spec.output_layer.out, seed);
    create_zero_if_missing(store, "out.b", 1, spec.output_layer.out);
}

Tape::NodeId s2v_layer_forward(Tape& tape, Tape::NodeId raw_features,
                               Tape::NodeId messages, const GraphTopology& g,
                               const GraphLayerSpec& spec, ParameterStore& store,
                               const std::string& prefix) {
    if (tape.val(messages).cols != spec.in)
        throw std::invalid_argument("s2v: message width mismatch");
    const auto t1 = tape.param(store.get(prefix + "theta1"));
    const auto t2 = tape.param(store.get(prefix + "theta2"));

    auto out = tape.matmul(raw_features, t1);
    if (g.n_edges() > 0) {
        const auto neigh = tape.segment_sum(tape.gather_rows(messages, g.src),
                                            g.dst, g.n_nodes);
        out = tape.add(out, tape.matmul(neigh, t2));
        if (spec.edge_in > 0) {
            if (g.edge_features.rows != g.n_edges() ||
                g.edge_features.cols != spec.edge_in)
                throw std::invalid_argument("s2v: edge feature shape mismatch");
            const auto t3 = tape.param(store.get(prefix + "theta3"));
            const auto t4 = tape.param(store.get(prefix + "theta4"));
            const auto h = tape.constant(g.edge_features);
            const auto per_edge = tape.relu(tape.matmul(h, t4));
            const auto agg = tape.segment_sum(per_edge, g.dst, g.n_nodes);
            out = tape.add(out, tape.matmul(agg, t3));
        }
    }
    return tape.relu(out);
}

Tape::NodeId gat_layer_forward(Tape& tape, Tape::NodeId features,
                               const GraphTopology& g, const GraphLayerSpec& spec,
                               ParameterStore& store, const std::string& prefix) {
    if (tape.val(features).cols != spec.in)
        throw std::invalid_argument("gat: input width mismatch");
    // edges plus self-loops; attention over N(i) and i itself
    std::vector<int> src = g.src, dst = g.dst;
    for (int i = 0; i < g.n_nodes; ++i) {
        src.push_back(i);
        dst.push_back(i);
    }

    std::vector<Tape::NodeId> head_outputs;
    for (int h = 0; h < spec.heads; ++h) {
        const std::string hp = prefix + "h" + std::to_string(h) + ".";
        const auto W = tape.param(store.get(hp + "W"));
        const auto a = tape.param(store.get(hp + "a"));
        const auto H = tape.matmul(features, W); // n x out
        const auto h_dst = tape.gather_rows(H, dst);
        const auto h_src = tape.gather_rows(H, src);
        // e_ij = LeakyReLU(a^T [W h_i || W h_j] (+ ae^T h_ij)), i = target,
        // j = source; edge features bias the attention logits (self-loops
        // carry a zero edge feature)
        auto logits = tape.matmul(tape.concat_cols({h_dst, h_src}), a);
        if (spec.edge_in > 0) {
            if (g.edge_features.rows != g.n_edges() ||
                g.edge_features.cols != spec.edge_in)
                throw std::invalid_argument("gat: edge feature shape mismatch");
            Tensor padded(g.n_edges() + g.n_nodes, spec.edge_in);
            for (int e = 0; e < g.n_edges(); ++e)
                for (int j = 0; j < spec.edge_in; ++j)
                    padded.at(e, j) = g.edge_features.at(e, j);
            const auto ae = tape.param(store.get(hp + "ae"));
            logits = tape.add(logits, tape.matmul(tape.constant(padded), ae));
        }
        const auto scores = tape.leaky_relu(logits, 0.2);
        const auto alpha = tape.segment_softmax(scores, dst, g.n_nodes);
        const auto weighted = tape.scale_rows(h_src, alpha);
        const auto agg = tape.segment_sum(weighted, dst, g.n_nodes);
        head_outputs.push_back(tape.elu(agg));
    }
    if (spec.heads == 1) return head_outputs[0];
    if (spec.concat) return tape.concat_cols(head_outputs);
    auto sum = head_outputs[0];
    for (int h = 1; h < spec.heads; ++h) sum = tape.add(sum, head_outputs[h]);
    return tape.scale(sum, 1.0 / spec.heads);
}

Tape::NodeId dense_forward(Tape& tape, Tape::NodeId x, const DenseSpec& spec,
                           ParameterStore& store, const std::string& prefix) {
    const auto W = tape.param(store.get(prefix + "W"));
    const auto b = tape.param(store.get(prefix + "b"));
    auto out = tape.add_rowvec(tape.matmul(x, W), b);
    return spec.relu ? tape.relu(out) : out;
}

Tape::NodeId network_forward(Tape& tape, const Tensor& node_features,
                             const GraphTopology& g, int focus_node,
                             const NetworkSpec& spec, ParameterStore& store) {
    if (node_features.rows != g.n_nodes)
        throw std::invalid_argument("network_forward: feature row count mismatch");
    if (focus_node < 0 || focus_node >= g.n_nodes)
        throw std::invalid_argument("network_forward: bad focus node");
    const auto raw = tape.constant(node_features);
    auto x = raw;
    for (std::size_t i = 0; i < spec.graph_chain.size(); ++i) {
        const auto& l = spec.graph_chain[i];
        const std::string p = "g" + std::to_string(i) + ".";
        x = l.kind == GraphLayerKind::gat
                ? gat_layer_forward(tape, x, g, l, store, p)
                : s2v_layer_forward(tape, raw, x, g, l, store, p);
    }
    auto emb = spec.per_node_scores ? x : tape.gather_rows(x, {focus_node});
    for (std::size_t i = 0; i < spec.node_chain.size(); ++i)
        emb = dense_forward(tape, emb, spec.node_chain[i], store,
                            "d" + std::to_string(i) + ".");
    DenseSpec out_spec = spec.output_layer;
    out_spec.relu = false;
    return dense_forward(tape, emb, out_spec, store, "out.");
}

Tensor mask_scores(const Tensor& scores, const std::vector<bool>& legal) {
    if (static_cast<int>(legal.size()) != scores.rows * scores.cols)
        throw std::invalid_argument("mask_scores: length mismatch");
    bool any = false;
    for (bool b : legal) any = any || b;
    if (!any) throw std::invalid_argument("mask_scores: no legal action");
    Tensor out = scores;
    for (std::size_t i = 0; i < legal.size(); ++i)
        if (!legal[i]) out.data[i] = -std::numeric_limits<double>::infinity();
    return out;
}

int masked_argmax(const Tensor& scores, const std::vector<bool>& legal) {
    const Tensor masked = mask_scores(scores, legal);
    int best = -1;
    for (std::size_t i = 0; i < masked.size(); ++i) {
        if (!legal[i]) continue;
        if (best < 0 || masked.data[i] > masked.data[best]) best = static_cast<int>(i);
    }
    return best;
}

} // namespace cplearn
