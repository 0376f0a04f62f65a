#pragma once

#include <functional>
#include <vector>

#include "cplearn/tensor.hpp"

namespace cplearn {

// Reverse-mode tape over dense tensors. Forward ops append nodes; backward
// replays them in reverse, accumulating gradients (never overwriting).
class Tape {
  public:
    using NodeId = int;

    NodeId constant(Tensor t);
    // Leaf referencing a parameter: backward adds into p.grad.
    NodeId param(Parameter& p);

    NodeId matmul(NodeId a, NodeId b);
    NodeId add(NodeId a, NodeId b);                 // same shape
    NodeId add_rowvec(NodeId a, NodeId bias);       // bias 1 x cols
    NodeId scale(NodeId a, double c);
    NodeId relu(NodeId a);
    NodeId leaky_relu(NodeId a, double slope);
    NodeId elu(NodeId a);
    NodeId gather_rows(NodeId a, std::vector<int> idx);
    NodeId segment_sum(NodeId a, std::vector<int> seg, int n_segments);
    NodeId concat_cols(const std::vector<NodeId>& parts);
    // Per-segment softmax of an E x 1 column.
    NodeId segment_softmax(NodeId a, std::vector<int> seg, int n_segments);
    // Scales row i of a by s[i] (s is E x 1).
    NodeId scale_rows(NodeId a, NodeId s);
    NodeId select(NodeId a, int row, int col);      // 1 x 1
    // Mean elementwise Huber loss (delta = 1) against a constant target.
    NodeId huber_loss(NodeId pred, const Tensor& target);

    const Tensor& val(NodeId id) const { return nodes_[id].value; }
    Tensor& grad(NodeId id) { return nodes_[id].grad; }

    void backward(NodeId loss);

    std::size_t size() const { return nodes_.size(); }

  private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::function<void()> back; // empty for constants
    };

    NodeId push(Tensor value, std::function<void()> back = {});

    std::vector<Node> nodes_;
};

} // namespace cplearn
