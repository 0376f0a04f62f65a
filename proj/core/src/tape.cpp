#include "cplearn/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace cplearn {

namespace {
void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}
} // namespace

Tape::NodeId Tape::push(Tensor value, std::function<void()> back) {
    Node n;
    n.grad = Tensor(value.rows, value.cols);
    n.value = std::move(value);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

Tape::NodeId Tape::constant(Tensor t) { return push(std::move(t)); }

Tape::NodeId Tape::param(Parameter& p) {
    const NodeId id = push(p.value);
    Parameter* pp = &p;
    nodes_[id].back = [this, id, pp]() {
        const Tensor& g = nodes_[id].grad;
        for (std::size_t i = 0; i < g.size(); ++i) pp->grad.data[i] += g.data[i];
    };
    return id;
}

Tape::NodeId Tape::matmul(NodeId a, NodeId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    require(A.cols == B.rows, "matmul: inner dimensions differ");
    Tensor C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < B.cols; ++j) {
            double acc = 0.0;
            for (int k = 0; k < A.cols; ++k) acc += double(A.at(i, k)) * B.at(k, j);
            C.at(i, j) = static_cast<double>(acc);
        }
    }
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, b]() {
        const Tensor& dC = nodes_[id].grad;
        const Tensor& A = val(a);
        const Tensor& B = val(b);
        Tensor& dA = nodes_[a].grad;
        Tensor& dB = nodes_[b].grad;
        for (int i = 0; i < A.rows; ++i)
            for (int k = 0; k < A.cols; ++k) {
                double acc = 0.0;
                for (int j = 0; j < B.cols; ++j)
                    acc += double(dC.at(i, j)) * B.at(k, j);
                dA.at(i, k) += static_cast<double>(acc);
            }
        for (int k = 0; k < B.rows; ++k)
            for (int j = 0; j < B.cols; ++j) {
                double acc = 0.0;
                for (int i = 0; i < A.rows; ++i)
                    acc += double(A.at(i, k)) * dC.at(i, j);
                dB.at(k, j) += static_cast<double>(acc);
            }
    };
    return id;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    require(A.same_shape(B), "add: shape mismatch");
    Tensor C = A;
    for (std::size_t i = 0; i < C.size(); ++i) C.data[i] += B.data[i];
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, b]() {
        const Tensor& g = nodes_[id].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            nodes_[a].grad.data[i] += g.data[i];
            nodes_[b].grad.data[i] += g.data[i];
        }
    };
    return id;
}

Tape::NodeId Tape::add_rowvec(NodeId a, NodeId bias) {
    const Tensor& A = val(a);
    const Tensor& B = val(bias);
    require(B.rows == 1 && B.cols == A.cols, "add_rowvec: bias shape mismatch");
    Tensor C = A;
    for (int i = 0; i < C.rows; ++i)
        for (int j = 0; j < C.cols; ++j) C.at(i, j) += B.at(0, j);
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, bias]() {
        const Tensor& g = nodes_[id].grad;
        Tensor& dA = nodes_[a].grad;
        Tensor& dB = nodes_[bias].grad;
        for (int i = 0; i < g.rows; ++i)
            for (int j = 0; j < g.cols; ++j) {
                dA.at(i, j) += g.at(i, j);
                dB.at(0, j) += g.at(i, j);
            }
    };
    return id;
}

Tape::NodeId Tape::scale(NodeId a, double c) {
    Tensor C = val(a);
    for (auto& v : C.data) v = static_cast<double>(v * c);
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, c]() {
        const Tensor& g = nodes_[id].grad;
        for (std::size_t i = 0; i < g.size(); ++i)
            nodes_[a].grad.data[i] += static_cast<double>(g.data[i] * c);
    };
    return id;
}

Tape::NodeId Tape::relu(NodeId a) { return leaky_relu(a, 0.0); }

Tape::NodeId Tape::leaky_relu(NodeId a, double slope) {
    Tensor C = val(a);
    for (auto& v : C.data)
        if (v < 0.0f) v = static_cast<double>(v * slope);
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, slope]() {
        const Tensor& g = nodes_[id].grad;
        const Tensor& in = val(a);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double d = in.data[i] > 0.0f ? 1.0 : slope;
            nodes_[a].grad.data[i] += static_cast<double>(g.data[i] * d);
        }
    };
    return id;
}

Tape::NodeId Tape::elu(NodeId a) {
    Tensor C = val(a);
    for (auto& v : C.data)
        if (v < 0.0f) v = static_cast<double>(std::exp(double(v)) - 1.0);
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a]() {
        const Tensor& g = nodes_[id].grad;
        const Tensor& out = val(id);
        const Tensor& in = val(a);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double d = in.data[i] > 0.0f ? 1.0 : double(out.data[i]) + 1.0;
            nodes_[a].grad.data[i] += static_cast<double>(g.data[i] * d);
        }
    };
    return id;
}

Tape::NodeId Tape::gather_rows(NodeId a, std::vector<int> idx) {
    const Tensor& A = val(a);
    Tensor C(static_cast<int>(idx.size()), A.cols);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        require(idx[i] >= 0 && idx[i] < A.rows, "gather_rows: index out of range");
        for (int j = 0; j < A.cols; ++j) C.at(static_cast<int>(i), j) = A.at(idx[i], j);
    }
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, idx = std::move(idx)]() {
        const Tensor& g = nodes_[id].grad;
        Tensor& dA = nodes_[a].grad;
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (int j = 0; j < g.cols; ++j)
                dA.at(idx[i], j) += g.at(static_cast<int>(i), j);
    };
    return id;
}

Tape::NodeId Tape::segment_sum(NodeId a, std::vector<int> seg, int n_segments) {
    const Tensor& A = val(a);
    require(static_cast<int>(seg.size()) == A.rows, "segment_sum: seg size mismatch");
    Tensor C(n_segments, A.cols);
    for (int i = 0; i < A.rows; ++i) {
        require(seg[i] >= 0 && seg[i] < n_segments, "segment_sum: bad segment id");
        for (int j = 0; j < A.cols; ++j) C.at(seg[i], j) += A.at(i, j);
    }
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, seg = std::move(seg)]() {
        const Tensor& g = nodes_[id].grad;
        Tensor& dA = nodes_[a].grad;
        for (std::size_t i = 0; i < seg.size(); ++i)
            for (int j = 0; j < g.cols; ++j)
                dA.at(static_cast<int>(i), j) += g.at(seg[i], j);
    };
    return id;
}

Tape::NodeId Tape::concat_cols(const std::vector<NodeId>& parts) {
    require(!parts.empty(), "concat_cols: empty");
    const int rows = val(parts[0]).rows;
    int cols = 0;
    for (NodeId p : parts) {
        require(val(p).rows == rows, "concat_cols: row mismatch");
        cols += val(p).cols;
    }
    Tensor C(rows, cols);
    int off = 0;
    for (NodeId p : parts) {
        const Tensor& P = val(p);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < P.cols; ++j) C.at(i, off + j) = P.at(i, j);
        off += P.cols;
    }
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, parts]() {
        const Tensor& g = nodes_[id].grad;
        int off = 0;
        for (NodeId p : parts) {
            Tensor& dP = nodes_[p].grad;
            for (int i = 0; i < g.rows; ++i)
                for (int j = 0; j < dP.cols; ++j) dP.at(i, j) += g.at(i, off + j);
            off += dP.cols;
        }
    };
    return id;
}

Tape::NodeId Tape::segment_softmax(NodeId a, std::vector<int> seg, int n_segments) {
    const Tensor& A = val(a);
    require(A.cols == 1, "segment_softmax: column vector expected");
    require(static_cast<int>(seg.size()) == A.rows, "segment_softmax: seg size mismatch");
    std::vector<double> mx(n_segments, -1e300), denom(n_segments, 0.0);
    for (int i = 0; i < A.rows; ++i) mx[seg[i]] = std::max(mx[seg[i]], double(A.at(i, 0)));
    Tensor C(A.rows, 1);
    for (int i = 0; i < A.rows; ++i) {
        const double e = std::exp(double(A.at(i, 0)) - mx[seg[i]]);
        C.at(i, 0) = static_cast<double>(e);
        denom[seg[i]] += e;
    }
    for (int i = 0; i < A.rows; ++i)
        C.at(i, 0) = static_cast<double>(double(C.at(i, 0)) / denom[seg[i]]);
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, seg = std::move(seg), n_segments]() {
        const Tensor& g = nodes_[id].grad;
        const Tensor& y = val(id);
        std::vector<double> dot(n_segments, 0.0);
        for (int i = 0; i < g.rows; ++i) dot[seg[i]] += double(g.at(i, 0)) * y.at(i, 0);
        Tensor& dA = nodes_[a].grad;
        for (int i = 0; i < g.rows; ++i)
            dA.at(i, 0) += static_cast<double>(double(y.at(i, 0)) *
                                              (double(g.at(i, 0)) - dot[seg[i]]));
    };
    return id;
}

Tape::NodeId Tape::scale_rows(NodeId a, NodeId s) {
    const Tensor& A = val(a);
    const Tensor& S = val(s);
    require(S.cols == 1 && S.rows == A.rows, "scale_rows: scale shape mismatch");
    Tensor C = A;
    for (int i = 0; i < C.rows; ++i)
        for (int j = 0; j < C.cols; ++j)
            C.at(i, j) = static_cast<double>(double(C.at(i, j)) * S.at(i, 0));
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, s]() {
        const Tensor& g = nodes_[id].grad;
        const Tensor& A = val(a);
        const Tensor& S = val(s);
        Tensor& dA = nodes_[a].grad;
        Tensor& dS = nodes_[s].grad;
        for (int i = 0; i < g.rows; ++i) {
            double acc = 0.0;
            for (int j = 0; j < g.cols; ++j) {
                dA.at(i, j) += static_cast<double>(double(g.at(i, j)) * S.at(i, 0));
                acc += double(g.at(i, j)) * A.at(i, j);
            }
            dS.at(i, 0) += static_cast<double>(acc);
        }
    };
    return id;
}

Tape::NodeId Tape::select(NodeId a, int row, int col) {
    const Tensor& A = val(a);
    require(row >= 0 && row < A.rows && col >= 0 && col < A.cols,
            "select: index out of range");
    Tensor C(1, 1);
    C.at(0, 0) = A.at(row, col);
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, a, row, col]() {
        nodes_[a].grad.at(row, col) += nodes_[id].grad.at(0, 0);
    };
    return id;
}

Tape::NodeId Tape::huber_loss(NodeId pred, const Tensor& target) {
    const Tensor& P = val(pred);
    require(P.same_shape(target), "huber_loss: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < P.size(); ++i) {
        const double e = double(P.data[i]) - target.data[i];
        acc += std::abs(e) <= 1.0 ? 0.5 * e * e : std::abs(e) - 0.5;
    }
    Tensor C(1, 1);
    C.at(0, 0) = static_cast<double>(acc / P.size());
    const NodeId id = push(std::move(C));
    nodes_[id].back = [this, id, pred, target]() {
        const double g = nodes_[id].grad.at(0, 0);
        const Tensor& P = val(pred);
        Tensor& dP = nodes_[pred].grad;
        const double inv_n = 1.0 / P.size();
        for (std::size_t i = 0; i < P.size(); ++i) {
            const double e = double(P.data[i]) - target.data[i];
            const double d = std::abs(e) <= 1.0 ? e : (e > 0 ? 1.0 : -1.0);
            dP.data[i] += static_cast<double>(g * d * inv_n);
        }
    };
    return id;
}

void Tape::backward(NodeId loss) {
    require(loss >= 0 && loss < static_cast<NodeId>(nodes_.size()), "backward: bad id");
    require(val(loss).rows == 1 && val(loss).cols == 1, "backward: loss must be scalar");
    nodes_[loss].grad.at(0, 0) = 1.0f;
    for (NodeId id = loss; id >= 0; --id)
        if (nodes_[id].back) nodes_[id].back();
}

} // namespace cplearn
