#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cplearn {

// Dense row-major 2-D tensor. Parameters and activations are double
// precision so analytic gradients can be checked against central
// differences at tight tolerances.
struct Tensor {
    int rows = 0, cols = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0f) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    std::size_t size() const { return data.size(); }
    bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
    void zero() { std::fill(data.begin(), data.end(), 0.0f); }
};

// Uniform in +-sqrt(6 / (fan_in + fan_out)), deterministic per seed.
inline Tensor glorot_init(int rows, int cols, unsigned seed) {
    Tensor t(rows, cols);
    const double bound = std::sqrt(6.0 / (rows + cols));
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& v : t.data) v = static_cast<double>(u(rng));
    return t;
}

struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;   // accumulated by backward passes
    Tensor adam_m; // first moment
    Tensor adam_v; // second moment
};

// Named parameters plus shared Adam state.
class ParameterStore {
  public:
    Parameter& create(const std::string& name, Tensor init) {
        if (params_.count(name))
            throw std::invalid_argument("parameter exists: " + name);
        auto& p = params_[name];
        p.name = name;
        p.grad = Tensor(init.rows, init.cols);
        p.adam_m = Tensor(init.rows, init.cols);
        p.adam_v = Tensor(init.rows, init.cols);
        p.value = std::move(init);
        order_.push_back(name);
        return p;
    }

    Parameter& get(const std::string& name) {
        auto it = params_.find(name);
        if (it == params_.end())
            throw std::invalid_argument("unknown parameter: " + name);
        return it->second;
    }
    const Parameter& get(const std::string& name) const {
        auto it = params_.find(name);
        if (it == params_.end())
            throw std::invalid_argument("unknown parameter: " + name);
        return it->second;
    }
    bool has(const std::string& name) const { return params_.count(name) != 0; }

    const std::vector<std::string>& names() const { return order_; }

    void zero_grad() {
        for (auto& [_, p] : params_) p.grad.zero();
    }

    long adam_step_count() const { return adam_steps_; }

    // Bias-corrected Adam over every parameter; one shared step counter.
    void adam_step(double lr = 0.0005, double beta1 = 0.9, double beta2 = 0.999,
                   double eps = 1e-8) {
        ++adam_steps_;
        const double bc1 = 1.0 - std::pow(beta1, adam_steps_);
        const double bc2 = 1.0 - std::pow(beta2, adam_steps_);
        for (const auto& name : order_) {
            Parameter& p = params_[name];
            for (std::size_t i = 0; i < p.value.size(); ++i) {
                const double g = p.grad.data[i];
                const double m = beta1 * p.adam_m.data[i] + (1.0 - beta1) * g;
                const double v = beta2 * p.adam_v.data[i] + (1.0 - beta2) * g * g;
                p.adam_m.data[i] = static_cast<double>(m);
                p.adam_v.data[i] = static_cast<double>(v);
                p.value.data[i] -= static_cast<double>(lr * (m / bc1) /
                                                      (std::sqrt(v / bc2) + eps));
            }
        }
    }

    // Deep copy of values only (target-network sync).
    void copy_values_from(const ParameterStore& other) {
        for (const auto& name : other.order_) {
            const Parameter& src = other.get(name);
            if (!has(name)) {
                create(name, src.value);
            } else {
                Parameter& dst = get(name);
                if (!dst.value.same_shape(src.value))
                    throw std::invalid_argument("shape mismatch on sync: " + name);
                dst.value = src.value;
            }
        }
    }

  private:
    std::map<std::string, Parameter> params_;
    std::vector<std::string> order_;
    long adam_steps_ = 0;
};

} // namespace cplearn
