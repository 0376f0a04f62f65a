#include "cplearn/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cplearn {

void AgentConfig::validate() const {
    if (gamma <= 0.0 || gamma > 1.0)
        throw std::invalid_argument("config: gamma must be in (0, 1]");
    if (lr <= 0.0) throw std::invalid_argument("config: lr must be positive");
    if (batch_size <= 0 || update_horizon <= 0 || min_replay_history <= 0 ||
        update_freq <= 0 || target_update_freq <= 0 || buffer_capacity <= 0)
        throw std::invalid_argument("config: counts must be positive");
    if (eps_stable > eps_init)
        throw std::invalid_argument("config: eps_stable must not exceed eps_init");
    if (decay_steps <= 0.0)
        throw std::invalid_argument("config: decay_steps must be positive");
}

double epsilon(long step, const AgentConfig& c) {
    const double t = std::max(0L, step - c.warmup_steps);
    return c.eps_stable + (c.eps_init - c.eps_stable) * std::exp(-t / c.decay_steps);
}

int select_action(const Tensor& q_scores, const std::vector<bool>& legal_mask,
                  double eps, bool training, std::mt19937& rng) {
    int n_legal = 0;
    for (bool b : legal_mask) n_legal += b;
    if (n_legal == 0) throw std::invalid_argument("select_action: empty mask");
    if (training && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < eps) {
        std::uniform_int_distribution<int> pick(0, n_legal - 1);
        int k = pick(rng);
        for (std::size_t i = 0; i < legal_mask.size(); ++i)
            if (legal_mask[i] && k-- == 0) return static_cast<int>(i);
    }
    return masked_argmax(q_scores, legal_mask);
}

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
    if (capacity <= 0) throw std::invalid_argument("replay: capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
    t.episode = episode_;
    if (size() < capacity_) {
        store_.push_back(std::move(t));
    } else {
        store_[cursor_] = std::move(t);
        cursor_ = (cursor_ + 1) % capacity_;
    }
}

std::vector<int> ReplayBuffer::sample(int n, std::mt19937& rng) const {
    if (n > size()) throw std::invalid_argument("replay: sample larger than buffer");
    std::vector<int> slots(store_.size());
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
    // partial Fisher-Yates: first n entries are a uniform sample
    for (int i = 0; i < n; ++i) {
        std::uniform_int_distribution<int> pick(i, static_cast<int>(slots.size()) - 1);
        std::swap(slots[i], slots[pick(rng)]);
    }
    slots.resize(n);
    return slots;
}

DQNLearner::DQNLearner(NetworkSpec spec, AgentConfig config)
    : spec_(std::move(spec)), config_(config), rng_(config.seed) {
    config_.validate();
    spec_.validate();
    init_parameters(spec_, online_, config_.seed);
    sync_target();
    syncs_ = 0; // constructor copy is not a scheduled sync
}

Tensor DQNLearner::q_scores(const RLState& state, ParameterStore& params) {
    Tape tape;
    const auto out = network_forward(tape, state.node_features, state.topology,
                                     state.focus_node, spec_, params);
    return tape.val(out);
}

int DQNLearner::act(const RLState& state, bool training) {
    const double eps = training ? epsilon(env_steps_, config_) : 0.0;
    if (training) ++env_steps_;
    return select_action(q_scores(state, online_), state.legal_mask, eps,
                         training, rng_);
}

double DQNLearner::nstep_target(const ReplayBuffer& buffer, int slot) {
    double target = 0.0;
    double discount = 1.0;
    int cur = slot;
    for (int k = 0; k < config_.update_horizon; ++k) {
        const Transition& t = buffer.at(cur);
        target += discount * t.reward;
        discount *= config_.gamma;
        if (t.done) return target; // no bootstrap past a terminal
        const int next = buffer.next_slot(cur);
        const bool contiguous = next < buffer.size() &&
                                buffer.at(next).episode == t.episode &&
                                buffer.at(next).seq == t.seq + 1;
        if (k + 1 == config_.update_horizon || !contiguous) {
            // bootstrap from the stored successor state; double-DQN picks the
            // action with the online net and values it with the target net
            const Tensor tq = q_scores(t.next_state, target_);
            double best;
            if (config_.double_dqn) {
                const Tensor oq = q_scores(t.next_state, online_);
                const int a = masked_argmax(oq, t.next_state.legal_mask);
                best = tq.data[a];
            } else {
                const Tensor masked = mask_scores(tq, t.next_state.legal_mask);
                best = -std::numeric_limits<double>::infinity();
                for (double v : masked.data) best = std::max(best, v);
            }
            return target + discount * best;
        }
        cur = next;
    }
    return target;
}

double DQNLearner::update(ReplayBuffer& buffer) {
    const int n = std::min(config_.batch_size, buffer.size());
    const auto slots = buffer.sample(n, rng_);

    Tensor targets(1, n);
    for (int i = 0; i < n; ++i) targets.at(0, i) = nstep_target(buffer, slots[i]);

    Tape tape;
    std::vector<Tape::NodeId> picked;
    for (int i = 0; i < n; ++i) {
        const Transition& t = buffer.at(slots[i]);
        const auto out = network_forward(tape, t.state.node_features,
                                         t.state.topology, t.state.focus_node,
                                         spec_, online_);
        picked.push_back(spec_.per_node_scores ? tape.select(out, t.action, 0)
                                               : tape.select(out, 0, t.action));
    }
    const auto pred = n == 1 ? picked[0] : tape.concat_cols(picked);
    const auto loss = tape.huber_loss(pred, targets);
    online_.zero_grad();
    tape.backward(loss);
    online_.adam_step(config_.lr);
    ++updates_;
    if (updates_ % config_.target_update_freq == 0) sync_target();
    return tape.val(loss).at(0, 0);
}

std::optional<double> DQNLearner::maybe_update(ReplayBuffer& buffer) {
    if (buffer.size() < config_.min_replay_history) return std::nullopt;
    if (env_steps_ % config_.update_freq != 0) return std::nullopt;
    return update(buffer);
}

void DQNLearner::sync_target() {
    target_.copy_values_from(online_);
    ++syncs_;
}

} // namespace cplearn
