#pragma once

#include <random>
#include <vector>

#include "cplearn/layers.hpp"
#include "cplearn/rl.hpp"

namespace cplearn {

struct AgentConfig {
    double gamma = 0.9999;
    double lr = 0.0005;
    int batch_size = 32;
    int update_horizon = 25;
    int min_replay_history = 1;
    int update_freq = 10;        // environment steps between updates
    int target_update_freq = 200; // updates between target syncs
    int buffer_capacity = 8000;
    double eps_init = 1.0;
    double eps_stable = 0.001;
    double decay_steps = 5000.0;
    int warmup_steps = 0;
    bool double_dqn = false; // off by default: vanilla target max
    unsigned seed = 0;

    void validate() const;
};

// eps_stable + (eps_init - eps_stable) * exp(-max(0, step - warmup) / decay)
double epsilon(long step, const AgentConfig& config);

// Training: explore uniformly over legal actions with probability eps,
// otherwise masked argmax (lowest index on ties). Evaluation ignores eps.
int select_action(const Tensor& q_scores, const std::vector<bool>& legal_mask,
                  double eps, bool training, std::mt19937& rng);

// Circular store; overwrites the oldest entry at capacity. Entries keep
// (episode, seq) ids so n-step chains can detect overwritten successors.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(int capacity);

    void push(Transition t);
    void start_episode() { ++episode_; }

    int size() const { return static_cast<int>(store_.size()); }
    int capacity() const { return capacity_; }
    const Transition& at(int slot) const { return store_.at(slot); }
    int next_slot(int slot) const { return (slot + 1) % capacity_; }

    // n distinct slots, uniform without replacement within the batch.
    std::vector<int> sample(int n, std::mt19937& rng) const;

  private:
    int capacity_;
    std::vector<Transition> store_;
    int cursor_ = 0;
    long episode_ = 0;
};

class DQNLearner {
  public:
    DQNLearner(NetworkSpec spec, AgentConfig config);

    // Masked Q-scores of `params` on one state (no gradient retained).
    Tensor q_scores(const RLState& state, ParameterStore& params);

    // Epsilon-greedy policy; advances the exploration step in training mode.
    int act(const RLState& state, bool training);

    // Call once per environment step; runs a gradient update every
    // update_freq steps once the buffer holds min_replay_history entries.
    // Returns the loss when an update ran.
    std::optional<double> maybe_update(ReplayBuffer& buffer);

    // One gradient step on a sampled batch (unconditional).
    double update(ReplayBuffer& buffer);

    // Sum of discounted rewards from `slot`, cut at the horizon, terminal,
    // or a broken chain; bootstrapped with the target net's legal max.
    double nstep_target(const ReplayBuffer& buffer, int slot);

    void sync_target();

    long env_steps() const { return env_steps_; }
    long update_count() const { return updates_; }
    long sync_count() const { return syncs_; }
    double current_epsilon() const { return epsilon(env_steps_, config_); }

    const NetworkSpec& spec() const { return spec_; }
    const AgentConfig& config() const { return config_; }
    ParameterStore& online() { return online_; }
    ParameterStore& target() { return target_; }
    const ParameterStore& online() const { return online_; }
    const ParameterStore& target() const { return target_; }
    std::mt19937& rng() { return rng_; }
    void set_env_steps(long n) { env_steps_ = n; }

  private:
    NetworkSpec spec_;
    AgentConfig config_;
    ParameterStore online_;
    ParameterStore target_;
    std::mt19937 rng_;
    long env_steps_ = 0;
    long updates_ = 0;
    long syncs_ = 0;
};

} // namespace cplearn
