#pragma once

#include <functional>
#include <vector>

#include "cplearn/encode.hpp"
#include "cplearn/search.hpp"

namespace cplearn {

// Snapshot of the solver at one decision point, ready to feed the network.
// `action_values[i]` is the domain value that action slot i denotes.
struct RLState {
    Tensor node_features;
    GraphTopology topology;
    int focus_node = 0;
    std::vector<bool> legal_mask;   // over action slots
    std::vector<int> action_values; // parallel to legal_mask
    SearchStatistics stats;
    bool terminal = false;

    int action_count() const { return static_cast<int>(legal_mask.size()); }
};

// One decision: everything the solver did until the next decision (or the
// end of search) is folded into `reward` and `next_state`.
struct Transition {
    RLState state;
    int action = -1;
    double reward = 0.0;
    RLState next_state;
    bool done = false;
    long episode = 0; // set by the replay buffer
    long seq = 0;     // decision index within the episode
};

enum class RewardKind { step_penalty, two_term };

// step_penalty: -1 per decision, regardless of intervening backtracks.
// two_term:     -w_feas * U - w_obj * Z, where U = unassigned variables at
//               the most recent failure since the previous decision (0 when
//               none) and Z = objective value of a solution found since the
//               previous decision (0 when none). The exact form is a
//               documented choice of this artifact.
struct RewardSpec {
    RewardKind kind = RewardKind::step_penalty;
    double w_feas = 10.0;
    double w_obj = 1.0;
};

// Pure encoders and policies plugged into an episode.
using StateEncoder =
    std::function<RLState(CPModel&, int var_id, const SearchStatistics&)>;
using ActionSelector = std::function<int(const RLState&)>;

struct EpisodeResult {
    SearchResult result;
    std::vector<Transition> transitions;
};

// Value heuristic driven by an action selector; records one Transition per
// decision. Rewards accumulate over whatever the solver does between two
// decisions (propagation, failures, backtracking).
class LearnedHeuristic : public ValueHeuristic {
  public:
    LearnedHeuristic(StateEncoder encoder, ActionSelector selector,
                     RewardSpec reward);

    int select(CPModel& model, int var_id, const SearchStatistics& stats) override;
    void on_fail(int unassigned_vars) override;
    void on_solution(std::optional<int> objective) override;
    void on_terminal(const SearchStatistics& stats) override;

    std::vector<Transition> take_transitions();

  private:
    double pending_reward() const;
    void close_pending(const RLState& next, bool done);

    StateEncoder encoder_;
    ActionSelector selector_;
    RewardSpec reward_;
    std::vector<Transition> transitions_;
    bool has_pending_ = false;
    RLState pending_state_;
    int pending_action_ = -1;
    int fail_unassigned_ = 0;   // from the most recent failure, 0 if none
    double solution_value_ = 0; // objective of a solution since last decision
};

// Full solve with the selector as value heuristic; transitions cover every
// decision, the last one flagged done=true.
EpisodeResult episode_run(CPModel& model, const VariableHeuristic& var_h,
                          const StateEncoder& encoder,
                          const ActionSelector& selector,
                          const RewardSpec& reward,
                          const SearchLimits& limits = {});

// Encoder adapters for the two shipped problem families.
StateEncoder tripartite_encoder(FeatureConfig config);
StateEncoder tsptw_encoder(const tsptw::BuiltModel& built, FeatureConfig config);

} // namespace cplearn
