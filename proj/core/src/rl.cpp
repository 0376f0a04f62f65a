#include "cplearn/rl.hpp"

#include <stdexcept>

namespace cplearn {

LearnedHeuristic::LearnedHeuristic(StateEncoder encoder, ActionSelector selector,
                                   RewardSpec reward)
    : encoder_(std::move(encoder)), selector_(std::move(selector)),
      reward_(reward) {}

double LearnedHeuristic::pending_reward() const {
    if (reward_.kind == RewardKind::step_penalty) return -1.0;
    return -reward_.w_feas * fail_unassigned_ - reward_.w_obj * solution_value_;
}

void LearnedHeuristic::close_pending(const RLState& next, bool done) {
    if (!has_pending_) return;
    Transition t;
    t.state = std::move(pending_state_);
    t.action = pending_action_;
    t.reward = pending_reward();
    t.next_state = next;
    t.done = done;
    t.seq = static_cast<long>(transitions_.size());
    transitions_.push_back(std::move(t));
    has_pending_ = false;
    fail_unassigned_ = 0;
    solution_value_ = 0;
}

int LearnedHeuristic::select(CPModel& model, int var_id,
                             const SearchStatistics& stats) {
    RLState state = encoder_(model, var_id, stats);

    // The action-space cap can leave no selectable slot (e.g. an objective
    // variable whose remaining values sit above the cap). Such forced
    // decisions take the domain minimum and consume no agent action.
    bool any_legal = false;
    for (bool b : state.legal_mask) any_legal = any_legal || b;
    if (!any_legal) return model.var(var_id).domain().min();

    close_pending(state, /*done=*/false);

    const int action = selector_(state);
    if (action < 0 || action >= state.action_count() || !state.legal_mask[action])
        throw std::logic_error("episode: selector returned an illegal action");
    const int value = state.action_values[action];

    pending_state_ = std::move(state);
    pending_action_ = action;
    has_pending_ = true;
    return value;
}

void LearnedHeuristic::on_fail(int unassigned_vars) {
    fail_unassigned_ = unassigned_vars;
}

void LearnedHeuristic::on_solution(std::optional<int> objective) {
    solution_value_ = objective ? static_cast<double>(*objective) : 0.0;
}

void LearnedHeuristic::on_terminal(const SearchStatistics& stats) {
    RLState end;
    end.terminal = true;
    end.stats = stats;
    close_pending(end, /*done=*/true);
}

std::vector<Transition> LearnedHeuristic::take_transitions() {
    return std::move(transitions_);
}

EpisodeResult episode_run(CPModel& model, const VariableHeuristic& var_h,
                          const StateEncoder& encoder,
                          const ActionSelector& selector,
                          const RewardSpec& reward, const SearchLimits& limits) {
    LearnedHeuristic h(encoder, selector, reward);
    EpisodeResult out;
    out.result = dfs_solve(model, var_h, h, limits);
    out.transitions = h.take_transitions();
    return out;
}

StateEncoder tripartite_encoder(FeatureConfig config) {
    return [config](CPModel& m, int var_id, const SearchStatistics& stats) {
        const TripartiteGraph g = encode_tripartite(m, var_id, stats, config);
        RLState s;
        s.node_features = g.node_features;
        s.topology = g.topology();
        s.focus_node = g.branching_var_index;
        s.legal_mask = g.legal_action_mask;
        s.action_values.assign(g.action_cap, 0);
        for (int i = 0; i < std::min(g.n_val, g.action_cap); ++i)
            s.action_values[i] = g.value_node_values[i];
        s.stats = stats;
        return s;
    };
}

StateEncoder tsptw_encoder(const tsptw::BuiltModel& built, FeatureConfig config) {
    const tsptw::BuiltModel* b = &built;
    return [b, config](CPModel& m, int var_id, const SearchStatistics& stats) {
        if (&m != b->model.get())
            throw std::invalid_argument("tsptw_encoder: model mismatch");
        const ProblemGraph g = encode_tsptw(*b, stats, config);
        RLState s;
        s.node_features = g.node_features;
        s.topology = g.topology;
        s.focus_node = g.current_city;
        // action i <-> city i; legality from the pending stage's domain,
        // intersected with the branching variable when it differs
        s.legal_mask = g.legal_mask;
        s.action_values.resize(g.n);
        for (int i = 0; i < g.n; ++i) s.action_values[i] = i;
        const Domain& d = m.var(var_id).domain();
        for (int i = 0; i < g.n; ++i)
            if (s.legal_mask[i] && !d.contains(i)) s.legal_mask[i] = false;
        s.stats = stats;
        return s;
    };
}

} // namespace cplearn
