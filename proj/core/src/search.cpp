#include "cplearn/search.hpp"

#include <chrono>
#include <stdexcept>

namespace cplearn {

std::optional<int> select_variable_min_domain(CPModel& model) {
    std::optional<int> best;
    int best_size = 0;
    for (int i = 0; i < model.num_vars(); ++i) {
        const IntVar& v = model.var(i);
        if (v.bound()) continue;
        const int s = v.domain().size();
        if (!best || s < best_size) {
            best = i;
            best_size = s;
        }
    }
    return best;
}

std::optional<int> select_variable_first_unbound(CPModel& model) {
    for (int i = 0; i < model.num_vars(); ++i)
        if (!model.var(i).bound()) return i;
    return std::nullopt;
}

VariableHeuristic min_domain_heuristic() {
    return [](CPModel& m) { return select_variable_min_domain(m); };
}

VariableHeuristic first_unbound_heuristic() {
    return [](CPModel& m) { return select_variable_first_unbound(m); };
}

namespace {

struct Searcher {
    CPModel& model;
    const VariableHeuristic& var_h;
    ValueHeuristic& val_h;
    const SearchLimits& limits;
    SearchResult result;
    std::chrono::steady_clock::time_point start;
    bool aborted = false;
    bool stop_on_first = false; // satisfaction models stop at the first solution
    bool found_and_stopped = false;

    int count_unassigned() const {
        int n = 0;
        for (int i = 0; i < model.num_vars(); ++i)
            if (!model.var(i).bound()) ++n;
        return n;
    }

    bool limit_hit() {
        if (limits.node_limit && result.stats.nodes_visited >= *limits.node_limit)
            return true;
        if (limits.time_limit_s) {
            const double el = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            if (el >= *limits.time_limit_s) return true;
        }
        return false;
    }

    // Returns false when the search must stop (limit hit).
    bool node(bool revisit) {
        if (limit_hit()) {
            aborted = true;
            return false;
        }
        ++result.stats.nodes_visited;
        result.stats.last_node_revisit = revisit;

        if (!model.fix_point()) {
            ++result.stats.backtracks;
            val_h.on_fail(count_unassigned());
            return true;
        }
        if (model.all_bound()) {
            record_solution();
            ++result.stats.backtracks;
            if (stop_on_first) {
                found_and_stopped = true;
                return false;
            }
            return true;
        }

        const auto var = var_h(model);
        if (!var) {
            // heuristic claims all bound but model disagrees
            throw std::logic_error("variable heuristic returned none on open model");
        }
        const int value = val_h.select(model, *var, result.stats);
        if (!model.var(*var).domain().contains(value))
            throw std::invalid_argument("value heuristic returned value outside domain");

        // left: assign
        {
            const long lvl = model.trailer().save_state();
            model.assign(*var, value);
            ++result.stats.depth;
            const bool keep = node(false);
            --result.stats.depth;
            model.trailer().restore_state(lvl);
            if (!keep) return false;
        }
        // right: remove
        {
            const long lvl = model.trailer().save_state();
            model.remove(*var, value);
            ++result.stats.depth;
            const bool keep = node(true);
            --result.stats.depth;
            model.trailer().restore_state(lvl);
            if (!keep) return false;
        }
        return true;
    }

    void record_solution() {
        std::map<int, int> sol;
        for (int i = 0; i < model.num_vars(); ++i) sol[i] = model.var(i).value();
        ++result.stats.solutions_found;
        std::optional<int> obj;
        if (model.objective()) {
            obj = model.var(*model.objective()).value();
            model.set_objective_cap(*obj - 1);
        }
        result.best_solution = std::move(sol);
        result.best_objective = obj;
        result.stats.best_objective = obj;
        val_h.on_solution(obj);
    }
};

} // namespace

SearchResult dfs_solve(CPModel& model, const VariableHeuristic& var_h,
                       ValueHeuristic& val_h, const SearchLimits& limits) {
    Searcher s{model, var_h, val_h, limits};
    s.start = std::chrono::steady_clock::now();
    s.stop_on_first = !model.objective().has_value();
    s.node(false);
    s.result.wall_time = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - s.start)
                             .count();
    if (s.found_and_stopped) {
        s.result.status = SearchStatus::optimal;
    } else if (s.aborted) {
        s.result.status = SearchStatus::limit;
    } else if (s.result.best_solution) {
        s.result.status = SearchStatus::optimal;
    } else {
        s.result.status = SearchStatus::infeasible;
    }
    val_h.on_terminal(s.result.stats);
    return s.result;
}

long count_all_solutions(CPModel& model, const VariableHeuristic& var_h) {
    if (model.objective())
        throw std::invalid_argument("count_all_solutions: model has an objective");
    long count = 0;
    std::function<void()> rec = [&]() {
        if (!model.fix_point()) return;
        if (model.all_bound()) {
            ++count;
            return;
        }
        const auto var = var_h(model);
        const int value = model.var(*var).domain().min();
        long lvl = model.trailer().save_state();
        model.assign(*var, value);
        rec();
        model.trailer().restore_state(lvl);
        lvl = model.trailer().save_state();
        model.remove(*var, value);
        rec();
        model.trailer().restore_state(lvl);
    };
    rec();
    return count;
}

} // namespace cplearn
