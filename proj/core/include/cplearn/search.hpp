#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "cplearn/model.hpp"

namespace cplearn {

struct SearchStatistics {
    long nodes_visited = 0;
    long backtracks = 0;
    long solutions_found = 0;
    int depth = 0;
    std::optional<int> best_objective;
    bool last_node_revisit = false;
};

enum class SearchStatus { optimal, infeasible, limit };

struct SearchResult {
    SearchStatus status = SearchStatus::infeasible;
    std::optional<std::map<int, int>> best_solution; // var id -> value
    std::optional<int> best_objective;
    SearchStatistics stats;
    double wall_time = 0.0;
};

struct SearchLimits {
    std::optional<long> node_limit;
    std::optional<double> time_limit_s;
};

// Picks the next variable to branch on, or nullopt when all are bound.
using VariableHeuristic = std::function<std::optional<int>(CPModel&)>;

// Value selection with optional episode hooks for learning heuristics.
class ValueHeuristic {
  public:
    virtual ~ValueHeuristic() = default;

    // Must return a value in the variable's current domain.
    virtual int select(CPModel& model, int var_id, const SearchStatistics& stats) = 0;

    virtual void on_fail(int unassigned_vars) { (void)unassigned_vars; }
    virtual void on_solution(std::optional<int> objective) { (void)objective; }
    virtual void on_terminal(const SearchStatistics& stats) { (void)stats; }
};

class MinValueHeuristic : public ValueHeuristic {
  public:
    int select(CPModel& m, int var_id, const SearchStatistics&) override {
        return m.var(var_id).domain().min();
    }
};

class RandomValueHeuristic : public ValueHeuristic {
  public:
    explicit RandomValueHeuristic(unsigned seed) : rng_(seed) {}
    int select(CPModel& m, int var_id, const SearchStatistics&) override {
        const auto values = m.var(var_id).domain().values();
        std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
        return values[pick(rng_)];
    }

  private:
    std::mt19937 rng_;
};

// Smallest current domain, ties by lowest variable id.
std::optional<int> select_variable_min_domain(CPModel& model);

// First unbound variable in id order (fixed ordering).
std::optional<int> select_variable_first_unbound(CPModel& model);

VariableHeuristic min_domain_heuristic();
VariableHeuristic first_unbound_heuristic();

// Depth-first branch and bound. On each improving solution with objective z,
// the cap objective <= z - 1 is posted globally and the search continues.
SearchResult dfs_solve(CPModel& model, const VariableHeuristic& var_h,
                       ValueHeuristic& val_h, const SearchLimits& limits = {});

// Exhaustive DFS counting satisfying assignments; requires no objective.
long count_all_solutions(CPModel& model, const VariableHeuristic& var_h);

} // namespace cplearn
