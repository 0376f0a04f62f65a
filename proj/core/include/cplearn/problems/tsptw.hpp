#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cplearn/model.hpp"
#include "cplearn/search.hpp"

namespace cplearn::tsptw {

// Cities 0-based, depot = city 0 with a window starting at 0.
// Travel times are Euclidean distances scaled by 100 and rounded.
struct TSPTWInstance {
    int n = 0;
    std::vector<double> x, y;        // positions on [0, grid]
    std::vector<int> tw_start, tw_end;
    double grid = 100.0;

    int dist(int i, int j) const;
};

struct BuiltModel {
    std::unique_ptr<CPModel> model;
    std::vector<int> stage_vars; // var ids; stage_vars[i] = city at position i
    int objective_var = -1;      // total travel distance (no return leg)
    const TSPTWInstance* instance = nullptr;
};

BuiltModel build_model(const TSPTWInstance& inst);

// Positions uniform on the grid; windows drawn around arrival times of a
// random reference tour, so every instance admits at least one feasible tour.
TSPTWInstance generate(int n, double grid, int max_tw_width, unsigned seed);

// Exhaustive permutation search, n <= 8. nullopt when infeasible.
std::optional<int> brute_force_optimal(const TSPTWInstance& inst);

// Text format: first line n, then n lines "x y a b".
std::string to_text(const TSPTWInstance& inst);
TSPTWInstance from_text(const std::string& text);
TSPTWInstance load_file(const std::string& path);
void save_file(const TSPTWInstance& inst, const std::string& path);

// Picks the legal city closest to the current one, ties by lowest id.
class ClosestCityHeuristic : public ValueHeuristic {
  public:
    explicit ClosestCityHeuristic(const BuiltModel& built) : built_(&built) {}
    int select(CPModel& m, int var_id, const SearchStatistics& stats) override;

  private:
    const BuiltModel* built_;
};

// Maintains arrival times along the bound prefix of the route: prunes
// next-stage cities whose earliest arrival misses their window, tightens the
// objective lower bound, and binds the objective once the route is complete.
class DPTransition : public Constraint {
  public:
    DPTransition(const TSPTWInstance& inst, std::vector<int> stages, int obj);

    bool propagate(CPModel& m) override;
    bool check(const std::vector<int>& a) const override;
    std::string name() const override { return "dp_transition"; }

    // Length of the currently bound route prefix and its arrival time/cost.
    struct Prefix {
        int length = 0;   // number of bound stages from the front
        int time = 0;     // arrival time at the last bound city
        int cost = 0;     // distance travelled so far
        bool valid = true;
    };
    Prefix prefix(const CPModel& m) const;

  private:
    const TSPTWInstance* inst_;
    std::vector<int> stages_;
    int obj_;
};

} // namespace cplearn::tsptw
