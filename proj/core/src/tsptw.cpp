#include "cplearn/problems/tsptw.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cplearn/constraints.hpp"

namespace cplearn::tsptw {

int TSPTWInstance::dist(int i, int j) const {
    const double dx = x[i] - x[j];
    const double dy = y[i] - y[j];
    return static_cast<int>(std::lround(100.0 * std::sqrt(dx * dx + dy * dy)));
}

DPTransition::DPTransition(const TSPTWInstance& inst, std::vector<int> stages,
                           int obj)
    : Constraint([&] {
          std::vector<int> scope = stages;
          scope.push_back(obj);
          return scope;
      }()),
      inst_(&inst), stages_(std::move(stages)), obj_(obj) {}

DPTransition::Prefix DPTransition::prefix(const CPModel& m) const {
    Prefix p;
    int prev = -1;
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        const IntVar& v = m.var(stages_[i]);
        if (!v.bound()) break;
        const int c = v.value();
        if (i > 0) {
            const int arr = p.time + inst_->dist(prev, c);
            p.cost += inst_->dist(prev, c);
            p.time = std::max(arr, inst_->tw_start[c]);
            if (arr > inst_->tw_end[c]) p.valid = false;
        } else {
            p.time = std::max(0, inst_->tw_start[c]);
        }
        prev = c;
        ++p.length;
    }
    return p;
}

bool DPTransition::propagate(CPModel& m) {
    const Prefix p = prefix(m);
    if (!p.valid) return false;
    const int n = static_cast<int>(stages_.size());

    if (m.remove_below(obj_, p.cost) == ChangeEvent::empty) return false;

    if (p.length == n) {
        return m.assign(obj_, p.cost) != ChangeEvent::empty;
    }
    if (p.length == 0) return true; // nothing bound yet

    const int prev = m.var(stages_[p.length - 1]).value();
    const int next = stages_[p.length];
    const int obj_max = m.var(obj_).domain().max();
    for (int c : m.var(next).domain().values()) {
        const int leg = inst_->dist(prev, c);
        const int arrival = p.time + leg;
        const bool late = arrival > inst_->tw_end[c];
        const bool too_costly = p.cost + leg > obj_max;
        if (late || too_costly) {
            if (m.remove(next, c) == ChangeEvent::empty) return false;
        }
    }
    return true;
}

bool DPTransition::check(const std::vector<int>& a) const {
    int t = 0, cost = 0, prev = -1;
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        const int c = a[stages_[i]];
        if (i == 0) {
            t = std::max(0, inst_->tw_start[c]);
        } else {
            const int arr = t + inst_->dist(prev, c);
            if (arr > inst_->tw_end[c]) return false;
            cost += inst_->dist(prev, c);
            t = std::max(arr, inst_->tw_start[c]);
        }
        prev = c;
    }
    return a[obj_] == cost;
}

BuiltModel build_model(const TSPTWInstance& inst) {
    BuiltModel out;
    out.instance = &inst;
    out.model = std::make_unique<CPModel>();
    CPModel& m = *out.model;

    int max_leg = 0;
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.n; ++j) max_leg = std::max(max_leg, inst.dist(i, j));

    for (int i = 0; i < inst.n; ++i)
        out.stage_vars.push_back(m.make_var(0, inst.n - 1).id());
    IntVar& obj = m.make_var(0, std::max(1, max_leg * std::max(1, inst.n - 1)));
    out.objective_var = obj.id();

    m.assign(out.stage_vars[0], 0); // depot first
    for (std::size_t i = 0; i < out.stage_vars.size(); ++i)
        for (std::size_t j = i + 1; j < out.stage_vars.size(); ++j)
            m.post(std::make_unique<NotEqual>(out.stage_vars[i], out.stage_vars[j]));
    m.post(std::make_unique<DPTransition>(inst, out.stage_vars, obj.id()));
    m.set_objective(obj.id());
    return out;
}

TSPTWInstance generate(int n, double grid, int max_tw_width, unsigned seed) {
    if (n < 1) throw std::invalid_argument("generate: n < 1");
    TSPTWInstance inst;
    inst.n = n;
    inst.grid = grid;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pos(0, static_cast<int>(grid));
    for (int i = 0; i < n; ++i) {
        inst.x.push_back(pos(rng));
        inst.y.push_back(pos(rng));
    }
    inst.tw_start.assign(n, 0);
    inst.tw_end.assign(n, 0);

    // reference tour: depot then a random permutation of the rest
    std::vector<int> tour(n);
    std::iota(tour.begin(), tour.end(), 0);
    std::shuffle(tour.begin() + 1, tour.end(), rng);

    const int horizon = static_cast<int>(grid) * 200 * std::max(1, n);
    inst.tw_start[0] = 0;
    inst.tw_end[0] = horizon;
    std::uniform_int_distribution<int> width(1, std::max(1, max_tw_width));
    int t = 0;
    for (int i = 1; i < n; ++i) {
        const int c = tour[i];
        t += inst.dist(tour[i - 1], c);
        // window around the reference arrival, never forcing a wait on it
        inst.tw_start[c] = std::max(0, t - width(rng));
        inst.tw_end[c] = t + width(rng);
    }
    return inst;
}

std::optional<int> brute_force_optimal(const TSPTWInstance& inst) {
    if (inst.n > 8)
        throw std::invalid_argument("brute_force_optimal: instance too large");
    std::vector<int> perm(inst.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<int> best;
    do {
        int t = std::max(0, inst.tw_start[perm[0]]);
        int cost = 0;
        bool ok = perm[0] == 0;
        for (int i = 1; ok && i < inst.n; ++i) {
            const int arr = t + inst.dist(perm[i - 1], perm[i]);
            if (arr > inst.tw_end[perm[i]]) ok = false;
            cost += inst.dist(perm[i - 1], perm[i]);
            t = std::max(arr, inst.tw_start[perm[i]]);
        }
        if (ok && (!best || cost < *best)) best = cost;
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

std::string to_text(const TSPTWInstance& inst) {
    std::ostringstream os;
    os << inst.n << ' ' << inst.grid << '\n';
    for (int i = 0; i < inst.n; ++i)
        os << inst.x[i] << ' ' << inst.y[i] << ' ' << inst.tw_start[i] << ' '
           << inst.tw_end[i] << '\n';
    return os.str();
}

TSPTWInstance from_text(const std::string& text) {
    std::istringstream is(text);
    TSPTWInstance inst;
    if (!(is >> inst.n >> inst.grid)) throw std::runtime_error("bad TSPTW header");
    inst.x.resize(inst.n);
    inst.y.resize(inst.n);
    inst.tw_start.resize(inst.n);
    inst.tw_end.resize(inst.n);
    for (int i = 0; i < inst.n; ++i) {
        if (!(is >> inst.x[i] >> inst.y[i] >> inst.tw_start[i] >> inst.tw_end[i]))
            throw std::runtime_error("bad TSPTW city line");
    }
    return inst;
}

TSPTWInstance load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_text(ss.str());
}

void save_file(const TSPTWInstance& inst, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << to_text(inst);
}

int ClosestCityHeuristic::select(CPModel& m, int var_id,
                                 const SearchStatistics&) {
    // current city = last bound stage before this one
    const TSPTWInstance& inst = *built_->instance;
    int current = 0;
    for (int sv : built_->stage_vars) {
        if (sv == var_id) break;
        if (m.var(sv).bound()) current = m.var(sv).value();
    }
    const auto values = m.var(var_id).domain().values();
    int best = values.front();
    int best_d = inst.dist(current, best);
    for (int c : values) {
        const int d = inst.dist(current, c);
        if (d < best_d) {
            best = c;
            best_d = d;
        }
    }
    return best;
}

} // namespace cplearn::tsptw
