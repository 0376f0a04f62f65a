#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cplearn/domain.hpp"
#include "cplearn/trailer.hpp"

namespace cplearn {

class CPModel;

class IntVar {
  public:
    IntVar(int id, Trailer& trailer, int lo, int hi)
        : id_(id), domain_(trailer, lo, hi) {}

    int id() const { return id_; }
    Domain& domain() { return domain_; }
    const Domain& domain() const { return domain_; }
    bool bound() const { return domain_.bound(); }
    int value() const { return domain_.value(); }

    const std::vector<int>& watchers() const { return watchers_; }
    void add_watcher(int constraint_id) { watchers_.push_back(constraint_id); }

  private:
    int id_;
    Domain domain_;
    std::vector<int> watchers_;
};

class Constraint {
  public:
    explicit Constraint(std::vector<int> scope)
        : scope_(std::move(scope)), active_(1) {}
    virtual ~Constraint() = default;

    // Filters domains; returns false iff a domain emptied.
    virtual bool propagate(CPModel& model) = 0;

    // Direct feasibility check on a complete assignment (var id -> value),
    // independent of the propagation path.
    virtual bool check(const std::vector<int>& assignment) const = 0;

    virtual std::string name() const = 0;

    const std::vector<int>& scope() const { return scope_; }
    int arity() const { return static_cast<int>(scope_.size()); }

    bool active() const { return active_.value() != 0; }
    void deactivate(Trailer& t) { active_.set(t, 0); }

    int id() const { return id_; }
    void set_id(int id) { id_ = id; }

  private:
    std::vector<int> scope_;
    TrailedInt active_;
    int id_ = -1;
};

// The tuple of variables, domains, constraints and optional objective,
// plus the propagation queue.
class CPModel {
  public:
    CPModel() = default;
    CPModel(const CPModel&) = delete;
    CPModel& operator=(const CPModel&) = delete;

    Trailer& trailer() { return trailer_; }

    IntVar& make_var(int lo, int hi) {
        const int id = static_cast<int>(vars_.size());
        vars_.push_back(std::make_unique<IntVar>(id, trailer_, lo, hi));
        return *vars_.back();
    }

    int post(std::unique_ptr<Constraint> c) {
        const int id = static_cast<int>(constraints_.size());
        c->set_id(id);
        for (int v : c->scope()) vars_.at(v)->add_watcher(id);
        constraints_.push_back(std::move(c));
        in_queue_.push_back(0);
        schedule(id);
        return id;
    }

    int num_vars() const { return static_cast<int>(vars_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }
    IntVar& var(int id) { return *vars_.at(id); }
    const IntVar& var(int id) const { return *vars_.at(id); }
    Constraint& constraint(int id) { return *constraints_.at(id); }
    const Constraint& constraint(int id) const { return *constraints_.at(id); }

    void set_objective(int var_id) { objective_ = var_id; }
    std::optional<int> objective() const { return objective_; }
    void set_objective_cap(int cap) { objective_cap_ = cap; }
    std::optional<int> objective_cap() const { return objective_cap_; }

    // Domain mutations; watchers are scheduled on any change.
    ChangeEvent remove(int var_id, int v) {
        return notify(var_id, vars_.at(var_id)->domain().remove(v));
    }
    ChangeEvent assign(int var_id, int v) {
        return notify(var_id, vars_.at(var_id)->domain().assign(v));
    }
    ChangeEvent remove_above(int var_id, int v) {
        return notify(var_id, vars_.at(var_id)->domain().remove_above(v));
    }
    ChangeEvent remove_below(int var_id, int v) {
        return notify(var_id, vars_.at(var_id)->domain().remove_below(v));
    }

    void schedule(int constraint_id) {
        if (in_queue_[constraint_id]) return;
        in_queue_[constraint_id] = 1;
        queue_.push_back(constraint_id);
    }

    // Propagates to quiescence. On failure the queue is cleared and false
    // is returned.
    bool fix_point() {
        if (objective_ && objective_cap_) {
            if (remove_above(*objective_, *objective_cap_) == ChangeEvent::empty) {
                clear_queue();
                return false;
            }
        }
        while (!queue_.empty()) {
            const int cid = queue_.front();
            queue_.pop_front();
            in_queue_[cid] = 0;
            Constraint& c = *constraints_[cid];
            if (!c.active()) continue;
            if (!c.propagate(*this)) {
                clear_queue();
                return false;
            }
        }
        return true;
    }

    bool all_bound() const {
        for (const auto& v : vars_)
            if (!v->bound()) return false;
        return true;
    }

    std::vector<int> current_assignment() const {
        std::vector<int> a(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i)
            a[i] = vars_[i]->bound() ? vars_[i]->value() : INT_UNBOUND;
        return a;
    }

    // Direct check of a complete assignment against every constraint.
    bool check_assignment(const std::vector<int>& assignment) const {
        for (const auto& c : constraints_)
            if (!c->check(assignment)) return false;
        return true;
    }

    static constexpr int INT_UNBOUND = INT32_MIN;

  private:
    ChangeEvent notify(int var_id, ChangeEvent ev) {
        if (ev == ChangeEvent::changed || ev == ChangeEvent::bound) {
            for (int cid : vars_[var_id]->watchers()) schedule(cid);
        }
        return ev;
    }

    void clear_queue() {
        for (int cid : queue_) in_queue_[cid] = 0;
        queue_.clear();
    }

    Trailer trailer_;
    std::vector<std::unique_ptr<IntVar>> vars_;
    std::vector<std::unique_ptr<Constraint>> constraints_;
    std::optional<int> objective_;
    std::optional<int> objective_cap_;
    std::deque<int> queue_;
    std::vector<char> in_queue_;
};

} // namespace cplearn
