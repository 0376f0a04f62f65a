#pragma once

#include "cplearn/model.hpp"

namespace cplearn {

// x != y. Fires once one side is bound, then deactivates for the branch.
class NotEqual : public Constraint {
  public:
    NotEqual(int x, int y) : Constraint({x, y}), x_(x), y_(y) {}

    bool propagate(CPModel& m) override {
        const IntVar& x = m.var(x_);
        const IntVar& y = m.var(y_);
        if (x.bound()) {
            if (m.remove(y_, x.value()) == ChangeEvent::empty) return false;
            deactivate(m.trailer());
        } else if (y.bound()) {
            if (m.remove(x_, y.value()) == ChangeEvent::empty) return false;
            deactivate(m.trailer());
        }
        return true;
    }

    bool check(const std::vector<int>& a) const override {
        return a[x_] != a[y_];
    }

    std::string name() const override { return "not_equal"; }

  private:
    int x_, y_;
};

// x <= y, bound consistent.
class LessOrEqual : public Constraint {
  public:
    LessOrEqual(int x, int y) : Constraint({x, y}), x_(x), y_(y) {}

    bool propagate(CPModel& m) override {
        if (m.remove_above(x_, m.var(y_).domain().max()) == ChangeEvent::empty)
            return false;
        if (m.remove_below(y_, m.var(x_).domain().min()) == ChangeEvent::empty)
            return false;
        return true;
    }

    bool check(const std::vector<int>& a) const override {
        return a[x_] <= a[y_];
    }

    std::string name() const override { return "less_or_equal"; }

  private:
    int x_, y_;
};

} // namespace cplearn
