#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cplearn {

// Backtrackable storage. Mutations of trailed cells record their previous
// value; restoring a level rewinds every cell written since the matching save.
// Levels nest strictly (LIFO).
class Trailer {
  public:
    // Returns a monotonically increasing level id.
    long save_state() {
        levels_.push_back({next_level_id_, trail_.size()});
        ++magic_;
        return next_level_id_++;
    }

    // Rewinds to the state at the time save_state returned `level`.
    void restore_state(long level) {
        auto it = levels_.rbegin();
        bool found = false;
        for (; it != levels_.rend(); ++it) {
            if (it->id == level) { found = true; break; }
        }
        if (!found)
            throw std::invalid_argument("restore_state: unknown or released level");
        while (!levels_.empty()) {
            const Level top = levels_.back();
            levels_.pop_back();
            rewind_to(top.mark);
            if (top.id == level) break;
        }
        ++magic_;
    }

    // Pops the innermost level.
    void restore_top() {
        if (levels_.empty())
            throw std::logic_error("restore_top: no saved level");
        restore_state(levels_.back().id);
    }

    void push(int* cell, int old_value) { trail_.push_back({cell, old_value}); }

    long magic() const { return magic_; }
    std::size_t depth() const { return levels_.size(); }

  private:
    struct Entry {
        int* cell;
        int old_value;
    };
    struct Level {
        long id;
        std::size_t mark;
    };

    void rewind_to(std::size_t mark) {
        while (trail_.size() > mark) {
            const Entry& e = trail_.back();
            *e.cell = e.old_value;
            trail_.pop_back();
        }
    }

    std::vector<Entry> trail_;
    std::vector<Level> levels_;
    long next_level_id_ = 0;
    long magic_ = 0;
};

// An int whose mutations are undone on restore. Writes are trailed at most
// once per level (magic check).
class TrailedInt {
  public:
    explicit TrailedInt(int v = 0) : value_(v) {}

    int value() const { return value_; }

    void set(Trailer& t, int v) {
        if (v == value_) return;
        if (magic_ != t.magic()) {
            t.push(&value_, value_);
            magic_ = t.magic();
        }
        value_ = v;
    }

  private:
    int value_;
    long magic_ = -1;
};

} // namespace cplearn
