#pragma once

#include <vector>

#include "cplearn/trailer.hpp"

namespace cplearn {

enum class ChangeEvent { unchanged, changed, bound, empty };

// Sparse-set domain over a contiguous initial range [lo, hi]. Removal swaps
// the value to the dead zone and shrinks the trailed size; restore only has
// to bring the size (and cached bounds) back, the permutation is irrelevant.
class Domain {
  public:
    Domain(Trailer& trailer, int lo, int hi)
        : trailer_(&trailer), offset_(lo),
          size_(hi - lo + 1), min_(lo), max_(hi) {
        if (hi < lo) throw std::invalid_argument("Domain: empty initial range");
        const int n = hi - lo + 1;
        values_.resize(n);
        positions_.resize(n);
        for (int i = 0; i < n; ++i) {
            values_[i] = i;
            positions_[i] = i;
        }
    }

    int size() const { return size_.value(); }
    bool empty() const { return size() == 0; }
    bool bound() const { return size() == 1; }

    int min() const { return min_.value(); }
    int max() const { return max_.value(); }

    // Bounds of the construction-time range; unaffected by removals.
    int initial_min() const { return offset_; }
    int initial_max() const { return offset_ + static_cast<int>(values_.size()) - 1; }

    // Only valid when bound.
    int value() const { return min(); }

    bool contains(int v) const {
        const int i = v - offset_;
        if (i < 0 || i >= static_cast<int>(values_.size())) return false;
        return positions_[i] < size();
    }

    ChangeEvent remove(int v) {
        if (!contains(v)) return ChangeEvent::unchanged;
        swap_out(v);
        return after_removal(v);
    }

    ChangeEvent assign(int v) {
        if (!contains(v)) {
            if (!empty()) size_.set(*trailer_, 0);
            return ChangeEvent::empty;
        }
        if (bound()) return ChangeEvent::unchanged;
        // move v to slot 0's role by shrinking around it
        const int pos = positions_[v - offset_];
        swap_positions(pos, 0);
        size_.set(*trailer_, 1);
        min_.set(*trailer_, v);
        max_.set(*trailer_, v);
        return ChangeEvent::bound;
    }

    ChangeEvent remove_above(int v) {
        if (empty()) return ChangeEvent::unchanged;
        if (v >= max()) return ChangeEvent::unchanged;
        if (v < min()) {
            size_.set(*trailer_, 0);
            return ChangeEvent::empty;
        }
        for (int w = v + 1; w <= max(); /* max shrinks */) {
            if (contains(w)) swap_out(w);
            ++w;
        }
        shrink_size_to_members(v, /*from_above=*/true);
        return size() == 1 ? ChangeEvent::bound : ChangeEvent::changed;
    }

    ChangeEvent remove_below(int v) {
        if (empty()) return ChangeEvent::unchanged;
        if (v <= min()) return ChangeEvent::unchanged;
        if (v > max()) {
            size_.set(*trailer_, 0);
            return ChangeEvent::empty;
        }
        for (int w = min(); w < v; ++w) {
            if (contains(w)) swap_out(w);
        }
        shrink_size_to_members(v, /*from_above=*/false);
        return size() == 1 ? ChangeEvent::bound : ChangeEvent::changed;
    }

    // Values currently in the domain, ascending.
    std::vector<int> values() const {
        std::vector<int> out;
        out.reserve(size());
        for (int v = min(); v <= max(); ++v)
            if (contains(v)) out.push_back(v);
        return out;
    }

  private:
    // Removes v from the live prefix without updating size bookkeeping of
    // min/max; callers fix those up.
    void swap_out(int v) {
        const int pos = positions_[v - offset_];
        const int last = size() - 1;
        swap_positions(pos, last);
        size_.set(*trailer_, last);
    }

    void swap_positions(int p, int q) {
        if (p == q) return;
        std::swap(values_[p], values_[q]);
        positions_[values_[p]] = p;
        positions_[values_[q]] = q;
    }

    ChangeEvent after_removal(int v) {
        if (empty()) return ChangeEvent::empty;
        if (v == min()) {
            int m = min() + 1;
            while (!contains(m)) ++m;
            min_.set(*trailer_, m);
        } else if (v == max()) {
            int m = max() - 1;
            while (!contains(m)) --m;
            max_.set(*trailer_, m);
        }
        return bound() ? ChangeEvent::bound : ChangeEvent::changed;
    }

    void shrink_size_to_members(int pivot, bool from_above) {
        if (from_above) {
            int m = pivot;
            while (!contains(m)) --m;
            max_.set(*trailer_, m);
            if (min() > m) min_.set(*trailer_, m);
        } else {
            int m = pivot;
            while (!contains(m)) ++m;
            min_.set(*trailer_, m);
            if (max() < m) max_.set(*trailer_, m);
        }
    }

    Trailer* trailer_;
    int offset_;
    std::vector<int> values_;   // permutation of 0..n-1 (value - offset)
    std::vector<int> positions_;
    TrailedInt size_;
    TrailedInt min_;
    TrailedInt max_;
};

} // namespace cplearn
