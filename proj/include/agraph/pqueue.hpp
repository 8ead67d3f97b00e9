#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "agraph/errors.hpp"

namespace agraph {

/// Size-bounded min-max priority queue of (score, id) pairs. Backs both the
/// result set and the beam of a search.
///
/// Layout is a single array kept sorted ascending by score plus a floating
/// front pointer for popped minima, so minimum/maximum/argmin are O(1) and
/// popmin/popmax are O(1). Insertions shift (insertion sort); equal scores
/// keep first-inserted-first order. A push is accepted iff the score does
/// not exceed the current maximum or the queue is not full; an accepted push
/// into a full queue evicts the current maximum first, so the live size
/// never exceeds the capacity. Duplicate ids are not detected here; callers
/// (the search's visited set) are responsible for preventing them.
class BoundedResultSet {
public:
    struct Entry {
        float score;
        std::uint32_t id;
    };

    BoundedResultSet() = default;

    explicit BoundedResultSet(std::uint32_t capacity) { reset(capacity); }

    void reset(std::uint32_t capacity) {
        if (capacity == 0) throw UsageError("BoundedResultSet: capacity must be >= 1");
        capacity_ = capacity;
        front_ = 0;
        items_.clear();
        items_.reserve(static_cast<std::size_t>(capacity) + 1);
    }

    std::uint32_t capacity() const { return capacity_; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(items_.size()) - front_; }
    bool empty() const { return size() == 0; }
    bool full() const { return size() == capacity_; }

    bool push(float score, std::uint32_t id) {
        if (full()) {
            if (score > maximum()) return false; // fast reject, no shifting
            items_.pop_back();
        }
        const auto live_begin = items_.begin() + front_;
        const auto pos = std::upper_bound(
            live_begin, items_.end(), score,
            [](float s, const Entry& e) { return s < e.score; });
        items_.insert(pos, Entry{score, id});
        return true;
    }

    Entry popmin() {
        require_nonempty("popmin");
        return items_[front_++];
    }

    Entry popmax() {
        require_nonempty("popmax");
        const Entry e = items_.back();
        items_.pop_back();
        return e;
    }

    float minimum() const {
        require_nonempty("minimum");
        return items_[front_].score;
    }

    float maximum() const {
        require_nonempty("maximum");
        return items_.back().score;
    }

    std::uint32_t argmin() const {
        require_nonempty("argmin");
        return items_[front_].id;
    }

    /// Distance to the current worst kept item when the set is full;
    /// unbounded (+inf) while it still has room.
    float covering_radius() const {
        return full() ? maximum() : std::numeric_limits<float>::infinity();
    }

    /// Live entries, ascending by score.
    std::span<const Entry> items() const { return {items_.data() + front_, size()}; }

    void clear() {
        front_ = 0;
        items_.clear();
    }

private:
    void require_nonempty(const char* op) const {
        if (empty()) throw UsageError(std::string("BoundedResultSet::") + op + " on empty set");
    }

    std::vector<Entry> items_;
    std::uint32_t front_ = 0;
    std::uint32_t capacity_ = 0;
};

} // namespace agraph
