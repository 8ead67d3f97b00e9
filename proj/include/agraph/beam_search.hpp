#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "agraph/dataset.hpp"
#include "agraph/errors.hpp"
#include "agraph/pqueue.hpp"

namespace agraph {

inline constexpr std::uint64_t kNoVisitLimit = std::numeric_limits<std::uint64_t>::max();

/// Search hyper-parameters: beam capacity, the expansion factor gating beam
/// admission (fitness <= delta * max(R)), and a hard cap on distinct nodes
/// evaluated.
struct BeamParams {
    std::uint32_t bsize = 32;
    double delta = 1.0;
    std::uint64_t maxvisits = kNoVisitLimit;
};

/// Membership record over node ids, reused across searches via an epoch
/// stamp so repeated queries do not pay a clear().
class VisitedSet {
public:
    /// Starts a fresh membership epoch covering ids in [0, universe).
    /// The set still grows on demand if larger ids are inserted later.
    void begin(std::size_t universe) {
        if (universe > stamp_.size()) stamp_.resize(universe, 0);
        if (++epoch_ == 0) { // stamp wrap-around: reset and restart epochs
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        count_ = 0;
    }

    bool contains(std::uint32_t id) const {
        return id < stamp_.size() && stamp_[id] == epoch_;
    }

    /// Marks id; returns false when it was already present.
    bool insert(std::uint32_t id) {
        if (id >= stamp_.size()) stamp_.resize(static_cast<std::size_t>(id) + 1, 0);
        if (stamp_[id] == epoch_) return false;
        stamp_[id] = epoch_;
        ++count_;
        return true;
    }

    std::uint64_t size() const { return count_; }

private:
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::uint64_t count_ = 0;
};

/// Result set plus the number of fitness evaluations the search performed.
struct SearchResult {
    BoundedResultSet neighbors;
    std::uint64_t visits = 0;

    std::span<const BoundedResultSet::Entry> items() const { return neighbors.items(); }
};

/// Best-first beam search minimizing `fitness` over an implicit graph.
///
/// Seeds are evaluated, marked visited, and pushed into the result set R
/// (capacity k); the beam B (capacity params.bsize) starts from the best
/// seed. Each round pops the beam minimum and scores its unvisited
/// neighbors: every scored node is offered to R, the search stops as soon
/// as params.maxvisits distinct nodes have been scored, and a node joins
/// the beam only when its fitness is at most delta * max(R). Runs until the
/// beam drains. Deterministic given the seed order and the neighbor
/// iteration order.
///
/// `fitness(id)` returns a finite non-negative score. `neighbors_of(id,
/// beam_live)` returns an iterable of candidate ids; beam_live exposes the
/// beam's current content for callers whose neighborhoods are generated
/// relative to it (the configuration tuner), and is ignored by graph
/// adjacency adapters.
template <class Fitness, class Neighbors>
SearchResult beam_search(Fitness&& fitness, Neighbors&& neighbors_of,
                         std::span<const std::uint32_t> seeds, std::uint32_t k,
                         const BeamParams& params, VisitedSet& visited) {
    if (seeds.empty()) throw UsageError("beam_search: seeds must be non-empty");
    if (k == 0) throw UsageError("beam_search: k must be >= 1");
    if (params.bsize == 0) throw UsageError("beam_search: bsize must be >= 1");
    if (params.maxvisits == 0) throw UsageError("beam_search: maxvisits must be >= 1");

    SearchResult out;
    out.neighbors.reset(k);
    BoundedResultSet& result = out.neighbors;
    BoundedResultSet beam(params.bsize);

    for (const std::uint32_t s : seeds) {
        if (!visited.insert(s)) continue;
        result.push(static_cast<float>(fitness(s)), s);
        if (++out.visits >= params.maxvisits) return out;
    }

    beam.push(result.minimum(), result.argmin());
    while (!beam.empty()) {
        const BoundedResultSet::Entry best = beam.popmin();
        for (const std::uint32_t c : neighbors_of(best.id, beam.items())) {
            if (!visited.insert(c)) continue;
            const float fc = static_cast<float>(fitness(c));
            result.push(fc, c);
            if (++out.visits >= params.maxvisits) return out;
            if (static_cast<double>(fc) <= params.delta * result.maximum()) beam.push(fc, c);
        }
    }
    return out;
}

/// Fitness closure for k-nearest-neighbor queries: the distance from a fixed
/// query to a dataset row.
class KnnFitness {
public:
    KnnFitness(const VectorDataset& dataset, std::span<const float> query)
        : dataset_(&dataset), query_(query.data()) {
        if (query.size() != dataset.dim())
            throw UsageError("knn fitness: query dimension " + std::to_string(query.size()) +
                             " does not match dataset dimension " + std::to_string(dataset.dim()));
    }

    float operator()(std::uint32_t id) const {
        return distance_unchecked(dataset_->metric(), query_, dataset_->row(id), dataset_->dim());
    }

private:
    const VectorDataset* dataset_;
    const float* query_;
};

} // namespace agraph
