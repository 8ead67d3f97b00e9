#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "agraph/beam_search.hpp"
#include "agraph/config.hpp"
#include "agraph/dataset.hpp"
#include "agraph/rng.hpp"

namespace agraph {

/// Construction-time neighbor count for the i-th insertion:
/// max(1, ceil(log_b n)).
std::uint32_t neighborhood_size(std::uint64_t n, double b);

/// True exactly when ceil(log_b i) + 1 == ceil(log_b (i+1)), i.e. the next
/// insertion crosses a neighborhood-scale boundary. Search parameters and
/// hints are re-derived at these points.
bool should_reoptimize(std::uint64_t i, double b);

/// Spatial-approximation filtering of a neighbor candidate list.
/// `candidates` must be sorted ascending by distance to `center` and must
/// not contain `center` or duplicates. The first candidate is always kept;
/// each later candidate survives iff it is strictly closer to the center
/// than to every already-kept candidate. Returns a subsequence of the input.
std::vector<std::uint32_t> sat_reduce(std::uint32_t center,
                                      std::span<const std::uint32_t> candidates,
                                      const VectorDataset& dataset);

struct BuildStats {
    std::uint64_t insertions = 0;
    std::uint64_t reoptimizations = 0;
    std::uint64_t build_visits = 0;      // fitness evaluations spent on insertion searches
    std::uint64_t gold_computations = 0; // exhaustive gold standards built while tuning
    double build_seconds = 0.0;
};

/// Incrementally built navigable neighbor graph over a vector dataset.
///
/// The full dataset is ingested up front; construction indexes a growing
/// prefix of it. Each insertion searches the current graph for the new
/// element's approximate nearest neighbors, keeps the SAT-reduced subset as
/// its forward adjacency, and registers the element as a reverse neighbor
/// of everything it linked to. Searches seed from a hint set of nodes with
/// pairwise-disjoint adjacency lists; hints and search parameters are
/// refreshed on the logarithmic schedule of should_reoptimize.
///
/// Queries against a non-mutating graph are freely concurrent. Construction
/// mutates: append_batch freezes the pre-block graph for its searches and
/// serializes reverse-link writes per adjacency list. Interleaving external
/// queries with construction is supported only between batches.
class SearchGraph {
public:
    static constexpr std::uint32_t kDefaultBlockSize = 1024;

    SearchGraph(VectorDataset dataset, double log_base, std::uint64_t seed = 1);

    // --- construction -------------------------------------------------

    /// Indexes element `id`, which must be the next unindexed element.
    void insert_one(std::uint32_t id);

    /// Indexes a contiguous block of ids concurrently: all searches run
    /// against the frozen pre-block graph, then forward lists are written
    /// and reverse links appended under per-list exclusive access. The
    /// re-optimization trigger is checked once, at the end of the batch;
    /// build_all() aligns batch boundaries so no trigger falls inside one.
    void append_batch(std::span<const std::uint32_t> ids, unsigned workers);

    /// Indexes every remaining element: sequential insertion until the
    /// graph holds one block, then trigger-aligned blocks of at most
    /// block_size elements.
    void build_all(unsigned workers);

    /// Construction fitness; when unset, re-optimization events only
    /// refresh hints and the default search parameters stay in place.
    void set_optimizer(std::optional<OptimizerSettings> settings) { tuning_ = std::move(settings); }
    const std::optional<OptimizerSettings>& optimizer() const { return tuning_; }

    void set_block_size(std::uint32_t block_size);
    std::uint32_t block_size() const { return block_size_; }

    // --- queries ------------------------------------------------------

    /// k approximate nearest neighbors of `query` under the stored search
    /// parameters, ascending by distance.
    SearchResult search(std::span<const float> query, std::uint32_t k) const;

    /// Same, with explicit beam parameters (used by the tuner, which also
    /// caps maxvisits).
    SearchResult search(std::span<const float> query, std::uint32_t k,
                        const BeamParams& params) const;

    // --- accessors ----------------------------------------------------

    const VectorDataset& dataset() const { return data_; }
    double log_base() const { return log_base_; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(adjacency_.size()); }
    bool empty() const { return adjacency_.empty(); }

    std::span<const std::uint32_t> neighbors(std::uint32_t id) const {
        return {adjacency_[id].data(), adjacency_[id].size()};
    }
    const std::vector<std::vector<std::uint32_t>>& adjacency() const { return adjacency_; }
    std::span<const std::uint32_t> hints() const { return {hints_.data(), hints_.size()}; }

    Configuration search_params() const { return params_; }
    void set_search_params(const Configuration& params);

    BuildStats& stats() { return stats_; }
    const BuildStats& stats() const { return stats_; }

    Rng& rng() { return rng_; }
    void reseed(std::uint64_t seed) { rng_ = Rng::derive(seed, 0); }

    /// Mean visit count of the best configuration found by the most recent
    /// optimize call; 0 when no optimization has run. Doubled to form the
    /// next tuning visit budget.
    double prev_best_visits() const { return prev_best_visits_; }
    void set_prev_best_visits(double v) { prev_best_visits_ = v; }

    // --- hints ----------------------------------------------------------

    /// Greedy scan over a random permutation collecting up to
    /// max(1, ceil(log_b size())) nodes whose adjacency lists are pairwise
    /// disjoint. Scans at most 8x the target count of candidates and
    /// returns the (never empty) partial list if the target cannot be met.
    std::vector<std::uint32_t> select_hints();

    /// Replaces the stored hint set with a fresh selection.
    void refresh_hints();

    std::uint64_t memory_bytes(bool include_dataset) const;

    /// Reassembles a graph from its serialized parts (see io.hpp).
    static SearchGraph from_parts(VectorDataset dataset, double log_base, Configuration params,
                                  std::vector<std::vector<std::uint32_t>> adjacency,
                                  std::vector<std::uint32_t> hints);

private:
    SearchResult search_for_insert(std::uint32_t id, std::uint32_t k) const;
    void fire_event_if_due(unsigned workers);

    VectorDataset data_;
    double log_base_ = 2.0;
    std::vector<std::vector<std::uint32_t>> adjacency_;
    std::vector<std::uint32_t> hints_;
    Configuration params_{32, 1.0};
    std::optional<OptimizerSettings> tuning_;
    std::uint32_t block_size_ = kDefaultBlockSize;
    BuildStats stats_;
    Rng rng_;
    double prev_best_visits_ = 0.0;
};

} // namespace agraph
