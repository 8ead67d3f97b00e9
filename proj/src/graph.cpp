#include "agraph/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numeric>

#include "agraph/autotune.hpp"
#include "agraph/parallel.hpp"

namespace agraph {

namespace {

// ceil(log_b n) with a guard so exact powers (log ratio lands on an
// integer) do not round up from representation noise.
std::uint64_t ceil_log(std::uint64_t n, double b) {
    if (n <= 1) return 0;
    const double r = std::log(static_cast<double>(n)) / std::log(b);
    return static_cast<std::uint64_t>(std::ceil(r - 1e-9));
}

thread_local VisitedSet tls_visited;

} // namespace

std::uint32_t neighborhood_size(std::uint64_t n, double b) {
    if (n < 1) throw UsageError("neighborhood_size: n must be >= 1");
    if (b <= 1.0) throw UsageError("neighborhood_size: b must be > 1");
    return static_cast<std::uint32_t>(std::max<std::uint64_t>(1, ceil_log(n, b)));
}

bool should_reoptimize(std::uint64_t i, double b) {
    if (i < 1) throw UsageError("should_reoptimize: i must be >= 1");
    return ceil_log(i, b) + 1 == ceil_log(i + 1, b);
}

std::vector<std::uint32_t> sat_reduce(std::uint32_t center,
                                      std::span<const std::uint32_t> candidates,
                                      const VectorDataset& dataset) {
    std::vector<std::uint32_t> kept;
    if (candidates.empty()) return kept;
    kept.reserve(candidates.size());

    const MetricKind metric = dataset.metric();
    const std::uint32_t dim = dataset.dim();
    const float* center_row = dataset.row(center);

    float prev = 0.0f;
    for (const std::uint32_t x : candidates) {
        if (x == center) throw UsageError("sat_reduce: center appears in candidates");
        const float to_center = distance_unchecked(metric, center_row, dataset.row(x), dim);
        if (to_center < prev)
            throw UsageError("sat_reduce: candidates are not sorted by distance to center");
        prev = to_center;

        bool covered = false;
        const float* x_row = dataset.row(x);
        for (const std::uint32_t v : kept) {
            if (distance_unchecked(metric, dataset.row(v), x_row, dim) <= to_center) {
                covered = true;
                break;
            }
        }
        if (!covered) kept.push_back(x);
    }
    return kept;
}

SearchGraph::SearchGraph(VectorDataset dataset, double log_base, std::uint64_t seed)
    : data_(std::move(dataset)), log_base_(log_base), rng_(Rng::derive(seed, 0)) {
    if (!(log_base > 1.0) || !(log_base <= 2.0))
        throw UsageError("SearchGraph: log base must be in (1, 2]");
}

void SearchGraph::set_block_size(std::uint32_t block_size) {
    if (block_size == 0) throw UsageError("SearchGraph: block size must be >= 1");
    block_size_ = block_size;
}

void SearchGraph::set_search_params(const Configuration& params) {
    if (!params.in_bounds()) throw UsageError("SearchGraph: configuration out of bounds");
    params_ = params;
}

SearchResult SearchGraph::search_for_insert(std::uint32_t id, std::uint32_t k) const {
    KnnFitness fitness(data_, data_.row_span(id));
    tls_visited.begin(size());
    const BeamParams params{params_.bsize, params_.delta, size()};
    return beam_search(
        fitness,
        [this](std::uint32_t u, std::span<const BoundedResultSet::Entry>) { return neighbors(u); },
        hints(), k, params, tls_visited);
}

void SearchGraph::insert_one(std::uint32_t id) {
    if (id != size())
        throw UsageError("insert_one: id " + std::to_string(id) + " is out of order, expected " +
                         std::to_string(size()));
    if (id >= data_.count()) throw UsageError("insert_one: id beyond dataset");

    if (id == 0) {
        adjacency_.emplace_back();
        hints_.assign(1, 0);
        ++stats_.insertions;
        return;
    }

    const std::uint32_t k = neighborhood_size(id, log_base_);
    const SearchResult found = search_for_insert(id, k);
    stats_.build_visits += found.visits;

    std::vector<std::uint32_t> candidates;
    candidates.reserve(found.items().size());
    for (const auto& e : found.items()) candidates.push_back(e.id);

    std::vector<std::uint32_t> reduced = sat_reduce(id, candidates, data_);
    for (const std::uint32_t v : reduced) adjacency_[v].push_back(id);
    adjacency_.push_back(std::move(reduced));
    ++stats_.insertions;

    fire_event_if_due(1);
}

void SearchGraph::append_batch(std::span<const std::uint32_t> ids, unsigned workers) {
    if (ids.empty()) return;
    const std::uint32_t base = size();
    for (std::size_t j = 0; j < ids.size(); ++j)
        if (ids[j] != base + j)
            throw UsageError("append_batch: ids must be contiguous from " + std::to_string(base));
    if (base + ids.size() > data_.count()) throw UsageError("append_batch: ids beyond dataset");
    if (ids.size() > block_size_)
        throw UsageError("append_batch: batch larger than block size");
    if (base == 0) {
        // A graph below one block is built sequentially.
        for (const std::uint32_t id : ids) insert_one(id);
        return;
    }

    // Phase 1: search + SAT-reduce every element against the frozen
    // pre-block graph. Elements in the same block do not see each other.
    std::vector<std::vector<std::uint32_t>> reduced(ids.size());
    std::vector<std::uint64_t> visits(ids.size(), 0);
    parallel_for(ids.size(), workers, [&](std::size_t j) {
        const std::uint32_t id = ids[j];
        const SearchResult found = search_for_insert(id, neighborhood_size(id, log_base_));
        visits[j] = found.visits;
        std::vector<std::uint32_t> candidates;
        candidates.reserve(found.items().size());
        for (const auto& e : found.items()) candidates.push_back(e.id);
        reduced[j] = sat_reduce(id, candidates, data_);
    });

    // Phase 2: write forward lists, then append reverse links under
    // per-list exclusive access (striped locks).
    adjacency_.resize(base + ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j) adjacency_[ids[j]] = std::move(reduced[j]);

    constexpr std::size_t kLockStripes = 256;
    std::array<std::mutex, kLockStripes> locks;
    parallel_for(ids.size(), workers, [&](std::size_t j) {
        const std::uint32_t id = ids[j];
        for (const std::uint32_t v : adjacency_[id]) {
            std::scoped_lock guard(locks[v % kLockStripes]);
            adjacency_[v].push_back(id);
        }
    });

    stats_.insertions += ids.size();
    stats_.build_visits += std::accumulate(visits.begin(), visits.end(), std::uint64_t{0});

    fire_event_if_due(workers);
}

void SearchGraph::build_all(unsigned workers) {
    const std::uint32_t n = data_.count();
    while (size() < n) {
        if (size() < block_size_) {
            insert_one(size());
            continue;
        }
        // Stop the next block at the first re-optimization boundary so
        // trigger points never fall inside a batch.
        const std::uint32_t begin = size();
        std::uint32_t end = std::min(n, begin + block_size_);
        for (std::uint32_t c = begin + 1; c <= end; ++c) {
            if (should_reoptimize(c - 1, log_base_)) {
                end = c;
                break;
            }
        }
        std::vector<std::uint32_t> ids(end - begin);
        std::iota(ids.begin(), ids.end(), begin);
        append_batch(ids, workers);
    }
}

void SearchGraph::fire_event_if_due(unsigned workers) {
    const std::uint32_t count = size();
    if (count < 2 || !should_reoptimize(count - 1, log_base_)) return;
    if (tuning_) optimize(*this, *tuning_, workers);
    refresh_hints();
    ++stats_.reoptimizations;
}

std::vector<std::uint32_t> SearchGraph::select_hints() {
    if (empty()) throw UsageError("select_hints: graph is empty");
    const std::uint32_t n = size();
    const std::uint32_t target = neighborhood_size(n, log_base_);
    const std::uint64_t budget = std::min<std::uint64_t>(n, 8ull * target);

    // Partial Fisher-Yates: lazily draw `budget` distinct candidates.
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    std::vector<std::uint32_t> picked;
    std::vector<bool> used(n, false); // union of accepted adjacency lists
    for (std::uint64_t t = 0; t < budget && picked.size() < target; ++t) {
        const std::uint64_t other = t + rng_.uniform_int(n - t);
        std::swap(perm[t], perm[other]);
        const std::uint32_t cand = perm[t];

        bool disjoint = true;
        for (const std::uint32_t v : adjacency_[cand]) {
            if (used[v]) {
                disjoint = false;
                break;
            }
        }
        if (!disjoint) continue;
        for (const std::uint32_t v : adjacency_[cand]) used[v] = true;
        picked.push_back(cand);
    }
    if (picked.empty()) picked.push_back(perm[0]); // never empty
    return picked;
}

void SearchGraph::refresh_hints() { hints_ = select_hints(); }

SearchResult SearchGraph::search(std::span<const float> query, std::uint32_t k) const {
    return search(query, k, BeamParams{params_.bsize, params_.delta, size()});
}

SearchResult SearchGraph::search(std::span<const float> query, std::uint32_t k,
                                 const BeamParams& params) const {
    if (empty()) throw UsageError("search: graph is empty");
    KnnFitness fitness(data_, query);
    tls_visited.begin(size());
    return beam_search(
        fitness,
        [this](std::uint32_t u, std::span<const BoundedResultSet::Entry>) { return neighbors(u); },
        hints(), k, params, tls_visited);
}

std::uint64_t SearchGraph::memory_bytes(bool include_dataset) const {
    std::uint64_t total = 0;
    for (const auto& list : adjacency_) total += list.size() * sizeof(std::uint32_t);
    total += (adjacency_.size() + 1) * sizeof(std::uint64_t); // CSR offsets on disk
    total += hints_.size() * sizeof(std::uint32_t);
    if (include_dataset) total += data_.memory_bytes();
    return total;
}

SearchGraph SearchGraph::from_parts(VectorDataset dataset, double log_base, Configuration params,
                                    std::vector<std::vector<std::uint32_t>> adjacency,
                                    std::vector<std::uint32_t> hints) {
    SearchGraph g(std::move(dataset), log_base);
    if (adjacency.size() != g.data_.count())
        throw DataError("graph parts: adjacency count does not match dataset count");
    const std::uint32_t n = static_cast<std::uint32_t>(adjacency.size());
    for (std::uint32_t u = 0; u < n; ++u)
        for (const std::uint32_t v : adjacency[u])
            if (v >= n || v == u)
                throw DataError("graph parts: invalid neighbor id in list " + std::to_string(u));
    if (n > 0 && hints.empty()) throw DataError("graph parts: non-empty graph requires hints");
    for (const std::uint32_t h : hints)
        if (h >= n) throw DataError("graph parts: hint id out of range");
    g.set_search_params(params);
    g.adjacency_ = std::move(adjacency);
    g.hints_ = std::move(hints);
    g.stats_.insertions = n;
    return g;
}

} // namespace agraph
