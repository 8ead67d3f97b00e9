#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "agraph/config.hpp"
#include "agraph/dataset.hpp"

namespace agraph {

class SearchGraph;

/// Exact k-nearest-neighbor answers computed by exhaustive scan.
struct GoldStandard {
    std::uint32_t k = 0;
    std::vector<std::vector<std::uint32_t>> lists; // one ascending-by-distance list per query
};

/// Exact k nearest neighbors of `query` among the first `limit` rows
/// (default: all rows), ascending by distance, ties broken by ascending id.
std::vector<std::uint32_t> brute_force_knn(
    const VectorDataset& dataset, std::span<const float> query, std::uint32_t k,
    std::uint32_t limit = std::numeric_limits<std::uint32_t>::max());

GoldStandard compute_gold(const VectorDataset& dataset, const VectorDataset& queries,
                          std::uint32_t k, unsigned workers = 1);

/// |result ∩ gold| / k with set semantics; order-insensitive.
double recall(std::span<const std::uint32_t> result, std::span<const std::uint32_t> gold,
              std::uint32_t k);

struct PerQueryRecord {
    double recall = 0.0;
    std::uint64_t visits = 0;
    double seconds = 0.0;
};

struct BenchReport {
    double macro_recall = 0.0; // mean of per-query recalls; undefined when m == 0
    bool recall_defined = false;
    double qps = 0.0;
    double mean_visits = 0.0;
    double build_seconds = 0.0;
    std::uint64_t memory_bytes = 0;       // index plus the dataset it carries
    std::uint64_t memory_index_bytes = 0; // index structures alone
    std::uint32_t k = 0;
    std::uint32_t n = 0; // indexed elements
    std::uint32_t m = 0; // queries
    Configuration config;
    std::vector<PerQueryRecord> per_query;
};

/// Times one search per query (wall clock, single worker by default) under
/// the graph's stored search parameters and scores macro-recall against the
/// gold standard.
BenchReport run_benchmark(const SearchGraph& graph, const VectorDataset& queries,
                          const GoldStandard& gold, unsigned workers = 1);

/// Fixed-schema JSON rendering: macro_recall (null when undefined), qps,
/// mean_visits, build_seconds, memory_bytes, memory_index_bytes, k, n, m,
/// config{bsize,delta}, per_query[].
std::string report_to_json(const BenchReport& report);

} // namespace agraph
