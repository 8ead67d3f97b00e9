#include "agraph/eval.hpp"

#include <algorithm>
#include <chrono>

#include <json.hpp>

#include "agraph/graph.hpp"
#include "agraph/parallel.hpp"

namespace agraph {

std::vector<std::uint32_t> brute_force_knn(const VectorDataset& dataset,
                                           std::span<const float> query, std::uint32_t k,
                                           std::uint32_t limit) {
    if (dataset.empty()) throw UsageError("brute_force_knn: dataset is empty");
    if (k == 0) throw UsageError("brute_force_knn: k must be >= 1");
    if (query.size() != dataset.dim()) throw UsageError("brute_force_knn: dimension mismatch");

    const std::uint32_t n = std::min(limit, dataset.count());
    const std::uint32_t kk = std::min(k, n);

    thread_local std::vector<std::pair<float, std::uint32_t>> scored;
    scored.clear();
    scored.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
        scored.emplace_back(
            distance_unchecked(dataset.metric(), query.data(), dataset.row(i), dataset.dim()), i);
    std::partial_sort(scored.begin(), scored.begin() + kk, scored.end()); // (distance, id) order

    std::vector<std::uint32_t> ids(kk);
    for (std::uint32_t i = 0; i < kk; ++i) ids[i] = scored[i].second;
    return ids;
}

GoldStandard compute_gold(const VectorDataset& dataset, const VectorDataset& queries,
                          std::uint32_t k, unsigned workers) {
    if (queries.count() > 0 && queries.dim() != dataset.dim())
        throw UsageError("compute_gold: dimension mismatch");
    GoldStandard gold;
    gold.k = std::min(k, dataset.count());
    gold.lists.resize(queries.count());
    parallel_for(queries.count(), workers, [&](std::size_t i) {
        gold.lists[i] =
            brute_force_knn(dataset, queries.row_span(static_cast<std::uint32_t>(i)), k);
    });
    return gold;
}

double recall(std::span<const std::uint32_t> result, std::span<const std::uint32_t> gold,
              std::uint32_t k) {
    if (k == 0) throw UsageError("recall: k must be >= 1");
    std::vector<std::uint32_t> a(result.begin(), result.end());
    std::vector<std::uint32_t> b(gold.begin(), gold.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t hits = 0;
    auto ia = a.begin();
    for (const std::uint32_t g : b) {
        ia = std::lower_bound(ia, a.end(), g);
        if (ia == a.end()) break;
        if (*ia == g) {
            ++hits;
            ++ia;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

BenchReport run_benchmark(const SearchGraph& graph, const VectorDataset& queries,
                          const GoldStandard& gold, unsigned workers) {
    if (gold.lists.size() != queries.count())
        throw UsageError("run_benchmark: gold standard has " + std::to_string(gold.lists.size()) +
                         " lists for " + std::to_string(queries.count()) + " queries");

    BenchReport report;
    report.k = gold.k;
    report.n = graph.size();
    report.m = queries.count();
    report.config = graph.search_params();
    report.memory_bytes = graph.memory_bytes(true);
    report.memory_index_bytes = graph.memory_bytes(false);
    report.build_seconds = graph.stats().build_seconds;
    report.per_query.resize(queries.count());

    using clock = std::chrono::steady_clock;
    const auto wall_start = clock::now();
    parallel_for(queries.count(), workers, [&](std::size_t i) {
        const auto start = clock::now();
        const SearchResult res =
            graph.search(queries.row_span(static_cast<std::uint32_t>(i)), gold.k);
        const auto stop = clock::now();

        std::vector<std::uint32_t> ids;
        ids.reserve(res.items().size());
        for (const auto& e : res.items()) ids.push_back(e.id);

        PerQueryRecord& rec = report.per_query[i];
        rec.recall = recall(ids, gold.lists[i], gold.k);
        rec.visits = res.visits;
        rec.seconds = std::chrono::duration<double>(stop - start).count();
    });
    const double wall = std::chrono::duration<double>(clock::now() - wall_start).count();

    if (report.m > 0) {
        double recall_sum = 0.0, visit_sum = 0.0;
        for (const auto& rec : report.per_query) {
            recall_sum += rec.recall;
            visit_sum += static_cast<double>(rec.visits);
        }
        report.macro_recall = recall_sum / report.m;
        report.recall_defined = true;
        report.mean_visits = visit_sum / report.m;
        report.qps = wall > 0.0 ? report.m / wall : 0.0;
    }
    return report;
}

std::string report_to_json(const BenchReport& report) {
    nlohmann::json j;
    if (report.recall_defined) {
        j["macro_recall"] = report.macro_recall;
    } else {
        j["macro_recall"] = nullptr;
    }
    j["qps"] = report.qps;
    j["mean_visits"] = report.mean_visits;
    j["build_seconds"] = report.build_seconds;
    j["memory_bytes"] = report.memory_bytes;
    j["memory_index_bytes"] = report.memory_index_bytes;
    j["k"] = report.k;
    j["n"] = report.n;
    j["m"] = report.m;
    j["config"] = {{"bsize", report.config.bsize}, {"delta", report.config.delta}};
    j["per_query"] = nlohmann::json::array();
    for (const auto& rec : report.per_query)
        j["per_query"].push_back(
            {{"recall", rec.recall}, {"visits", rec.visits}, {"seconds", rec.seconds}});
    return j.dump(2);
}

} // namespace agraph
