#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "agraph/config.hpp"
#include "agraph/rng.hpp"

namespace agraph {

class SearchGraph;

/// Workload a configuration is scored against: a sample Q of indexed
/// elements, their exact nearest neighbors (recall-based targets only), and
/// the visit budget capping each scoring search.
struct TuningContext {
    std::vector<std::uint32_t> queries;
    std::vector<std::vector<std::uint32_t>> gold; // one list per query; empty for ParetoRadius
    std::uint64_t maxvisits = 1;
    double max_radius_estimate = 0.0; // set by the first ParetoRadius evaluation
    std::uint32_t k = 32;
};

/// Samples queries uniformly without replacement from the indexed elements,
/// computes their gold standard when the target needs recall, and derives
/// the visit budget: twice the mean visits of the previously best
/// configuration, or max(1000, ceil(ln(n)^3)) before any optimization ran.
TuningContext make_tuning_context(SearchGraph& graph, const OptimizerSettings& settings,
                                  Rng& rng, unsigned workers = 1);

struct TuningQueryStat {
    std::uint64_t visits = 0;
    double recall = 0.0;
    double radius = 0.0; // largest kept distance; under-filled sets report their largest observed
};

/// Runs one capped search per context query under `config` and reports the
/// per-query statistics the objective formulas consume.
std::vector<TuningQueryStat> run_tuning_queries(const Configuration& config,
                                                const SearchGraph& graph,
                                                const TuningContext& ctx,
                                                unsigned workers = 1);

// Objective formulas, separated from the measurement step.
double pareto_recall_objective(double mean_visits, std::uint64_t maxvisits, double recall);
double pareto_radius_objective(double mean_visits, std::uint64_t maxvisits, double avg_radius,
                               double max_radius);
double min_recall_objective(double mean_visits, std::uint64_t maxvisits, double recall,
                            double min_recall);

double eval_pareto_recall(const Configuration& config, const SearchGraph& graph,
                          TuningContext& ctx, unsigned workers = 1);
/// The first evaluation of an optimization procedure fixes
/// ctx.max_radius_estimate and scores its radius term as exactly 1.
double eval_pareto_radius(const Configuration& config, const SearchGraph& graph,
                          TuningContext& ctx, unsigned workers = 1);
double eval_min_recall(const Configuration& config, const SearchGraph& graph, TuningContext& ctx,
                       const OptimizerSettings& settings, unsigned workers = 1);

/// Uniform draw from the rand grids (bsize in {8,...,64} step 8, delta in
/// {0.8, 0.9, 1.0, 1.1}).
Configuration rand_config(const OptimizerSettings& settings, Rng& rng);

/// Scales each coordinate by its factor with probability p, divides
/// otherwise; bsize rounds up and both coordinates clamp into bounds.
Configuration mutate(const Configuration& config, const OptimizerSettings& settings, Rng& rng);

/// Coordinate-wise mean of two configurations, bsize rounded up.
Configuration crossover(const Configuration& a, const Configuration& b);

/// gamma mutations of `config` plus delta_count crossovers of uniformly
/// chosen pairs from `beam`. May repeat configurations already seen; the
/// caller's visited set filters those.
std::vector<Configuration> config_neighborhood(const Configuration& config,
                                               std::span<const Configuration> beam,
                                               const OptimizerSettings& settings, Rng& rng);

/// Beam search over the configuration space driven by the selected fitness.
/// Installs the winning configuration as the graph's search parameters,
/// records its mean visit count for the next visit budget, and returns it.
Configuration optimize(SearchGraph& graph, const OptimizerSettings& settings,
                       unsigned workers = 1);

} // namespace agraph
