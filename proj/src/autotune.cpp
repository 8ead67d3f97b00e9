#include "agraph/autotune.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <utility>

#include "agraph/beam_search.hpp"
#include "agraph/eval.hpp"
#include "agraph/graph.hpp"
#include "agraph/parallel.hpp"

namespace agraph {

const char* to_string(FitnessKind kind) {
    switch (kind) {
    case FitnessKind::ParetoRecall: return "pareto-recall";
    case FitnessKind::ParetoRadius: return "pareto-radius";
    case FitnessKind::MinRecall: return "min-recall";
    }
    return "unknown";
}

TuningContext make_tuning_context(SearchGraph& graph, const OptimizerSettings& settings,
                                  Rng& rng, unsigned workers) {
    if (graph.empty()) throw UsageError("tuning context: graph is empty");
    const std::uint32_t n = graph.size();

    TuningContext ctx;
    ctx.k = std::min(settings.k, n);

    // Uniform sample without replacement (partial Fisher-Yates).
    const std::uint32_t q = std::min(settings.tuning_query_count, n);
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    ctx.queries.reserve(q);
    for (std::uint32_t t = 0; t < q; ++t) {
        const std::uint64_t other = t + rng.uniform_int(n - t);
        std::swap(perm[t], perm[other]);
        ctx.queries.push_back(perm[t]);
    }

    if (settings.target != FitnessKind::ParetoRadius) {
        // Exhaustive gold standard over the currently indexed prefix. The
        // queried element is indexed, so it belongs to its own gold list.
        ctx.gold.resize(ctx.queries.size());
        const auto& data = graph.dataset();
        parallel_for(ctx.queries.size(), workers, [&](std::size_t i) {
            ctx.gold[i] = brute_force_knn(data, data.row_span(ctx.queries[i]), ctx.k, n);
        });
        ++graph.stats().gold_computations;
    }

    const double prev = graph.prev_best_visits();
    if (prev > 0.0) {
        ctx.maxvisits = static_cast<std::uint64_t>(std::ceil(2.0 * prev));
    } else {
        const double ln = std::log(static_cast<double>(n));
        ctx.maxvisits =
            std::max<std::uint64_t>(1000, static_cast<std::uint64_t>(std::ceil(ln * ln * ln)));
    }
    ctx.maxvisits = std::max<std::uint64_t>(1, ctx.maxvisits);
    return ctx;
}

std::vector<TuningQueryStat> run_tuning_queries(const Configuration& config,
                                                const SearchGraph& graph,
                                                const TuningContext& ctx, unsigned workers) {
    std::vector<TuningQueryStat> stats(ctx.queries.size());
    const BeamParams params{config.bsize, config.delta, ctx.maxvisits};
    parallel_for(ctx.queries.size(), workers, [&](std::size_t i) {
        const auto query = graph.dataset().row_span(ctx.queries[i]);
        const SearchResult res = graph.search(query, ctx.k, params);
        TuningQueryStat& st = stats[i];
        st.visits = res.visits;
        st.radius = res.neighbors.empty() ? 0.0 : res.neighbors.maximum();
        if (!ctx.gold.empty()) {
            std::vector<std::uint32_t> ids;
            ids.reserve(res.items().size());
            for (const auto& e : res.items()) ids.push_back(e.id);
            st.recall = recall(ids, ctx.gold[i], ctx.k);
        }
    });
    return stats;
}

double pareto_recall_objective(double mean_visits, std::uint64_t maxvisits, double recall) {
    const double cost = mean_visits / static_cast<double>(maxvisits);
    const double err = 1.0 - recall;
    return cost * cost + err * err;
}

double pareto_radius_objective(double mean_visits, std::uint64_t maxvisits, double avg_radius,
                               double max_radius) {
    const double cost = mean_visits / static_cast<double>(maxvisits);
    double radius_term;
    if (max_radius > 0.0) {
        radius_term = std::min(1.0, avg_radius / max_radius);
    } else {
        radius_term = avg_radius > 0.0 ? 1.0 : 0.0;
    }
    return cost + radius_term;
}

double min_recall_objective(double mean_visits, std::uint64_t maxvisits, double recall,
                            double min_recall) {
    if (recall < min_recall) return 3.0 - 2.0 * recall;
    return mean_visits / static_cast<double>(maxvisits);
}

namespace {

struct EvalOutcome {
    double fitness = 0.0;
    double mean_visits = 0.0;
    double macro_recall = 0.0;
    double avg_radius = 0.0;
};

EvalOutcome evaluate_config(const Configuration& config, const SearchGraph& graph,
                            TuningContext& ctx, FitnessKind target, double min_recall,
                            unsigned workers) {
    const auto stats = run_tuning_queries(config, graph, ctx, workers);
    EvalOutcome out;
    for (const auto& st : stats) {
        out.mean_visits += static_cast<double>(st.visits);
        out.macro_recall += st.recall;
        out.avg_radius += st.radius;
    }
    const double m = stats.empty() ? 1.0 : static_cast<double>(stats.size());
    out.mean_visits /= m;
    out.macro_recall /= m;
    out.avg_radius /= m;

    switch (target) {
    case FitnessKind::ParetoRecall:
        out.fitness = pareto_recall_objective(out.mean_visits, ctx.maxvisits, out.macro_recall);
        break;
    case FitnessKind::ParetoRadius:
        if (ctx.max_radius_estimate <= 0.0) {
            // First evaluation of the procedure estimates the radius scale.
            ctx.max_radius_estimate = out.avg_radius;
            out.fitness = out.mean_visits / static_cast<double>(ctx.maxvisits) + 1.0;
        } else {
            out.fitness = pareto_radius_objective(out.mean_visits, ctx.maxvisits, out.avg_radius,
                                                  ctx.max_radius_estimate);
        }
        break;
    case FitnessKind::MinRecall:
        out.fitness =
            min_recall_objective(out.mean_visits, ctx.maxvisits, out.macro_recall, min_recall);
        break;
    }
    return out;
}

} // namespace

double eval_pareto_recall(const Configuration& config, const SearchGraph& graph,
                          TuningContext& ctx, unsigned workers) {
    return evaluate_config(config, graph, ctx, FitnessKind::ParetoRecall, 0.0, workers).fitness;
}

double eval_pareto_radius(const Configuration& config, const SearchGraph& graph,
                          TuningContext& ctx, unsigned workers) {
    return evaluate_config(config, graph, ctx, FitnessKind::ParetoRadius, 0.0, workers).fitness;
}

double eval_min_recall(const Configuration& config, const SearchGraph& graph, TuningContext& ctx,
                       const OptimizerSettings& settings, unsigned workers) {
    return evaluate_config(config, graph, ctx, FitnessKind::MinRecall, settings.min_recall,
                           workers)
        .fitness;
}

Configuration rand_config(const OptimizerSettings& settings, Rng& rng) {
    const std::uint32_t bsize =
        settings.rand_bsize_grid[rng.uniform_int(settings.rand_bsize_grid.size())];
    const double delta =
        settings.rand_delta_grid[rng.uniform_int(settings.rand_delta_grid.size())];
    return Configuration{bsize, delta};
}

Configuration mutate(const Configuration& config, const OptimizerSettings& settings, Rng& rng) {
    const double bscale = rng.bernoulli(settings.p) ? settings.alpha : 1.0 / settings.alpha;
    const double dscale = rng.bernoulli(settings.p) ? settings.beta : 1.0 / settings.beta;
    return Configuration::clamped(config.bsize * bscale, config.delta * dscale);
}

Configuration crossover(const Configuration& a, const Configuration& b) {
    return Configuration::clamped((static_cast<double>(a.bsize) + b.bsize) / 2.0,
                                  (a.delta + b.delta) / 2.0);
}

std::vector<Configuration> config_neighborhood(const Configuration& config,
                                               std::span<const Configuration> beam,
                                               const OptimizerSettings& settings, Rng& rng) {
    if (beam.empty()) throw UsageError("config_neighborhood: beam must be non-empty");
    std::vector<Configuration> out;
    out.reserve(settings.gamma + settings.delta_count);
    for (std::uint32_t i = 0; i < settings.gamma; ++i)
        out.push_back(mutate(config, settings, rng));
    for (std::uint32_t i = 0; i < settings.delta_count; ++i) {
        const Configuration& a = beam[rng.uniform_int(beam.size())];
        const Configuration& b = beam[rng.uniform_int(beam.size())];
        out.push_back(crossover(a, b));
    }
    return out;
}

namespace {

struct ConfigKeyHash {
    std::size_t operator()(const std::pair<std::uint32_t, std::int64_t>& key) const {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(key.first) << 32) ^
                                          static_cast<std::uint64_t>(key.second));
    }
};

} // namespace

Configuration optimize(SearchGraph& graph, const OptimizerSettings& settings, unsigned workers) {
    if (graph.empty()) throw UsageError("optimize: graph is empty");
    Rng& rng = graph.rng();
    TuningContext ctx = make_tuning_context(graph, settings, rng, workers);

    // The configuration graph is implicit: configurations are interned to
    // dense ids so the same beam search that answers kNN queries navigates
    // them. Interning dedups at (bsize, delta@4dp) granularity, which keeps
    // any configuration from being evaluated twice in one call.
    std::vector<Configuration> configs;
    std::vector<EvalOutcome> outcomes;
    std::unordered_map<std::pair<std::uint32_t, std::int64_t>, std::uint32_t, ConfigKeyHash> ids;
    const auto intern = [&](const Configuration& c) -> std::uint32_t {
        const auto [it, inserted] =
            ids.emplace(std::make_pair(c.bsize, c.delta_key()),
                        static_cast<std::uint32_t>(configs.size()));
        if (inserted) {
            configs.push_back(c);
            outcomes.emplace_back();
        }
        return it->second;
    };

    std::vector<std::uint32_t> seeds;
    for (std::uint32_t attempt = 0; attempt < 64 && seeds.size() < settings.opt_bsize; ++attempt) {
        const std::uint32_t id = intern(rand_config(settings, rng));
        if (std::find(seeds.begin(), seeds.end(), id) == seeds.end()) seeds.push_back(id);
    }

    const auto fitness = [&](std::uint32_t id) -> double {
        outcomes[id] =
            evaluate_config(configs[id], graph, ctx, settings.target, settings.min_recall,
                            workers);
        return outcomes[id].fitness;
    };

    std::vector<Configuration> pool;
    const auto neighbors = [&](std::uint32_t id,
                               std::span<const BoundedResultSet::Entry> beam_live) {
        pool.clear();
        for (const auto& e : beam_live) pool.push_back(configs[e.id]);
        if (pool.empty()) pool.push_back(configs[id]);
        std::vector<std::uint32_t> out;
        for (const Configuration& c : config_neighborhood(configs[id], pool, settings, rng))
            out.push_back(intern(c));
        return out;
    };

    VisitedSet visited;
    visited.begin(0);
    const BeamParams params{settings.opt_bsize, 1.0, settings.max_evaluations};
    const SearchResult res =
        beam_search(fitness, neighbors, seeds, settings.opt_bsize, params, visited);

    const std::uint32_t best = res.neighbors.argmin();
    graph.set_search_params(configs[best]);
    graph.set_prev_best_visits(outcomes[best].mean_visits);
    return configs[best];
}

} // namespace agraph
