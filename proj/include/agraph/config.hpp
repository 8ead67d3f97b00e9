#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace agraph {

/// One point of the search-parameter space: beam capacity and expansion
/// factor. Every operator producing configurations clamps back into these
/// bounds.
struct Configuration {
    static constexpr std::uint32_t kMinBsize = 2;
    static constexpr std::uint32_t kMaxBsize = 512;
    static constexpr double kMinDelta = 0.6;
    static constexpr double kMaxDelta = 2.0;

    std::uint32_t bsize = 32;
    double delta = 1.0;

    /// Builds a configuration from unrounded coordinates: bsize is rounded
    /// up to an integer, then both coordinates are clamped into bounds.
    static Configuration clamped(double bsize, double delta) {
        double b = std::ceil(bsize);
        if (b < kMinBsize) b = kMinBsize;
        if (b > kMaxBsize) b = kMaxBsize;
        if (delta < kMinDelta) delta = kMinDelta;
        if (delta > kMaxDelta) delta = kMaxDelta;
        return Configuration{static_cast<std::uint32_t>(b), delta};
    }

    bool in_bounds() const {
        return bsize >= kMinBsize && bsize <= kMaxBsize && delta >= kMinDelta &&
               delta <= kMaxDelta;
    }

    /// Identity key; delta is keyed at 4 decimal places.
    std::int64_t delta_key() const { return std::llround(delta * 10000.0); }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.bsize == b.bsize && a.delta_key() == b.delta_key();
    }
};

enum class FitnessKind : std::uint8_t {
    ParetoRecall = 0,  // jointly minimize visit cost and 1 - recall
    ParetoRadius = 1,  // jointly minimize visit cost and result-set radius; needs no gold standard
    MinRecall = 2,     // fastest configuration whose train recall reaches a floor
};

const char* to_string(FitnessKind kind);

/// Knobs of the configuration optimizer itself. The defaults are the fixed
/// values the tuner ships with and do not normally need adjustment.
struct OptimizerSettings {
    double alpha = 1.5;        // bsize mutation factor
    double beta = 1.07;        // delta mutation factor
    double p = 0.8;            // probability a mutation grows (vs shrinks) a coordinate
    std::uint32_t gamma = 16;       // mutations per neighborhood
    std::uint32_t delta_count = 8;  // crossovers per neighborhood
    std::uint32_t opt_bsize = 3;    // beam size of the optimizer's own search

    std::vector<std::uint32_t> rand_bsize_grid = {8, 16, 24, 32, 40, 48, 56, 64};
    std::vector<double> rand_delta_grid = {0.8, 0.9, 1.0, 1.1};

    FitnessKind target = FitnessKind::ParetoRecall;
    double min_recall = 0.9;             // MinRecall floor, in (0, 1]
    std::uint32_t tuning_query_count = 32;
    std::uint32_t k = 32;                // neighbors retrieved per tuning query
    std::uint32_t max_evaluations = 48;  // hard cap on fitness evaluations per optimize call
};

} // namespace agraph
