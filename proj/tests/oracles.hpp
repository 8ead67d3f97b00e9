#pragma once

// Independent reference implementations the tests check the library
// against. Everything here is written from the definitions, on purpose
// without reusing library kernels or data structures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "agraph/rng.hpp"

namespace oracles {

// --- scalar distance oracles -------------------------------------------

inline double naive_l2(const std::vector<float>& a, const std::vector<float>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double naive_cosine(const std::vector<float>& a, const std::vector<float>& b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += static_cast<double>(a[i]) * b[i];
    double d = 1.0 - dot;
    if (d < 0.0) d = 0.0;
    if (d > 2.0) d = 2.0;
    return d;
}

inline double naive_norm(const std::vector<float>& a) {
    double s = 0.0;
    for (float v : a) s += static_cast<double>(v) * v;
    return std::sqrt(s);
}

// --- sorted-list queue model ---------------------------------------------

struct QueueModel {
    std::uint32_t capacity;
    std::vector<std::pair<float, std::uint32_t>> live; // ascending, stable on ties

    explicit QueueModel(std::uint32_t cap) : capacity(cap) {}

    bool push(float score, std::uint32_t id) {
        if (live.size() == capacity) {
            if (score > live.back().first) return false;
            live.pop_back();
        }
        auto it = std::find_if(live.begin(), live.end(),
                               [&](const auto& e) { return e.first > score; });
        live.insert(it, {score, id});
        return true;
    }

    std::pair<float, std::uint32_t> popmin() {
        auto e = live.front();
        live.erase(live.begin());
        return e;
    }

    std::pair<float, std::uint32_t> popmax() {
        auto e = live.back();
        live.pop_back();
        return e;
    }
};

// --- literal beam search (Alg.-style transcription) ----------------------

struct RefBeamResult {
    std::vector<std::pair<float, std::uint32_t>> items;
    std::uint64_t visits = 0;
};

template <class Fitness, class Neighbors>
RefBeamResult reference_beam_search(Fitness fitness, Neighbors neighbors_of,
                                    const std::vector<std::uint32_t>& seeds, std::uint32_t k,
                                    std::uint32_t bsize, double delta, std::uint64_t maxvisits) {
    QueueModel result(k);
    QueueModel beam(bsize);
    std::set<std::uint32_t> visited;
    RefBeamResult out;

    for (const std::uint32_t s : seeds) {
        if (visited.count(s)) continue;
        visited.insert(s);
        result.push(fitness(s), s);
        if (++out.visits >= maxvisits) {
            out.items = result.live;
            return out;
        }
    }
    beam.push(result.live.front().first, result.live.front().second);
    while (!beam.live.empty()) {
        const auto p = beam.popmin();
        for (const std::uint32_t c : neighbors_of(p.second)) {
            if (visited.count(c)) continue;
            visited.insert(c);
            const float fc = fitness(c);
            result.push(fc, c);
            if (++out.visits >= maxvisits) {
                out.items = result.live;
                return out;
            }
            if (fc <= delta * result.live.back().first) beam.push(fc, c);
        }
    }
    out.items = result.live;
    return out;
}

// --- literal SAT rule -----------------------------------------------------

// Keep x_1; keep x_j (j >= 2) iff dist(center, x_j) < min over kept v of
// dist(v, x_j).
template <class Dist>
std::vector<std::uint32_t> sat_rule(std::uint32_t center,
                                    const std::vector<std::uint32_t>& candidates, Dist dist) {
    std::vector<std::uint32_t> kept;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (j == 0) {
            kept.push_back(candidates[0]);
            continue;
        }
        const double to_center = dist(center, candidates[j]);
        double nearest_kept = std::numeric_limits<double>::infinity();
        for (const std::uint32_t v : kept)
            nearest_kept = std::min(nearest_kept, dist(v, candidates[j]));
        if (to_center < nearest_kept) kept.push_back(candidates[j]);
    }
    return kept;
}

// --- quadratic exact kNN --------------------------------------------------

inline std::vector<std::uint32_t> quadratic_knn(const std::vector<std::vector<float>>& rows,
                                                const std::vector<float>& query, std::uint32_t k,
                                                bool cosine) {
    std::vector<std::pair<double, std::uint32_t>> all;
    all.reserve(rows.size());
    for (std::uint32_t i = 0; i < rows.size(); ++i)
        all.emplace_back(cosine ? naive_cosine(query, rows[i]) : naive_l2(query, rows[i]), i);
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    std::vector<std::uint32_t> ids;
    for (std::uint32_t i = 0; i < std::min<std::size_t>(k, all.size()); ++i)
        ids.push_back(all[i].second);
    return ids;
}

// --- data helpers -----------------------------------------------------------

inline std::vector<std::vector<float>> random_rows(std::uint32_t count, std::uint32_t dim,
                                                   std::uint64_t seed, bool gaussian = false) {
    agraph::Rng rng(seed);
    std::vector<std::vector<float>> rows(count, std::vector<float>(dim));
    for (auto& row : rows)
        for (auto& v : row)
            v = static_cast<float>(gaussian ? rng.gaussian() : rng.uniform());
    return rows;
}

inline std::vector<float> flatten(const std::vector<std::vector<float>>& rows) {
    std::vector<float> flat;
    for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
    return flat;
}

} // namespace oracles
