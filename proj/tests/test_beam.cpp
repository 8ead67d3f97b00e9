#include <doctest.h>

#include <map>

#include "agraph/beam_search.hpp"
#include "agraph/dataset.hpp"
#include "oracles.hpp"

using namespace agraph;

namespace {

// Dense adjacency for small synthetic graphs.
struct TestGraph {
    std::vector<std::vector<std::uint32_t>> lists;

    static TestGraph fully_connected(std::uint32_t n) {
        TestGraph g;
        g.lists.resize(n);
        for (std::uint32_t u = 0; u < n; ++u)
            for (std::uint32_t v = 0; v < n; ++v)
                if (u != v) g.lists[u].push_back(v);
        return g;
    }

    static TestGraph random(std::uint32_t n, std::uint32_t degree, std::uint64_t seed) {
        agraph::Rng rng(seed);
        TestGraph g;
        g.lists.resize(n);
        for (std::uint32_t u = 0; u < n; ++u) {
            for (std::uint32_t d = 0; d < degree; ++d) {
                const auto v = static_cast<std::uint32_t>(rng.uniform_int(n));
                if (v != u) g.lists[u].push_back(v);
            }
        }
        return g;
    }

    auto adapter() const {
        return [this](std::uint32_t u, std::span<const BoundedResultSet::Entry>) {
            return std::span<const std::uint32_t>(lists[u]);
        };
    }

    auto ref_adapter() const {
        return [this](std::uint32_t u) { return lists[u]; };
    }
};

} // namespace

TEST_CASE("exhaustive beam search over a fully connected graph is exact") {
    const std::uint32_t n = 200;
    auto rows = oracles::random_rows(n, 8, 21);
    VectorDataset data(8, MetricKind::L2, oracles::flatten(rows));
    const TestGraph graph = TestGraph::fully_connected(n);

    auto queries = oracles::random_rows(10, 8, 22);
    VisitedSet visited;
    for (const auto& q : queries) {
        KnnFitness fitness(data, q);
        visited.begin(n);
        const std::uint32_t seed = 3;
        const SearchResult res = beam_search(fitness, graph.adapter(), std::vector{seed}, 32,
                                             BeamParams{n, 2.0, n}, visited);
        const auto expected = oracles::quadratic_knn(rows, q, 32, false);
        REQUIRE(res.items().size() == 32);
        for (std::size_t i = 0; i < 32; ++i) CHECK(res.items()[i].id == expected[i]);
        CHECK(res.visits == n);
    }
}

TEST_CASE("maxvisits equal to the seed count stops before any expansion") {
    const TestGraph graph = TestGraph::fully_connected(10);
    const std::vector<std::uint32_t> seeds{4, 7, 1};
    VisitedSet visited;
    visited.begin(10);
    const auto fitness = [](std::uint32_t id) { return static_cast<float>(id); };
    const SearchResult res =
        beam_search(fitness, graph.adapter(), seeds, 10,
                    BeamParams{4, 1.0, seeds.size()}, visited);
    CHECK(res.visits == seeds.size());
    REQUIRE(res.items().size() == 3);
    CHECK(res.items()[0].id == 1);
    CHECK(res.items()[1].id == 4);
    CHECK(res.items()[2].id == 7);
}

TEST_CASE("delta = 0 starves the beam after one expansion") {
    // Positive fitness everywhere: nothing satisfies fitness <= 0, so only
    // the seeded beam entry pops and only its neighborhood is scored.
    TestGraph graph;
    graph.lists = {{1, 2}, {3}, {3}, {0}};
    const auto fitness = [](std::uint32_t id) { return static_cast<float>(id) + 1.0f; };
    VisitedSet visited;
    visited.begin(4);
    const SearchResult res = beam_search(fitness, graph.adapter(), std::vector<std::uint32_t>{0},
                                         4, BeamParams{4, 0.0, 100}, visited);
    CHECK(res.visits == 3); // seed 0 plus neighbors 1 and 2
    REQUIRE(res.items().size() == 3);
    CHECK(res.items()[0].id == 0);
    CHECK(res.items()[1].id == 1);
    CHECK(res.items()[2].id == 2);
}

TEST_CASE("no node is evaluated twice") {
    const TestGraph graph = TestGraph::random(300, 6, 5);
    auto rows = oracles::random_rows(300, 4, 6);
    VectorDataset data(4, MetricKind::L2, oracles::flatten(rows));
    const auto query = oracles::random_rows(1, 4, 7)[0];

    std::map<std::uint32_t, int> eval_counts;
    KnnFitness inner(data, query);
    const auto counting = [&](std::uint32_t id) {
        ++eval_counts[id];
        return inner(id);
    };
    VisitedSet visited;
    visited.begin(300);
    const SearchResult res =
        beam_search(counting, graph.adapter(), std::vector<std::uint32_t>{0, 0, 5}, 16,
                    BeamParams{8, 1.1, 500}, visited);
    for (const auto& [id, count] : eval_counts) CHECK(count == 1);
    CHECK(res.visits == eval_counts.size());
}

TEST_CASE("implementation matches a literal transcription across deltas and budgets") {
    for (const double delta : {0.9, 1.0, 1.1, 1.3}) {
        for (const std::uint64_t maxvisits : {std::uint64_t{5}, std::uint64_t{60},
                                              std::uint64_t{100000}}) {
            const TestGraph graph = TestGraph::random(250, 5, 31 + static_cast<int>(delta * 10));
            auto rows = oracles::random_rows(250, 6, 77);
            VectorDataset data(6, MetricKind::L2, oracles::flatten(rows));
            const auto query = oracles::random_rows(1, 6, delta > 1.0 ? 5u : 9u)[0];
            KnnFitness fitness(data, query);
            const std::vector<std::uint32_t> seeds{11, 42, 99};

            VisitedSet visited;
            visited.begin(250);
            const SearchResult got =
                beam_search(fitness, graph.adapter(), seeds, 12, BeamParams{6, delta, maxvisits},
                            visited);
            const auto want = oracles::reference_beam_search(fitness, graph.ref_adapter(), seeds,
                                                             12, 6, delta, maxvisits);
            CHECK(got.visits == want.visits);
            REQUIRE(got.items().size() == want.items.size());
            for (std::size_t i = 0; i < want.items.size(); ++i) {
                CHECK(got.items()[i].score == want.items[i].first);
                CHECK(got.items()[i].id == want.items[i].second);
            }
        }
    }
}

TEST_CASE("visits never exceed maxvisits and short runs mean the beam drained") {
    const TestGraph graph = TestGraph::random(150, 4, 3);
    auto rows = oracles::random_rows(150, 4, 4);
    VectorDataset data(4, MetricKind::L2, oracles::flatten(rows));
    const auto query = oracles::random_rows(1, 4, 8)[0];
    KnnFitness fitness(data, query);
    VisitedSet visited;
    for (const std::uint64_t cap : {std::uint64_t{1}, std::uint64_t{10}, std::uint64_t{1000}}) {
        visited.begin(150);
        const SearchResult res = beam_search(fitness, graph.adapter(),
                                             std::vector<std::uint32_t>{0}, 8,
                                             BeamParams{4, 1.0, cap}, visited);
        CHECK(res.visits <= cap);
    }
}

TEST_CASE("search is deterministic") {
    const TestGraph graph = TestGraph::random(200, 5, 13);
    auto rows = oracles::random_rows(200, 8, 14);
    VectorDataset data(8, MetricKind::L2, oracles::flatten(rows));
    const auto query = oracles::random_rows(1, 8, 15)[0];
    KnnFitness fitness(data, query);
    const std::vector<std::uint32_t> seeds{0, 100};

    VisitedSet visited;
    visited.begin(200);
    const SearchResult a =
        beam_search(fitness, graph.adapter(), seeds, 16, BeamParams{8, 1.05, 150}, visited);
    visited.begin(200);
    const SearchResult b =
        beam_search(fitness, graph.adapter(), seeds, 16, BeamParams{8, 1.05, 150}, visited);
    CHECK(a.visits == b.visits);
    REQUIRE(a.items().size() == b.items().size());
    for (std::size_t i = 0; i < a.items().size(); ++i) {
        CHECK(a.items()[i].id == b.items()[i].id);
        CHECK(a.items()[i].score == b.items()[i].score);
    }
}

TEST_CASE("empty seeds are a usage error") {
    const TestGraph graph = TestGraph::fully_connected(4);
    VisitedSet visited;
    visited.begin(4);
    const auto fitness = [](std::uint32_t) { return 1.0f; };
    CHECK_THROWS_AS(beam_search(fitness, graph.adapter(), std::vector<std::uint32_t>{}, 4,
                                BeamParams{}, visited),
                    UsageError);
}

TEST_CASE("knn fitness evaluates distances to dataset rows") {
    auto rows = oracles::random_rows(50, 16, 33);
    VectorDataset data(16, MetricKind::L2, oracles::flatten(rows));

    SUBCASE("query equal to a row scores zero there") {
        KnnFitness fitness(data, rows[7]);
        CHECK(fitness(7) == doctest::Approx(0.0f).epsilon(1e-6));
    }
    SUBCASE("values match the distance oracle") {
        agraph::Rng rng(8);
        auto queries = oracles::random_rows(10, 16, 34);
        for (const auto& q : queries) {
            KnnFitness fitness(data, q);
            for (int t = 0; t < 10; ++t) {
                const auto id = static_cast<std::uint32_t>(rng.uniform_int(50));
                CHECK(fitness(id) ==
                      doctest::Approx(oracles::naive_l2(q, rows[id])).epsilon(1e-5));
            }
        }
    }
    SUBCASE("sorting every id by fitness reproduces brute-force order") {
        const auto query = oracles::random_rows(1, 16, 35)[0];
        KnnFitness fitness(data, query);
        std::vector<std::uint32_t> ids(50);
        std::iota(ids.begin(), ids.end(), 0);
        std::stable_sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
            return fitness(a) < fitness(b);
        });
        const auto expected = oracles::quadratic_knn(rows, query, 50, false);
        CHECK(ids == expected);
    }
    SUBCASE("dimension mismatch is a usage error") {
        std::vector<float> bad(8, 0.f);
        CHECK_THROWS_AS(KnnFitness(data, bad), UsageError);
    }
}
