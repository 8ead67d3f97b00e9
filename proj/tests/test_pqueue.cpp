#include <doctest.h>

#include <algorithm>

#include "agraph/pqueue.hpp"
#include "oracles.hpp"

using namespace agraph;

TEST_CASE("push into empty queue") {
    BoundedResultSet q(3);
    CHECK(q.push(5.0f, 1));
    CHECK(q.size() == 1);
    CHECK(q.minimum() == 5.0f);
    CHECK(q.maximum() == 5.0f);
    CHECK(q.argmin() == 1);
}

TEST_CASE("push above the maximum of a full queue is rejected") {
    BoundedResultSet q(3);
    q.push(1.0f, 1);
    q.push(2.0f, 2);
    q.push(4.0f, 3);
    CHECK_FALSE(q.push(9.0f, 4));
    CHECK(q.size() == 3);
    CHECK(q.maximum() == 4.0f);
    // At or below the maximum it is accepted and evicts the old maximum.
    CHECK(q.push(3.0f, 5));
    CHECK(q.size() == 3);
    CHECK(q.maximum() == 3.0f);
}

TEST_CASE("a stream of random scores keeps the k smallest in sorted order") {
    agraph::Rng rng(42);
    BoundedResultSet q(8);
    std::vector<float> scores;
    for (std::uint32_t i = 0; i < 100; ++i) {
        const float s = static_cast<float>(rng.uniform());
        scores.push_back(s);
        q.push(s, i);
    }
    std::sort(scores.begin(), scores.end());
    REQUIRE(q.size() == 8);
    const auto items = q.items();
    for (std::size_t i = 0; i < 8; ++i) CHECK(items[i].score == scores[i]);
    for (std::size_t i = 1; i < 8; ++i) CHECK(items[i - 1].score <= items[i].score);
}

TEST_CASE("popmin / popmax / observers") {
    BoundedResultSet q(3);
    q.push(1.0f, 10);
    q.push(2.0f, 20);
    q.push(3.0f, 30);

    SUBCASE("popmin removes the minimum") {
        const auto e = q.popmin();
        CHECK(e.score == 1.0f);
        CHECK(e.id == 10);
        CHECK(q.minimum() == 2.0f);
    }
    SUBCASE("popmax removes the maximum") {
        const auto e = q.popmax();
        CHECK(e.score == 3.0f);
        CHECK(e.id == 30);
        CHECK(q.maximum() == 2.0f);
    }
}

TEST_CASE("empty-set operations are usage errors") {
    BoundedResultSet q(2);
    CHECK_THROWS_AS(q.popmin(), UsageError);
    CHECK_THROWS_AS(q.popmax(), UsageError);
    CHECK_THROWS_AS(q.minimum(), UsageError);
    CHECK_THROWS_AS(q.maximum(), UsageError);
    CHECK_THROWS_AS(q.argmin(), UsageError);
    CHECK_THROWS_AS(BoundedResultSet(0), UsageError);
}

TEST_CASE("interleaved operations match the sorted-list model step by step") {
    agraph::Rng rng(7);
    BoundedResultSet q(5);
    oracles::QueueModel model(5);
    for (int step = 0; step < 200; ++step) {
        const double roll = rng.uniform();
        if (model.live.empty() || roll < 0.6) {
            const float s = static_cast<float>(rng.uniform_int(50)); // forces score ties
            const auto id = static_cast<std::uint32_t>(step);
            CHECK(q.push(s, id) == model.push(s, id));
        } else if (roll < 0.8) {
            const auto got = q.popmin();
            const auto want = model.popmin();
            CHECK(got.score == want.first);
            CHECK(got.id == want.second);
        } else {
            const auto got = q.popmax();
            const auto want = model.popmax();
            CHECK(got.score == want.first);
            CHECK(got.id == want.second);
        }
        REQUIRE(q.size() == model.live.size());
        const auto items = q.items();
        for (std::size_t i = 0; i < model.live.size(); ++i) {
            CHECK(items[i].score == model.live[i].first);
            CHECK(items[i].id == model.live[i].second);
        }
    }
}

TEST_CASE("ties keep first-inserted-first order") {
    BoundedResultSet q(4);
    q.push(1.0f, 1);
    q.push(1.0f, 2);
    q.push(0.5f, 3);
    q.push(1.0f, 4);
    const auto items = q.items();
    CHECK(items[0].id == 3);
    CHECK(items[1].id == 1);
    CHECK(items[2].id == 2);
    CHECK(items[3].id == 4);
}

TEST_CASE("covering radius") {
    BoundedResultSet q(3);
    q.push(1.0f, 1);
    q.push(7.5f, 2);
    CHECK(q.covering_radius() == std::numeric_limits<float>::infinity());
    q.push(2.0f, 3);
    CHECK(q.covering_radius() == 7.5f);
}

TEST_CASE("covering radius equals the kth smallest true distance") {
    agraph::Rng rng(3);
    std::vector<float> dists;
    BoundedResultSet q(32);
    for (std::uint32_t i = 0; i < 200; ++i) {
        const float d = static_cast<float>(rng.uniform());
        dists.push_back(d);
        q.push(d, i);
    }
    std::sort(dists.begin(), dists.end());
    CHECK(q.covering_radius() == dists[31]);
}

TEST_CASE("size never exceeds capacity across random workloads") {
    agraph::Rng rng(11);
    for (int round = 0; round < 50; ++round) {
        const auto cap = static_cast<std::uint32_t>(1 + rng.uniform_int(6));
        BoundedResultSet q(cap);
        oracles::QueueModel model(cap);
        for (int step = 0; step < 120; ++step) {
            if (model.live.empty() || rng.uniform() < 0.7) {
                const float s = static_cast<float>(rng.uniform());
                const bool got = q.push(s, static_cast<std::uint32_t>(step));
                const bool want = model.push(s, static_cast<std::uint32_t>(step));
                CHECK(got == want);
                // push returns false exactly when full and score > maximum
            } else if (rng.uniform() < 0.5) {
                q.popmin();
                model.popmin();
            } else {
                q.popmax();
                model.popmax();
            }
            CHECK(q.size() <= cap);
            CHECK(q.size() == model.live.size());
            if (!model.live.empty()) {
                CHECK(q.minimum() == model.live.front().first);
                CHECK(q.maximum() == model.live.back().first);
                CHECK(q.minimum() <= q.maximum());
            }
        }
    }
}
