#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "iqrip/common.hpp"
#include "iqrip/distribution.hpp"
#include "helpers.hpp"

using namespace iqrip;

TEST_SUITE("distribution") {

TEST_CASE("normalize scales weights and sorts canonically") {
    const Distribution d = normalize({2.0, 1.0, 1.0}, {5, 9, 3});
    REQUIRE(d.size() == 3);
    CHECK(d.ids == std::vector<TokenId>{5, 3, 9});  // tie 0.25/0.25 -> ascending id
    CHECK(d.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.probs[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.probs[2] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("normalize drops zero weights") {
    const Distribution d = normalize({0.4, 0.0, 0.6}, {1, 2, 3});
    CHECK(d.ids == std::vector<TokenId>{3, 1});
    CHECK(d.probs[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(d.prob_of(2) == 0.0);
    CHECK(d.index_of(2) == Distribution::npos);
}

TEST_CASE("normalize singleton") {
    const Distribution d = normalize({7.0}, {0});
    REQUIRE(d.size() == 1);
    CHECK(d.probs[0] == 1.0);
}

TEST_CASE("normalize rejects malformed input") {
    CHECK_THROWS_AS(normalize({1.0, -0.1}, {0, 1}), ParameterError);
    CHECK_THROWS_AS(normalize({1.0, 1.0}, {4, 4}), ParameterError);
    CHECK_THROWS_AS(normalize({1.0}, {0, 1}), ParameterError);
    CHECK_THROWS_AS(normalize({0.0, 0.0}, {0, 1}), ParameterError);
    CHECK_THROWS_AS(normalize({}, {}), ParameterError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(normalize({nan}, {0}), ParameterError);
}

TEST_CASE("normalized distributions sum to one in canonical order") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 500; ++trial) {
        const Distribution d = testutil::random_distribution(rng, 1, 200);
        double sum = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            sum += d.probs[i];
            CHECK(d.probs[i] > 0.0);
            if (i > 0) {
                const bool ordered =
                    d.probs[i - 1] > d.probs[i] ||
                    (d.probs[i - 1] == d.probs[i] && d.ids[i - 1] < d.ids[i]);
                CHECK(ordered);
            }
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("quantile interpolates linearly between order statistics") {
    const std::vector<double> values = {0.04, 0.05, 0.06, 0.08,
                                        0.10, 0.12, 0.15, 0.40};
    CHECK(quantile(values, 0.25) == doctest::Approx(0.0575).epsilon(1e-12));
    CHECK(quantile(values, 0.75) == doctest::Approx(0.1275).epsilon(1e-12));
    CHECK(quantile(values, 0.0) == 0.04);
    CHECK(quantile(values, 1.0) == 0.40);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(quantile({3.5}, 0.9) == 3.5);
}

TEST_CASE("quantile input validation") {
    CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), ParameterError);
    CHECK_THROWS_AS(quantile({1.0}, -0.01), ParameterError);
    CHECK_THROWS_AS(quantile({1.0}, 1.01), ParameterError);
}

TEST_CASE("quantile is order independent") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> values(9);
    for (auto& v : values) v = unif(rng);
    auto shuffled = values;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (double q : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0})
        CHECK(quantile(values, q) == quantile(shuffled, q));
}

TEST_CASE("entropy of reference distributions") {
    CHECK(entropy(normalize({1.0}, {0})) == 0.0);
    CHECK(entropy(normalize({1.0, 1.0}, {0, 1})) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    std::vector<double> w(64, 1.0);
    std::vector<TokenId> ids(64);
    std::iota(ids.begin(), ids.end(), TokenId{0});
    CHECK(entropy(normalize(w, ids)) ==
          doctest::Approx(std::log(64.0)).epsilon(1e-12));
}

TEST_CASE("sample_token follows the inverse cdf") {
    const Distribution d = normalize({0.5, 0.3, 0.2}, {10, 20, 30});
    RngState rng(42);
    std::vector<std::size_t> counts(3, 0);
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        const TokenId tok = sample_token(d, rng);
        counts[d.index_of(tok)] += 1;
    }
    CHECK(std::abs(counts[0] / double(draws) - 0.5) < 0.01);
    CHECK(std::abs(counts[1] / double(draws) - 0.3) < 0.01);
    CHECK(std::abs(counts[2] / double(draws) - 0.2) < 0.01);
}

TEST_CASE("sample_token is deterministic per seed and total on singletons") {
    const Distribution d = normalize({1.0, 2.0, 3.0, 4.0}, {0, 1, 2, 3});
    RngState a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(sample_token(d, a) == sample_token(d, b));
    const Distribution single = normalize({5.0}, {42});
    RngState c(1);
    for (int i = 0; i < 10; ++i) CHECK(sample_token(single, c) == 42);
}

TEST_CASE("json line round trip") {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 50; ++trial) {
        const Distribution d = testutil::random_distribution(rng, 1, 40);
        const Distribution back = distribution_from_json_line(
            distribution_to_json_line(d));
        REQUIRE(back.size() == d.size());
        CHECK(back.ids == d.ids);
        for (std::size_t i = 0; i < d.size(); ++i)
            CHECK(back.probs[i] == doctest::Approx(d.probs[i]).epsilon(1e-14));
    }
}

TEST_CASE("json parsing accepts weights and rejects garbage") {
    const Distribution d =
        distribution_from_json_line(R"({"ids":[3,1,2],"probs":[2,2,4]})");
    CHECK(d.ids == std::vector<TokenId>{2, 1, 3});
    CHECK(d.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(distribution_from_json_line("not json"), DataError);
    CHECK_THROWS_AS(distribution_from_json_line(R"({"ids":[1]})"), DataError);
    CHECK_THROWS_AS(distribution_from_json_line(R"({"ids":[1],"probs":[1,2]})"),
                    DataError);
}

}  // TEST_SUITE
