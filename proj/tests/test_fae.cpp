#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qae/estimators/fae.hpp"

using namespace qae;

TEST_CASE("fae on a zero amplitude returns exactly zero") {
    PowerOracle oracle(AmplitudeProblem::single_qubit(0.0));
    FaeConfig cfg;
    cfg.max_iter = 3;
    cfg.seed = 2;
    auto res = fae(oracle, cfg);
    CHECK(res.a_hat == 0.0);
    CHECK(res.ci_lo == 0.0);
}

TEST_CASE("fae interval coverage at a = 0.3", "[property]") {
    PowerOracle oracle(AmplitudeProblem::single_qubit(0.3));
    FaeConfig cfg;
    cfg.delta = 0.05;
    cfg.max_iter = 5;
    int covered = 0;
    const int runs = 200;
    for (int i = 0; i < runs; ++i) {
        cfg.seed = 3000 + i;
        auto res = fae(oracle, cfg);
        if (res.ci_lo - 1e-12 <= 0.3 && 0.3 <= res.ci_hi + 1e-12) ++covered;
        REQUIRE(res.ci_lo <= res.a_hat);
        REQUIRE(res.a_hat <= res.ci_hi);
    }
    // failure probability is delta = 5% with slack for finite trials
    CHECK(covered >= static_cast<int>(runs * (1.0 - cfg.delta - 0.03)));
}

TEST_CASE("fae respects the fixed iteration cap") {
    PowerOracle oracle(AmplitudeProblem::single_qubit(0.47));
    FaeConfig cfg;
    cfg.max_iter = 3;
    cfg.seed = 19;
    auto res = fae(oracle, cfg);
    CHECK(res.max_k <= (std::uint64_t{1} << cfg.max_iter));
    CHECK(res.rounds >= static_cast<std::uint64_t>(cfg.max_iter + 1));
    CHECK(res.shots_total ==
          res.rounds * static_cast<std::uint64_t>(std::ceil(1944.0 * std::log(2.0 / 0.05))));
}

TEST_CASE("fae tightens with iteration depth") {
    PowerOracle oracle(AmplitudeProblem::single_qubit(0.3));
    FaeConfig shallow, deep;
    shallow.max_iter = 1;
    deep.max_iter = 6;
    shallow.seed = deep.seed = 90;
    const auto wide = fae(oracle, shallow);
    const auto narrow = fae(oracle, deep);
    CHECK(narrow.ci_hi - narrow.ci_lo < wide.ci_hi - wide.ci_lo);
    CHECK(narrow.grover_applications > wide.grover_applications);
}

TEST_CASE("fae determinism and validation") {
    PowerOracle oracle(AmplitudeProblem::single_qubit(0.61));
    FaeConfig cfg;
    cfg.seed = 123;
    auto r1 = fae(oracle, cfg);
    auto r2 = fae(oracle, cfg);
    CHECK(r1.a_hat == r2.a_hat);
    CHECK(r1.rounds_log.size() == r2.rounds_log.size());

    cfg.delta = 0.0;
    CHECK_THROWS_AS(fae(oracle, cfg), std::invalid_argument);
    cfg = {};
    cfg.max_iter = 0;
    CHECK_THROWS_AS(fae(oracle, cfg), std::invalid_argument);
}
