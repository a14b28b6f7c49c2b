#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qae/risk.hpp"

using namespace qae;

namespace {

std::vector<DistributionSpec> test_matrix() {
    return {
        DistributionSpec::normal(0.1, 0.01, 4),
        DistributionSpec::normal(0.1, 0.05, 4),
        DistributionSpec::weibull(1.8, 4),
        DistributionSpec::uniform(0.0, 1.0, 4),
    };
}

}  // namespace

TEST_CASE("risk pipelines reproduce the classical scan with the exact backend") {
    ExactEstimator exact;
    for (const auto& spec : test_matrix()) {
        auto dd = discretize(spec);
        ClassicalStats stats(dd);

        auto mean_rep = estimate_mean(spec, dd, exact, 1);
        REQUIRE(mean_rep.estimate == Catch::Approx(stats.mean()).margin(1e-9));

        auto var_rep = estimate_var(spec, dd, 0.95, exact, 2);
        REQUIRE(var_rep.estimate == stats.var(0.95));
        REQUIRE(var_rep.var_index == stats.var_index(0.95));
        REQUIRE(var_rep.achieved_level ==
                Catch::Approx(stats.cdf_at(var_rep.var_index)).margin(1e-9));

        auto cvar_rep = estimate_cvar(spec, dd, 0.95, exact, 3);
        REQUIRE(cvar_rep.estimate == Catch::Approx(stats.cvar(0.95)).margin(1e-9));
    }
}

TEST_CASE("exact tail probabilities are monotone in the threshold") {
    auto dd = discretize(DistributionSpec::normal(0.1, 0.05, 4));
    double prev = -1.0;
    for (std::size_t l = 0; l < dd.size(); ++l) {
        PowerOracle oracle(
            AmplitudeProblem::from_distribution(dd, ObjectiveKind::cdf_threshold(l)));
        const double p = oracle.amplitude();
        REQUIRE(p >= prev - 1e-12);
        prev = p;
    }
}

TEST_CASE("estimate_mean point mass is exact for any backend") {
    auto dd = point_mass({0.0, 0.25, 0.5, 0.75}, 3);
    auto spec = DistributionSpec::uniform(0.0, 1.0, 2);  // refs unused here
    IqaeEstimator iq;  // default target epsilon 1e-3 in the amplitude domain
    auto rep = estimate_mean(spec, dd, iq, 7);
    CHECK(rep.estimate == Catch::Approx(0.75).margin(1e-3));
}

TEST_CASE("estimate_var boundary level lands on the top grid point") {
    auto spec = DistributionSpec::uniform(0.0, 1.0, 4);
    auto dd = discretize(spec);
    ExactEstimator exact;
    auto rep = estimate_var(spec, dd, 0.999, exact, 4);
    CHECK(rep.var_index == 15);
    CHECK(rep.estimate == 15.0 / 16.0);
    CHECK(rep.achieved_level == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("sampled var on the uniform grid reports a saturated level") {
    auto spec = DistributionSpec::uniform(0.0, 1.0, 4);
    auto dd = discretize(spec);
    IqaeConfig cfg;
    cfg.epsilon = 1e-3;
    cfg.alpha = 0.05;
    cfg.shots_per_round = 100;
    IqaeEstimator iq(cfg);
    auto rep = estimate_var(spec, dd, 0.95, iq, 99);
    CHECK(rep.estimate == 15.0 / 16.0);
    CHECK(rep.achieved_level >= 1.0 - 1.5e-3);
    CHECK(rep.oracle_queries_a() > 0);
    CHECK(rep.grover_applications() > 0);
}

TEST_CASE("var level validation") {
    auto spec = DistributionSpec::uniform(0.0, 1.0, 3);
    auto dd = discretize(spec);
    ExactEstimator exact;
    CHECK_THROWS_AS(estimate_var(spec, dd, 0.0, exact, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_var(spec, dd, 1.0, exact, 1), std::invalid_argument);
}

TEST_CASE("tail probes are sharper near saturated levels", "[property]") {
    // Threshold probes at P ~ 0.99 versus P ~ 0.5 with the same
    // phase-estimation budget: the sqrt(a(1-a)) factor makes the
    // near-saturated probe easier. Medians over 50 seeds. The Weibull
    // grid keeps both probe amplitudes off the phase-estimation grid
    // (the symmetric normal grid pins P = 0.5 exactly on it).
    auto dd = discretize(DistributionSpec::weibull(1.8, 4));
    ClassicalStats stats(dd);
    const std::size_t l_mid = stats.var_index(0.5);
    const std::size_t l_high = stats.var_index(0.985);

    auto median_error = [&](std::size_t l) {
        PowerOracle oracle(
            AmplitudeProblem::from_distribution(dd, ObjectiveKind::cdf_threshold(l)));
        const double truth = oracle.amplitude();
        std::vector<double> errs;
        for (int i = 0; i < 50; ++i) {
            auto res = canonical_qae(oracle, 5, 100, 600 + i);
            errs.push_back(std::abs(res.a_hat - truth));
        }
        std::sort(errs.begin(), errs.end());
        return errs[errs.size() / 2];
    };
    CHECK(median_error(l_high) <= median_error(l_mid));
}

TEST_CASE("refining the grid tightens var and cvar against the continuum") {
    ExactEstimator exact;
    for (const auto& base : {DistributionSpec::normal(0.1, 0.01),
                             DistributionSpec::normal(0.1, 0.05),
                             DistributionSpec::weibull(1.8)}) {
        auto err_at = [&](int n) {
            auto spec = base.with_qubits(n);
            auto dd = discretize(spec);
            auto var_rep = estimate_var(spec, dd, 0.95, exact, 1);
            auto cvar_rep = estimate_cvar(spec, dd, 0.95, exact, 1);
            return std::pair{std::abs(var_rep.estimate - var_rep.continuous_reference),
                             std::abs(cvar_rep.estimate - cvar_rep.continuous_reference)};
        };
        const auto [var4, cvar4] = err_at(4);
        const auto [var7, cvar7] = err_at(7);
        CHECK(var7 < var4);
        CHECK(cvar7 < cvar4);
    }
}
