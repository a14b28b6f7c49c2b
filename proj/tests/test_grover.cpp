#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qae/grover.hpp"

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

TEST_CASE("true_amplitude") {
    SECTION("single-qubit closed form") {
        CHECK(true_amplitude(AmplitudeProblem::single_qubit(0.25)) ==
              Catch::Approx(0.25).margin(1e-12));
    }
    SECTION("uniform mean objective") {
        auto dd = discretize(DistributionSpec::uniform(0.0, 1.0, 4));
        auto p = AmplitudeProblem::from_distribution(dd, ObjectiveKind::mean());
        CHECK(true_amplitude(p) == Catch::Approx(0.5).margin(1e-10));
    }
    SECTION("full cdf threshold is certain") {
        auto dd = discretize(DistributionSpec::weibull(1.8, 4));
        auto p = AmplitudeProblem::from_distribution(dd, ObjectiveKind::cdf_threshold(15));
        CHECK(true_amplitude(p) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("grover rotation identity") {
    SECTION("a = 0.25 amplifies to certainty in one step") {
        auto p = AmplitudeProblem::single_qubit(0.25);  // theta = pi/6
        auto st = run_circuit(apply_power(p, 1));
        CHECK(probability_of_one(st, 0) == Catch::Approx(1.0).margin(1e-10));
    }
    SECTION("a = 0 stays at zero") {
        auto p = AmplitudeProblem::single_qubit(0.0);
        for (std::uint64_t k : {1, 2, 3}) {
            CHECK(probability_of_one(run_circuit(apply_power(p, k)), 0) ==
                  Catch::Approx(0.0).margin(1e-10));
        }
    }
    SECTION("k = 2 at a = 0.25") {
        auto p = AmplitudeProblem::single_qubit(0.25);
        const double expect = std::pow(std::sin(5.0 * std::numbers::pi / 6.0), 2);
        CHECK(probability_of_one(run_circuit(apply_power(p, 2)), 0) ==
              Catch::Approx(expect).margin(1e-10));
        CHECK(expect == Catch::Approx(0.25).margin(1e-12));
    }
    SECTION("sin^2((2k+1) theta) across the distribution matrix") {
        for (const auto& spec : test_matrix()) {
            auto dd = discretize(spec);
            ClassicalStats stats(dd);
            const std::size_t l = stats.var_index(0.95);
            for (const auto kind : {ObjectiveKind::mean(), ObjectiveKind::cdf_threshold(l),
                                    ObjectiveKind::cvar(l)}) {
                auto problem = AmplitudeProblem::from_distribution(dd, kind);
                PowerOracle oracle(problem);
                const double theta = std::asin(std::sqrt(true_amplitude(problem)));
                for (std::uint64_t k = 0; k <= 8; ++k) {
                    const double expect = std::pow(std::sin((2 * k + 1) * theta), 2);
                    REQUIRE(oracle.good_probability(k) ==
                            Catch::Approx(expect).margin(1e-9));
                }
            }
        }
    }
}

TEST_CASE("grover operator is unitary") {
    auto dd = discretize(DistributionSpec::normal(0.1, 0.05, 3));
    auto p = AmplitudeProblem::from_distribution(dd, ObjectiveKind::mean());
    auto q = build_grover(p);
    Circuit roundtrip(p.n_total());
    roundtrip.append(p.a_circuit);  // some non-trivial in-subspace state
    roundtrip.append(q);
    roundtrip.append(q.inverse());
    roundtrip.append(p.a_circuit.inverse());
    auto st = run_circuit(roundtrip);
    CHECK(std::norm(st.amplitudes()[0]) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("power-circuit metrics grow affinely") {
    auto dd = discretize(DistributionSpec::weibull(1.8, 3));
    auto p = AmplitudeProblem::from_distribution(dd, ObjectiveKind::mean());
    const auto q_count = circuit_metrics(build_grover(p)).gate_count;
    const auto m1 = circuit_metrics(apply_power(p, 1));
    const auto m5 = circuit_metrics(apply_power(p, 5));
    CHECK(m5.gate_count - m1.gate_count == 4 * q_count);

    PowerOracle oracle(p);
    CHECK(oracle.power_metrics(1).gate_count == m1.gate_count);
    CHECK(oracle.power_metrics(5).gate_count == m5.gate_count);
    CHECK(oracle.power_metrics(5).depth == m5.depth);
    CHECK(oracle.power_metrics(0).gate_count == circuit_metrics(p.a_circuit).gate_count);
}

TEST_CASE("power oracle sampling and tally") {
    auto p = AmplitudeProblem::single_qubit(0.3);
    PowerOracle oracle(p);
    QueryTally tally;
    Rng rng(7);
    const std::uint64_t good = oracle.sample_good(3, 500, rng, tally);
    CHECK(good <= 500);
    CHECK(tally.oracle_queries_a == 500 * 7);
    CHECK(tally.grover_applications == 500 * 3);
    CHECK(tally.shots == 500);

    // deterministic given the seed
    QueryTally t2;
    Rng rng2(7);
    CHECK(oracle.sample_good(3, 500, rng2, t2) == good);

    CHECK_THROWS_AS(apply_power(p, kMaxGroverPower + 1), std::invalid_argument);
}
