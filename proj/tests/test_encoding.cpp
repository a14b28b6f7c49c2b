#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qae/encoding.hpp"
#include "qae/simulator.hpp"

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

double exact_objective_probability(const DiscretizedDistribution& dd,
                                   const ObjectiveKind& kind) {
    const int n = dd.n_qubits();
    Circuit full(n + 1);
    full.append_shifted(build_loader(dd), 0);
    full.append(build_objective(n, kind));
    return probability_of_one(run_circuit(full), n);
}

}  // namespace

TEST_CASE("loader reproduces the target amplitudes") {
    SECTION("uniform distribution equals H on every qubit") {
        auto dd = discretize(DistributionSpec::uniform(0.0, 1.0, 4));
        auto st = run_circuit(build_loader(dd));
        Circuit hs(4);
        for (int q = 0; q < 4; ++q) hs.append(Gate::h(q));
        auto expect = run_circuit(hs);
        for (std::size_t i = 0; i < 16; ++i) {
            REQUIRE(std::abs(st.amplitudes()[i] - expect.amplitudes()[i]) < 1e-10);
        }
    }
    SECTION("point mass loads a basis state") {
        auto dd = point_mass({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}, 5);
        auto st = run_circuit(build_loader(dd));
        CHECK(std::norm(st.amplitudes()[5]) == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("measured probabilities equal the discretized weights") {
        for (const auto& spec : test_matrix()) {
            auto dd = discretize(spec);
            auto st = run_circuit(build_loader(dd));
            auto probs = st.probabilities();
            for (std::size_t i = 0; i < dd.size(); ++i) {
                REQUIRE(probs[i] == Catch::Approx(dd.probs[i]).margin(1e-10));
            }
        }
    }
    SECTION("amplitudes stay real and nonnegative") {
        for (const auto& spec : test_matrix()) {
            auto st = run_circuit(build_loader(discretize(spec)));
            for (const auto& a : st.amplitudes()) {
                REQUIRE(a.imag() == Catch::Approx(0.0).margin(1e-10));
                REQUIRE(a.real() > -1e-10);
            }
        }
    }
    SECTION("unnormalized input throws") {
        DiscretizedDistribution dd;
        dd.grid = {0.0, 1.0};
        dd.probs = {0.4, 0.4};
        CHECK_THROWS_AS(build_loader(dd), std::invalid_argument);
    }
}

TEST_CASE("objective circuits rotate sum p_i f(i) onto the flag qubit") {
    SECTION("cdf threshold at the top index is certain") {
        for (const auto& spec : test_matrix()) {
            auto dd = discretize(spec);
            const double p =
                exact_objective_probability(dd, ObjectiveKind::cdf_threshold(dd.size() - 1));
            REQUIRE(p == Catch::Approx(1.0).margin(1e-10));
        }
    }
    SECTION("mean objective on the uniform grid") {
        auto dd = discretize(DistributionSpec::uniform(0.0, 1.0, 4));
        const double p = exact_objective_probability(dd, ObjectiveKind::mean());
        // sum_i i / (16 * 15) = 120/240
        CHECK(p == Catch::Approx(0.5).margin(1e-10));
        CHECK(to_value_domain(p, dd, ObjectiveKind::mean()) ==
              Catch::Approx(0.46875).margin(1e-10));
    }
    SECTION("exactness across the whole test matrix") {
        for (const auto& spec : test_matrix()) {
            auto dd = discretize(spec);
            ClassicalStats stats(dd);
            const std::size_t l = stats.var_index(0.95);
            for (const auto kind : {ObjectiveKind::mean(), ObjectiveKind::cdf_threshold(l),
                                    ObjectiveKind::cvar(l)}) {
                double expect = 0.0;
                for (std::size_t i = 0; i < dd.size(); ++i) {
                    expect += dd.probs[i] * kind.f(i, dd.size());
                }
                REQUIRE(exact_objective_probability(dd, kind) ==
                        Catch::Approx(expect).margin(1e-10));
            }
        }
    }
    SECTION("objective leaves the distribution marginal untouched") {
        auto dd = discretize(DistributionSpec::normal(0.1, 0.05, 4));
        Circuit full(5);
        full.append_shifted(build_loader(dd), 0);
        full.append(build_objective(4, ObjectiveKind::mean()));
        auto st = run_circuit(full);
        const int qs[] = {0, 1, 2, 3};
        auto marginal = marginal_probabilities(st, qs);
        for (std::size_t i = 0; i < dd.size(); ++i) {
            REQUIRE(marginal[i] == Catch::Approx(dd.probs[i]).margin(1e-10));
        }
    }
    SECTION("cvar with a zero threshold index stays total") {
        auto kind = ObjectiveKind::cvar(0);
        CHECK(kind.f(0, 16) == 1.0);
        CHECK(kind.f(1, 16) == 0.0);
    }
    SECTION("threshold out of range throws") {
        CHECK_THROWS_AS(build_objective(4, ObjectiveKind::cdf_threshold(16)),
                        std::invalid_argument);
    }
}

TEST_CASE("value-domain mapping") {
    auto dd = discretize(DistributionSpec::normal(0.1, 0.01, 4));
    SECTION("mean endpoints") {
        CHECK(to_value_domain(0.0, dd, ObjectiveKind::mean()) == dd.grid.front());
        CHECK(to_value_domain(1.0, dd, ObjectiveKind::mean()) == dd.grid.back());
    }
    SECTION("cdf threshold is the identity") {
        CHECK(to_value_domain(0.31, dd, ObjectiveKind::cdf_threshold(3)) == 0.31);
    }
    SECTION("cvar with exact inputs reproduces the classical tail mean") {
        for (const auto& spec : test_matrix()) {
            auto d = discretize(spec);
            ClassicalStats stats(d);
            const std::size_t l = stats.var_index(0.95);
            const auto kind = ObjectiveKind::cvar(l);
            double a = 0.0;
            for (std::size_t i = 0; i <= l; ++i) a += d.probs[i] * kind.f(i, d.size());
            const double tail = stats.cdf_at(l);
            REQUIRE(to_value_domain(a, d, kind, tail) ==
                    Catch::Approx(stats.cvar(0.95)).margin(1e-9));
        }
    }
    SECTION("degenerate tail throws") {
        CHECK_THROWS_AS(to_value_domain(0.5, dd, ObjectiveKind::cvar(3), 0.0),
                        std::domain_error);
    }
}
