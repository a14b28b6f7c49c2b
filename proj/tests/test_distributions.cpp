#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "qae/distributions.hpp"

using namespace qae;

namespace {

std::vector<DistributionSpec> paper_specs(int n_qubits = 4) {
    return {
        DistributionSpec::normal(0.1, 0.01, n_qubits),
        DistributionSpec::normal(0.1, 0.05, n_qubits),
        DistributionSpec::weibull(1.8, n_qubits),
        DistributionSpec::uniform(0.0, 1.0, n_qubits),
    };
}

}  // namespace

TEST_CASE("uniform discretization uses left endpoints and equal weights") {
    auto dd = discretize(DistributionSpec::uniform(0.0, 1.0, 4));
    REQUIRE(dd.size() == 16);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(dd.grid[i] == static_cast<double>(i) / 16.0);
        CHECK(dd.probs[i] == 1.0 / 16.0);
    }
}

TEST_CASE("symmetric normal grid has mean mu") {
    auto dd = discretize(DistributionSpec::normal(0.1, 0.01, 4));
    CHECK(ClassicalStats(dd).mean() == Catch::Approx(0.1).margin(1e-12));
    // symmetry of the renormalized weights
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(dd.probs[i] == Catch::Approx(dd.probs[15 - i]).margin(1e-15));
    }
}

TEST_CASE("weibull discretization matches an independent density evaluation") {
    const double beta = 1.8;
    auto spec = DistributionSpec::weibull(beta, 4);
    auto dd = discretize(spec);
    const auto [lo, hi] = spec.effective_bounds();
    CHECK(lo == 0.0);

    // Straightforward reimplementation: w_i = beta x^{beta-1} e^{-x^beta}.
    std::vector<double> w(16);
    double total = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        const double x = lo + static_cast<double>(i) * (hi - lo) / 15.0;
        w[i] = x > 0 ? beta * std::pow(x, beta - 1.0) * std::exp(-std::pow(x, beta)) : 0.0;
        total += w[i];
    }
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(dd.probs[i] == Catch::Approx(w[i] / total).margin(1e-12));
    }
}

TEST_CASE("discretization invariants over the default matrix", "[property]") {
    for (int n : {4, 6, 8}) {
        for (const auto& spec : paper_specs(n)) {
            auto dd = discretize(spec);
            double total = 0.0;
            for (auto p : dd.probs) {
                REQUIRE(p >= 0.0);
                total += p;
            }
            REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
            for (std::size_t i = 1; i < dd.size(); ++i) {
                REQUIRE(dd.grid[i] > dd.grid[i - 1]);
            }
            ClassicalStats stats(dd);
            const auto& cdf = stats.cdf();
            for (std::size_t i = 1; i < cdf.size(); ++i) REQUIRE(cdf[i] >= cdf[i - 1]);
            REQUIRE(cdf.back() == Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("refining the grid shrinks the mean discretization error") {
    // The symmetric default normal grid has zero mean error at any n, so
    // the normal case uses deliberately lopsided bounds to make the check
    // informative; its reference is the matching truncated-normal mean.
    auto mean_err = [](const DistributionSpec& spec, double reference) {
        return std::abs(ClassicalStats(discretize(spec)).mean() - reference);
    };

    const double mu = 0.1, sigma = 0.05;
    boost::math::normal_distribution<double> std_normal;
    const double zl = -3.0, zh = 2.0;
    const double trunc_mean =
        mu + sigma * (boost::math::pdf(std_normal, zl) - boost::math::pdf(std_normal, zh)) /
                 (boost::math::cdf(std_normal, zh) - boost::math::cdf(std_normal, zl));
    auto normal4 =
        DistributionSpec::normal(mu, sigma, 4).with_bounds(mu + zl * sigma, mu + zh * sigma);
    CHECK(mean_err(normal4.with_qubits(8), trunc_mean) < mean_err(normal4, trunc_mean));

    auto weib = DistributionSpec::weibull(1.8, 4);
    CHECK(mean_err(weib.with_qubits(8), continuous_mean(weib)) <
          mean_err(weib, continuous_mean(weib)));

    auto unif = DistributionSpec::uniform(0.0, 1.0, 4);
    CHECK(mean_err(unif.with_qubits(8), 0.5) < mean_err(unif, 0.5));
}

TEST_CASE("classical_stats") {
    SECTION("uniform var at level 0.95 saturates the top grid point") {
        ClassicalStats st(discretize(DistributionSpec::uniform(0.0, 1.0, 4)));
        CHECK(st.var(0.95) == 15.0 / 16.0);
        CHECK(st.cdf_at(st.var_index(0.95)) == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("point mass: mean = var = cvar = the mass point") {
        auto dd = point_mass({0.0, 1.0, 2.0, 3.0}, 2);
        ClassicalStats st(dd);
        CHECK(st.mean() == 2.0);
        CHECK(st.var(0.5) == 2.0);
        CHECK(st.cvar(0.5) == 2.0);
    }
    SECTION("normal var agrees with an exhaustive scan") {
        auto dd = discretize(DistributionSpec::normal(0.1, 0.01, 4));
        ClassicalStats st(dd);
        // brute-force scan over all 16 grid points
        double acc = 0.0;
        std::size_t expect = dd.size() - 1;
        for (std::size_t i = 0; i < dd.size(); ++i) {
            acc += dd.probs[i];
            if (acc >= 0.95) {
                expect = i;
                break;
            }
        }
        CHECK(st.var_index(0.95) == expect);
    }
    SECTION("level outside (0,1) throws") {
        ClassicalStats st(discretize(DistributionSpec::uniform(0.0, 1.0, 2)));
        CHECK_THROWS_AS(st.var(0.0), std::invalid_argument);
        CHECK_THROWS_AS(st.var(1.0), std::invalid_argument);
        CHECK_THROWS_AS(st.cvar(-0.2), std::invalid_argument);
    }
}

TEST_CASE("var scan results are frozen against refactors") {
    std::ifstream in(std::string(TEST_DATA_DIR) + "/classical_stats_golden.json");
    REQUIRE(in.good());
    const auto golden = nlohmann::json::parse(in);
    for (const auto& row : golden) {
        DistributionSpec spec = [&]() {
            const std::string kind = row["kind"];
            if (kind == "normal") {
                return DistributionSpec::normal(row["mu"], row["sigma"], row["n"]);
            }
            if (kind == "weibull") return DistributionSpec::weibull(row["shape"], row["n"]);
            return DistributionSpec::uniform(row["a"], row["b"], row["n"]);
        }();
        ClassicalStats st(discretize(spec));
        const double level = row["level"];
        CHECK(st.mean() == Catch::Approx(double(row["mean"])).margin(1e-12));
        CHECK(st.var_index(level) == std::size_t(row["var_index"]));
        CHECK(st.var(level) == Catch::Approx(double(row["var"])).margin(1e-12));
        CHECK(st.cvar(level) == Catch::Approx(double(row["cvar"])).margin(1e-12));
    }
}

TEST_CASE("continuous references reproduce the known quantiles") {
    CHECK(continuous_reference(DistributionSpec::normal(0.1, 0.01), 0.95).var ==
          Catch::Approx(0.1164).margin(5e-4));
    CHECK(continuous_reference(DistributionSpec::normal(0.1, 0.05), 0.95).var ==
          Catch::Approx(0.1822).margin(5e-4));

    const double weib_var = continuous_reference(DistributionSpec::weibull(1.8), 0.95).var;
    CHECK(weib_var == Catch::Approx(1.8396).margin(5e-4));
    // closed-form cross-check
    CHECK(weib_var == Catch::Approx(std::pow(-std::log(0.05), 1.0 / 1.8)).margin(1e-12));

    CHECK(continuous_reference(DistributionSpec::uniform(0.0, 1.0), 0.95).var ==
          Catch::Approx(0.95).margin(1e-12));
}

TEST_CASE("continuous lower-tail mean cross-checked by quadrature") {
    // Riemann sum of x f(x) over [0, q] against the incomplete-gamma path.
    const double beta = 1.8;
    auto ref = continuous_reference(DistributionSpec::weibull(beta), 0.95);
    const int steps = 200000;
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double x = (i + 0.5) * ref.var / steps;
        acc += x * beta * std::pow(x, beta - 1.0) * std::exp(-std::pow(x, beta));
    }
    acc *= ref.var / steps;
    CHECK(ref.cvar == Catch::Approx(acc / 0.95).epsilon(1e-6));
}

TEST_CASE("discretize error cases") {
    // Density identically zero on the grid: Weibull support is x >= 0.
    auto spec = DistributionSpec::weibull(1.8, 3).with_bounds(-5.0, -1.0);
    CHECK_THROWS_AS(discretize(spec), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::normal(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::uniform(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::weibull(0.0), std::invalid_argument);
}
