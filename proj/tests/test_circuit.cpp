#include <catch2/catch_amalgamated.hpp>

#include "qae/circuit.hpp"
#include "qae/simulator.hpp"

using namespace qae;

TEST_CASE("circuit metrics") {
    SECTION("empty circuit") {
        auto m = circuit_metrics(Circuit(2));
        CHECK(m.gate_count == 0);
        CHECK(m.depth == 0);
    }
    SECTION("layering counts independent gates once") {
        Circuit c(2);
        c.append(Gate::h(0));
        c.append(Gate::h(1));
        c.append(Gate::x(0));
        auto m = circuit_metrics(c);
        CHECK(m.gate_count == 3);
        CHECK(m.depth == 2);
    }
    SECTION("single-controlled gates are elementary") {
        Circuit c(3);
        c.append(Gate::x(2).controlled_by({0}));
        auto m = circuit_metrics(c);
        CHECK(m.gate_count == 1);
        CHECK(m.depth == 1);
    }
    SECTION("multi-controlled expansion follows f(c) = 3 f(c-1) + 2") {
        auto count_for = [](int n_controls) {
            Circuit c(n_controls + 1);
            std::vector<int> ctrls;
            for (int i = 1; i <= n_controls; ++i) ctrls.push_back(i);
            c.append(Gate::x(0).controlled_by(ctrls));
            return circuit_metrics(c).gate_count;
        };
        CHECK(count_for(1) == 1);
        CHECK(count_for(2) == 5);
        CHECK(count_for(3) == 17);
        CHECK(count_for(4) == 53);
    }
    SECTION("counts are additive over concatenation") {
        Circuit a(3), b(3);
        a.append(Gate::h(0));
        a.append(Gate::x(2).controlled_by({0, 1}));
        b.append(Gate::ry(1, 0.3));
        Circuit ab(3);
        ab.append(a);
        ab.append(b);
        CHECK(circuit_metrics(ab).gate_count ==
              circuit_metrics(a).gate_count + circuit_metrics(b).gate_count);
    }
}

TEST_CASE("circuit inverse undoes the circuit") {
    Rng rng(31);
    Circuit c(4);
    for (int i = 0; i < 25; ++i) {
        Gate g;
        const GateKind kinds[] = {GateKind::H, GateKind::X, GateKind::Y,
                                  GateKind::Z, GateKind::RY, GateKind::Phase};
        g.kind = kinds[rng.next_u64() % 6];
        g.target = static_cast<int>(rng.next_u64() % 4);
        g.angle = rng.uniform() * 3.0;
        int ctrl = static_cast<int>(rng.next_u64() % 4);
        if (ctrl != g.target) g.controls.push_back(ctrl);
        c.append(g);
    }
    Circuit full(4);
    full.append(c);
    full.append(c.inverse());
    auto st = run_circuit(full);
    CHECK(std::abs(st.amplitudes()[0] - 1.0) < 1e-10);
}

TEST_CASE("circuit validation") {
    Circuit c(2);
    CHECK_THROWS_AS(c.append(Gate::x(2)), std::invalid_argument);
    CHECK_THROWS_AS(c.append(Gate::x(0).controlled_by({0})), std::invalid_argument);
    CHECK_THROWS_AS(c.append(Gate::x(0).controlled_by({1, 1})), std::invalid_argument);
}
