#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <set>

#include "catswap/circuits.hpp"
#include "oracles.hpp"

using namespace catswap;
using doctest::Approx;

namespace {
const double kRoot2Inv = 1.0 / std::sqrt(2.0);
}

TEST_CASE("generator circuit layout") {
    const auto c = cat_generator_circuit(4);
    REQUIRE(c.gates.size() == 4);
    CHECK(c.gates[0].kind == GateKind::H);
    CHECK(c.gates[0].qubit == 0);
    for (int k = 1; k < 4; ++k) {
        CHECK(c.gates[std::size_t(k)].kind == GateKind::Cnot);
        CHECK(c.gates[std::size_t(k)].qubit == 0);
        CHECK(c.gates[std::size_t(k)].target == k);
    }
    CHECK_THROWS_AS(cat_generator_circuit(1), std::invalid_argument);
}

TEST_CASE("generator produces cat states from basis inputs") {
    // All-zero input gives the Bell Phi+.
    const auto bell = apply_circuit(basis_state<double>(2, 0), cat_generator_circuit(2));
    CHECK(bell.amplitudes[0].real() == Approx(kRoot2Inv));
    CHECK(bell.amplitudes[3].real() == Approx(kRoot2Inv));

    // b0 = 1 flips the sign branch: (|000> - |111>)/sqrt(2), worked through
    // H on qubit 0 then both CNOTs by hand.
    const auto ghz_minus = apply_circuit(basis_state<double>(3, 1), cat_generator_circuit(3));
    CHECK(ghz_minus.amplitudes[0].real() == Approx(kRoot2Inv));
    CHECK(ghz_minus.amplitudes[7].real() == Approx(-kRoot2Inv));
    CHECK(ghz_minus.amplitudes.cwiseAbs().sum() == Approx(2 * kRoot2Inv).epsilon(1e-12));

    // The four 2-qubit inputs give the four pairwise-orthogonal Bell states.
    std::vector<StateVectord> outputs;
    for (std::uint64_t b = 0; b < 4; ++b) {
        outputs.push_back(apply_circuit(basis_state<double>(2, b), cat_generator_circuit(2)));
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(std::abs(inner(outputs[i], outputs[j])) ==
                  Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("analyze_cat inverts the generator") {
    const auto bell = cat_state<double>(CatLabel{{0, 1}, "00", +1});
    const auto readout = analyze_cat(bell, {0, 1});
    CHECK(readout.bits == "00");
    CHECK(readout.label == CatLabel{{0, 1}, "00", +1});

    const auto ghz_minus = cat_state<double>(CatLabel{{0, 1, 2}, "000", -1});
    const auto minus_readout = analyze_cat(ghz_minus, {0, 1, 2});
    CHECK(minus_readout.bits == "100");  // the sign lives on the Hadamard qubit
    CHECK(minus_readout.label == CatLabel{{0, 1, 2}, "000", -1});
}

TEST_CASE("all 16 four-qubit cat states round-trip through the analyzer") {
    const std::vector<int> ids = {0, 1, 2, 3};
    for (const auto& label : enumerate_cat_basis(4)) {
        const auto readout = analyze_cat(cat_state<double>(label), ids);
        CHECK(readout.label == label);
        // And the generator rebuilds the state exactly from those bits.
        std::uint64_t input = 0;
        for (int k = 0; k < 4; ++k) {
            if (readout.bits[std::size_t(k)] == '1') input |= 1ULL << k;
        }
        const auto rebuilt =
            apply_circuit(basis_state<double>(4, input), cat_generator_circuit(4));
        CHECK(fidelity(rebuilt, cat_state<double>(label)) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("analyze_cat rejects non-cat input") {
    CHECK_THROWS_AS(analyze_cat(new_basis_state<double>(2, "01"), {0, 1}),
                    std::invalid_argument);
}

TEST_CASE("generator followed by its reverse is the identity") {
    Rng rng = substream(17, 0);
    const auto generator = cat_generator_circuit(5);
    const auto analyzer = reversed(generator);
    for (int trial = 0; trial < 200; ++trial) {
        const auto state = testutil::random_state(5, rng);
        const auto back = apply_circuit(apply_circuit(state, generator), analyzer);
        CHECK((back.amplitudes - state.amplitudes).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("generator image equals the cat basis for small n") {
    for (int n = 2; n <= 5; ++n) {
        std::set<std::string> image;
        std::vector<int> ids(static_cast<std::size_t>(n));
        std::iota(ids.begin(), ids.end(), 0);
        for (std::uint64_t b = 0; b < (1ULL << n); ++b) {
            const auto state =
                apply_circuit(basis_state<double>(n, b), cat_generator_circuit(n));
            const auto found = identify_cat(state, ids);
            REQUIRE(found);
            image.insert(to_string(found->label));
        }
        std::set<std::string> basis;
        for (const auto& label : enumerate_cat_basis(n)) basis.insert(to_string(label));
        CHECK(image == basis);
    }
}

TEST_CASE("a single CNOT and a measurement merge two Bell pairs into a GHZ") {
    const auto state = tensor(cat_state<double>(bell_label(0, 1)),
                              cat_state<double>(bell_label(2, 3)));
    const auto branches = cnot_merge_branches(state, 1, 2);

    auto expect_zero = zero_state<double>(3);
    expect_zero.amplitudes[0] = kRoot2Inv;
    expect_zero.amplitudes[7] = kRoot2Inv;
    CHECK(branches[0].probability == Approx(0.5).epsilon(1e-12));
    CHECK(fidelity(branches[0].residual, expect_zero) == Approx(1.0).epsilon(1e-12));

    auto expect_one = zero_state<double>(3);
    expect_one.amplitudes[4] = kRoot2Inv;
    expect_one.amplitudes[3] = kRoot2Inv;
    CHECK(branches[1].probability == Approx(0.5).epsilon(1e-12));
    CHECK(fidelity(branches[1].residual, expect_one) == Approx(1.0).epsilon(1e-12));
    const auto found = identify_cat(branches[1].residual, {0, 1, 3});
    REQUIRE(found);
    CHECK(found->label.qubits.size() == 3);

    // The sampling wrapper lands on one of those two branches.
    Rng rng = substream(5, 0);
    const auto merged = cnot_merge(state, 1, 2, rng);
    const double f = merged.outcome == 0 ? fidelity(merged.residual, expect_zero)
                                         : fidelity(merged.residual, expect_one);
    CHECK(f == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("merging a 3-cat with a Bell pair gives a 4-cat on both branches") {
    const auto state = tensor(cat_state<double>(CatLabel{{0, 1, 2}, "000", +1}),
                              cat_state<double>(CatLabel{{3, 4}, "00", +1}));
    for (const auto& branch : cnot_merge_branches(state, 2, 3)) {
        REQUIRE(branch.valid);
        const auto found = identify_cat(branch.residual, {0, 1, 2, 4});
        REQUIRE(found);
        CHECK(found->label.qubits.size() == 4);
        for (int q = 0; q < 4; ++q) {
            CHECK(subsystem_entropy(branch.residual, {q}) == Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("gate cost counts Hadamards and CNOTs only") {
    const double t_h = 2.0, t_c = 0.5;
    for (int n = 2; n <= 6; ++n) {
        const auto analyzer = reversed(cat_generator_circuit(n));
        CHECK(gate_cost(analyzer, t_h, t_c) == Approx(t_h + (n - 1) * t_c).epsilon(1e-12));
    }
    CHECK(gate_cost(reversed(cat_generator_circuit(2)), t_h, t_c) ==
          Approx(t_h + t_c).epsilon(1e-12));

    CHECK(gate_cost(Circuit{}, t_h, t_c) == 0.0);

    Circuit with_paulis;
    with_paulis.num_qubits = 2;
    with_paulis.gates = {pauli_x(0), pauli_z(1), hadamard(0)};
    CHECK(gate_cost(with_paulis, t_h, t_c) == Approx(t_h));
    CHECK_THROWS_AS(gate_cost(with_paulis, -1.0, t_c), std::invalid_argument);
}

TEST_CASE("circuit validation") {
    Circuit bad;
    bad.num_qubits = 2;
    bad.gates = {cnot(0, 0)};
    CHECK_THROWS_AS(validate_circuit(bad), std::invalid_argument);
    bad.gates = {hadamard(2)};
    CHECK_THROWS_AS(validate_circuit(bad), std::out_of_range);
}
