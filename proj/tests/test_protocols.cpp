#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "catswap/protocols.hpp"
#include "oracles.hpp"

using namespace catswap;
using doctest::Approx;

namespace {

const CheckResult* find_check(const ProtocolReport& report, const std::string& needle) {
    for (const auto& c : report.checks) {
        if (c.name.find(needle) != std::string::npos) return &c;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("exchange network: three of four users get a GHZ, the fourth keeps its pair") {
    const auto report = exchange_entangle(make_star_topology(4), {0, 1, 2});
    CHECK(report.all_pass());
    REQUIRE(report.outcomes.size() == 8);
    for (const auto& rec : report.outcomes) {
        CHECK(rec.probability == Approx(0.125).epsilon(1e-10));
        REQUIRE(rec.residual);
        CHECK(rec.residual->qubits == std::vector<int>{0, 2, 4});  // user-side qubits
    }
    CHECK(find_check(report, "untouched pairs") != nullptr);
}

TEST_CASE("exchange network: two users reduce to plain entanglement swapping") {
    const auto report = exchange_entangle(make_star_topology(4), {1, 3});
    CHECK(report.all_pass());
    REQUIRE(report.outcomes.size() == 4);
    for (const auto& rec : report.outcomes) {
        CHECK(rec.probability == Approx(0.25).epsilon(1e-10));
        REQUIRE(rec.residual);
        CHECK(rec.residual->qubits == std::vector<int>{2, 6});
    }
}

TEST_CASE("exchange network: all four users, 16 outcomes of 1/16") {
    const auto report = exchange_entangle(make_star_topology(4), {0, 1, 2, 3});
    CHECK(report.all_pass());
    REQUIRE(report.outcomes.size() == 16);
    for (const auto& rec : report.outcomes) {
        CHECK(rec.probability == Approx(1.0 / 16).epsilon(1e-10));
    }
}

TEST_CASE("exchange works with pairs that start in other Bell states") {
    NetworkTopology topology = make_star_topology(3);
    topology.pairs[0].label = bell_label(0, 1, true, -1);  // Psi-
    topology.pairs[2].label = bell_label(4, 5, false, -1);  // Phi-
    const auto report = exchange_entangle(topology, {0, 2});
    CHECK(report.all_pass());
    for (const auto& rec : report.outcomes) {
        REQUIRE(rec.residual);
        CHECK(rec.residual->qubits == std::vector<int>{0, 4});
    }
}

TEST_CASE("exchange validation") {
    CHECK_THROWS_AS(exchange_entangle(make_star_topology(4), {0}), std::invalid_argument);
    CHECK_THROWS_AS(exchange_entangle(make_star_topology(4), {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(exchange_entangle(make_star_topology(4), {0, 7}), std::invalid_argument);
    CHECK_THROWS_AS(make_star_topology(1), std::invalid_argument);
}

TEST_CASE("exchange sampled mode records frequencies") {
    const auto report =
        exchange_entangle(make_star_topology(3), {0, 1}, Mode::Sampled(2000), 99);
    CHECK(report.all_pass());
    CHECK(report.outcomes[0].note.find("count=") == 0);
}

TEST_CASE("grow_cat produces an (n+1)-cat for every Bell outcome") {
    for (int n : {2, 4}) {
        const auto report = grow_cat(n);
        CHECK(report.all_pass());
        REQUIRE(report.outcomes.size() == 4);
        for (const auto& rec : report.outcomes) {
            CHECK(rec.probability == Approx(0.25).epsilon(1e-10));
            REQUIRE(rec.residual);
            CHECK(rec.residual->qubits.size() == std::size_t(n) + 1);
        }
    }
    CHECK(find_check(grow_cat(2), "three Bell pairs") != nullptr);
    CHECK_THROWS_AS(grow_cat(1), std::invalid_argument);
    CHECK_THROWS_AS(grow_cat(11), std::invalid_argument);
}

TEST_CASE("superdense coding: the no-op message decodes to itself") {
    const auto report = superdense_roundtrip(3, "0000", default_superdense_assignment(3));
    CHECK(report.all_pass());
    REQUIRE(report.outcomes.size() == 1);
    CHECK(report.outcomes[0].note == "message=0000 decoded=0000");
    REQUIRE(report.outcomes[0].outcome);
    CHECK(report.outcomes[0].outcome->pattern == "0000");
    CHECK(report.outcomes[0].outcome->sign == 1);
}

TEST_CASE("superdense coding round-trips exhaustively") {
    // N = 1 is the textbook two-bit scheme.
    const auto two_bit = superdense_roundtrip(1, "", default_superdense_assignment(1));
    CHECK(two_bit.all_pass());
    CHECK(two_bit.outcomes.size() == 4);

    const auto report = superdense_roundtrip(3, "", default_superdense_assignment(3));
    CHECK(report.all_pass());
    CHECK(report.outcomes.size() == 16);

    // Encoded labels exhaust the 4-qubit cat basis.
    std::set<std::string> labels;
    for (const auto& rec : report.outcomes) labels.insert(to_string(*rec.outcome));
    std::set<std::string> basis;
    for (const auto& label : enumerate_cat_basis(4)) basis.insert(to_string(label));
    CHECK(labels == basis);
}

TEST_CASE("superdense coding with a different designated sender") {
    SuperdenseAssignment assignment = default_superdense_assignment(3);
    assignment.designated = 2;
    const auto report = superdense_roundtrip(3, "", assignment);
    CHECK(report.all_pass());
}

TEST_CASE("superdense operation sets multiply to the cat-basis size") {
    for (int n = 1; n <= 6; ++n) {
        const auto assignment = default_superdense_assignment(n);
        std::size_t combinations = 1;
        for (int s = 0; s < n; ++s) combinations *= operation_set(assignment, s).size();
        CHECK(combinations == (std::size_t(1) << (n + 1)));
        CHECK(combinations == enumerate_cat_basis(n + 1).size());
    }
    CHECK(operation_set(default_superdense_assignment(2), 0) ==
          std::vector<std::string>{"I", "X", "Z", "ZX"});
    CHECK(operation_set(default_superdense_assignment(2), 1) ==
          std::vector<std::string>{"I", "X"});
}

TEST_CASE("superdense validation") {
    CHECK_THROWS_AS(superdense_roundtrip_once(3, "000", default_superdense_assignment(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(superdense_roundtrip_once(3, "00x0", default_superdense_assignment(3)),
                    std::invalid_argument);
    SuperdenseAssignment bad = default_superdense_assignment(3);
    bad.designated = 5;
    CHECK_THROWS_AS(superdense_roundtrip_once(3, "0000", bad), std::invalid_argument);
    bad = default_superdense_assignment(3);
    bad.senders[0] = 0;  // collides with the receiver
    CHECK_THROWS_AS(superdense_roundtrip_once(3, "0000", bad), std::invalid_argument);
}

TEST_CASE("information rates") {
    const auto equal_times = information_rates(1, 1.0, 1.0);
    CHECK(equal_times.r1 == Approx(1.0));
    CHECK(equal_times.r2 == Approx(1.0));

    // N = 4, t_h = 2, t_c = 1: r1 = 5/6 and r2 = 2/3.
    const auto uneven = information_rates(4, 2.0, 1.0);
    CHECK(uneven.r1 == Approx(5.0 / 6).epsilon(1e-12));
    CHECK(uneven.r2 == Approx(2.0 / 3).epsilon(1e-12));
    CHECK(uneven.particles_multiparty == 5);
    CHECK(uneven.particles_pairwise == 8);

    for (int n = 1; n <= 8; ++n) {
        const auto rates = information_rates(n, 0.3, 0.3);
        CHECK(rates.r1 == Approx(rates.r2).epsilon(1e-12));
    }

    CHECK_THROWS_AS(information_rates(0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(information_rates(2, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(information_rates(2, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("amplitude correction at theta = pi/4 and pi/6") {
    const double pi = std::acos(-1.0);

    const auto balanced = amplitude_swap_correct(pi / 4);
    CHECK(balanced.all_pass());
    const auto* success = find_check(balanced, "success probability");
    REQUIRE(success);
    CHECK(success->measured == format_value(0.5));

    const auto skewed = amplitude_swap_correct(pi / 6);
    CHECK(skewed.all_pass());
    const auto* skew_success = find_check(skewed, "success probability");
    REQUIRE(skew_success);
    CHECK(std::stod(skew_success->measured) == Approx(3.0 / 8).epsilon(1e-10));
    const auto* skew_failure = find_check(skewed, "failure probability");
    REQUIRE(skew_failure);
    CHECK(std::stod(skew_failure->measured) == Approx(5.0 / 8).epsilon(1e-10));

    // Success outcomes repair the distant pair into (|00> +/- |11>)/sqrt(2).
    for (const auto& rec : skewed.outcomes) {
        REQUIRE(rec.outcome);
        if (rec.outcome->pattern == "00") {
            REQUIRE(rec.residual);
            CHECK(rec.residual->pattern == "00");
            CHECK(rec.residual->sign == rec.outcome->sign);
        }
    }

    CHECK_THROWS_AS(amplitude_swap_correct(0.0), std::invalid_argument);
    CHECK_THROWS_AS(amplitude_swap_correct(pi / 2), std::invalid_argument);
}

TEST_CASE("amplitude correction sampled mode") {
    const double pi = std::acos(-1.0);
    const auto report = amplitude_swap_correct(pi / 6, Mode::Sampled(5000), 5);
    CHECK(report.all_pass());
    CHECK(report.outcomes[0].note.find("count=") != std::string::npos);
}

TEST_CASE("GHZ stabilizer set and check") {
    const auto set3 = ghz_stabilizer_set(3);
    REQUIRE(set3.size() == 7);  // XXX, three -XYY permutations, three ZZ pairs
    CHECK(set3[0].letters == "XXX");
    CHECK(set3[0].sign == 1);
    CHECK(set3[1].letters == "YYX");
    CHECK(set3[1].sign == -1);

    const auto ghz = cat_state<double>(ghz_label(0, 1, 2));
    for (const auto& [p, value] : stabilizer_check(ghz, 3)) {
        CHECK(value == Approx(1.0).epsilon(1e-12));
        CHECK(testutil::pauli_expectation_oracle(ghz, p) == Approx(1.0).epsilon(1e-12));
    }

    // |000> keeps the ZZ correlations but has no XXX coherence.
    const auto classical = new_basis_state<double>(3, "000");
    const auto results = stabilizer_check(classical, 3);
    CHECK(results[0].second == Approx(0.0));          // XXX
    CHECK(results.back().second == Approx(1.0));      // a ZZ pair

    // Averaged over the two intercept-resend collapses, XXX vanishes.
    const double averaged =
        0.5 * pauli_expectation(new_basis_state<double>(3, "000"), pauli_string("XXX")) +
        0.5 * pauli_expectation(new_basis_state<double>(3, "111"), pauli_string("XXX"));
    CHECK(averaged == Approx(0.0));

    CHECK_THROWS_AS(stabilizer_check(ghz, 4), std::invalid_argument);
}

TEST_CASE("stabilizers of larger cats are intact") {
    for (int n : {2, 4, 5}) {
        std::vector<int> qubits(static_cast<std::size_t>(n));
        std::iota(qubits.begin(), qubits.end(), 0);
        const auto cat =
            cat_state<double>(CatLabel{qubits, std::string(std::size_t(n), '0'), +1});
        for (const auto& [p, value] : stabilizer_check(cat, n)) {
            CHECK(value == Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("single-basis conferencing is exact") {
    ConferenceStats stats;
    const auto report =
        conference_key(3, 1000, BasisMode::Single, 31, Eavesdropper::None(), &stats);
    CHECK(report.all_pass());
    CHECK(stats.kept == 1000);
    CHECK(stats.product_violations == 0);
    CHECK(stats.agreement_rate == 1.0);
    CHECK(stats.xxx_estimate == 1.0);
}

TEST_CASE("dual-basis conferencing sifts half the rounds") {
    // For 3 users, 4 of the 8 basis combinations have even Y-count.
    int deterministic = 0;
    for (int combo = 0; combo < 8; ++combo) {
        int y = 0;
        for (int u = 0; u < 3; ++u) y += combo >> u & 1;
        if (y % 2 == 0) ++deterministic;
    }
    CHECK(deterministic == 4);

    ConferenceStats stats;
    const auto report =
        conference_key(3, 4000, BasisMode::Dual, 32, Eavesdropper::None(), &stats);
    CHECK(report.all_pass());
    CHECK(stats.product_violations == 0);
    CHECK(stats.agreement_rate == 1.0);
    // 5 sigma around 1/2.
    CHECK(std::abs(stats.sift_rate - 0.5) < 5 * 0.5 / std::sqrt(4000.0));
}

TEST_CASE("two-user conferencing works as well") {
    ConferenceStats stats;
    conference_key(2, 500, BasisMode::Single, 33, Eavesdropper::None(), &stats);
    CHECK(stats.agreement_rate == 1.0);
}

TEST_CASE("intercept-resend corrupts keys and kills the XXX signal") {
    ConferenceStats stats;
    const auto report = conference_key(3, 4000, BasisMode::Single, 34,
                                       Eavesdropper::InterceptResend(1), &stats);
    CHECK(report.all_pass());
    CHECK(stats.agreement_rate < 1.0);
    CHECK(std::abs(stats.xxx_estimate) < 5.0 / std::sqrt(4000.0));
    // The collapse makes outcomes independent coin flips, so kept-round key
    // errors sit near 1/2.
    const double error_rate = 1.0 - stats.agreement_rate;
    CHECK(std::abs(error_rate - 0.5) < 5 * 0.5 / std::sqrt(4000.0));
}

TEST_CASE("conference validation") {
    CHECK_THROWS_AS(conference_key(1, 10, BasisMode::Single, 0), std::invalid_argument);
    CHECK_THROWS_AS(conference_key(3, 0, BasisMode::Single, 0), std::invalid_argument);
    CHECK_THROWS_AS(
        conference_key(3, 10, BasisMode::Single, 0, Eavesdropper::InterceptResend(3)),
        std::invalid_argument);
}
