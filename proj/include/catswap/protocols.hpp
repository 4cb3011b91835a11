#pragma once

// End-to-end protocol scenarios on top of the state engine and the cat
// calculus: exchange-network entanglement distribution, cat growth,
// multiparty superdense coding, probabilistic amplitude-error correction,
// and conferencing key agreement with eavesdrop detection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "catswap/catalg.hpp"
#include "catswap/circuits.hpp"
#include "catswap/report.hpp"
#include "catswap/rng.hpp"
#include "catswap/state.hpp"

namespace catswap {

// Run mode for protocols that support both exact outcome enumeration and
// Born-sampled trials.
struct Mode {
    bool exhaustive = true;
    int trials = 0;

    static Mode Exhaustive() { return Mode{true, 0}; }
    static Mode Sampled(int trials) {
        if (trials < 1) throw std::invalid_argument("sampled mode needs trials >= 1");
        return Mode{false, trials};
    }
    std::string str() const {
        return exhaustive ? "exhaustive" : "sampled(" + std::to_string(trials) + ")";
    }
};

namespace detail {

inline std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
    const double u = uniform_unit(rng);
    double acc = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return probs.size() - 1;
}

}  // namespace detail

// -------------------------------------------------------------------------
// Exchange network (star topology around a central node)

struct BellPairAssignment {
    int user_qubit = 0;
    int exchange_qubit = 0;
    CatLabel label;  // Bell label over (user_qubit, exchange_qubit)
};

struct NetworkTopology {
    std::vector<int> users;  // user ids
    int exchange_node = 0;   // id of the central exchange (bookkeeping only)
    std::vector<BellPairAssignment> pairs;  // pairs[i] belongs to users[i]
};

// Star layout: user i holds qubit 2i, the exchange holds qubit 2i+1, and
// every pair starts in Phi+ (pattern "00", +).
inline NetworkTopology make_star_topology(int n_users) {
    if (n_users < 2) throw std::invalid_argument("topology needs at least 2 users");
    NetworkTopology t;
    t.exchange_node = n_users;  // one id above the last user
    for (int i = 0; i < n_users; ++i) {
        t.users.push_back(i);
        t.pairs.push_back({2 * i, 2 * i + 1, bell_label(2 * i, 2 * i + 1)});
    }
    return t;
}

inline void validate_topology(const NetworkTopology& t) {
    if (t.users.size() < 2) throw std::invalid_argument("topology needs at least 2 users");
    if (t.pairs.size() != t.users.size()) {
        throw std::invalid_argument("every user needs exactly one Bell pair");
    }
    std::vector<int> all;
    for (const auto& p : t.pairs) {
        validate_label(p.label);
        if (p.label.qubits.size() != 2) {
            throw std::invalid_argument("pair labels must be Bell labels");
        }
        if ((p.label.qubits[0] != p.user_qubit || p.label.qubits[1] != p.exchange_qubit) &&
            (p.label.qubits[1] != p.user_qubit || p.label.qubits[0] != p.exchange_qubit)) {
            throw std::invalid_argument("pair label must cover the pair's two qubits");
        }
        all.push_back(p.user_qubit);
        all.push_back(p.exchange_qubit);
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw std::invalid_argument("pair qubit ids must be globally disjoint");
    }
}

// Projects the chosen users' exchange-side qubits onto the cat basis.
// Every outcome leaves those users' own qubits in a cat state; the other
// users' pairs stay in their original Bell states. The outcome records are
// the classical message the exchange must broadcast.
inline ProtocolReport exchange_entangle(const NetworkTopology& topology,
                                        const std::vector<int>& subset_users,
                                        const Mode& mode = Mode::Exhaustive(),
                                        std::uint64_t seed = 0) {
    validate_topology(topology);
    if (subset_users.size() < 2) throw std::invalid_argument("subset needs at least 2 users");
    std::set<int> subset(subset_users.begin(), subset_users.end());
    if (subset.size() != subset_users.size()) {
        throw std::invalid_argument("subset users must be distinct");
    }

    std::vector<std::size_t> subset_pos, untouched_pos;
    for (int u : subset) {
        const auto it = std::find(topology.users.begin(), topology.users.end(), u);
        if (it == topology.users.end()) {
            throw std::invalid_argument("subset user " + std::to_string(u) + " unknown");
        }
        subset_pos.push_back(std::size_t(it - topology.users.begin()));
    }
    for (std::size_t i = 0; i < topology.users.size(); ++i) {
        if (!subset.count(topology.users[i])) untouched_pos.push_back(i);
    }

    // Full network state over every pair.
    std::vector<CatLabel> all_pairs;
    for (const auto& p : topology.pairs) all_pairs.push_back(p.label);
    auto [state, ids] = product_of_cats<double>(all_pairs);

    std::vector<int> measured;  // exchange qubits of the subset, user order
    for (std::size_t i : subset_pos) measured.push_back(topology.pairs[i].exchange_qubit);

    std::map<int, int> sim_index;
    for (std::size_t i = 0; i < ids.size(); ++i) sim_index[ids[i]] = static_cast<int>(i);
    std::vector<int> measured_sim;
    for (int q : measured) measured_sim.push_back(sim_index.at(q));

    std::vector<int> residual_ids;
    {
        std::set<int> measured_set(measured.begin(), measured.end());
        for (int id : ids) {
            if (!measured_set.count(id)) residual_ids.push_back(id);
        }
    }
    std::map<int, int> residual_index;
    for (std::size_t i = 0; i < residual_ids.size(); ++i) {
        residual_index[residual_ids[i]] = static_cast<int>(i);
    }

    std::vector<int> user_qubits;  // subset users' own qubits, ascending user order
    for (std::size_t i : subset_pos) user_qubits.push_back(topology.pairs[i].user_qubit);

    // Prediction route: the subset pairs form a swap scenario of their own.
    SwapScenario prediction_scenario;
    for (std::size_t i : subset_pos) {
        prediction_scenario.cats.push_back(topology.pairs[i].label);
        prediction_scenario.measured.push_back({topology.pairs[i].exchange_qubit});
    }

    ProtocolReport report;
    report.scenario = "exchange";
    report.seed = seed;
    report.mode = mode.str();

    const int p = static_cast<int>(measured.size());
    const double uniform = std::ldexp(1.0, -p);
    double total = 0;
    double worst_uniform = 0, worst_entropy = 0, worst_pair_fidelity = 0;
    bool all_cats = true, prediction_agrees = true;

    std::vector<double> probs;
    for (const CatLabel& slot_outcome : enumerate_cat_basis(p)) {
        CatLabel outcome = slot_outcome;
        outcome.qubits = measured;

        const auto proj = project_subset(state, measured_sim, cat_state<double>(slot_outcome));
        total += proj.probability;
        probs.push_back(proj.probability);
        worst_uniform = std::max(worst_uniform, std::abs(proj.probability - uniform));
        if (!proj.valid) {
            all_cats = false;
            continue;
        }

        // Peel the untouched pairs off with a projection whose probability is
        // their joint fidelity to the original Bell labels.
        StateVectord user_state = proj.residual;
        if (!untouched_pos.empty()) {
            StateVectord peel;
            std::vector<int> peel_qubits;
            bool first = true;
            for (std::size_t i : untouched_pos) {
                const auto& label = topology.pairs[i].label;
                auto pair_state = cat_state<double>(label);
                peel = first ? pair_state : tensor(peel, pair_state);
                first = false;
                for (int q : label.qubits) peel_qubits.push_back(residual_index.at(q));
            }
            const auto peeled = project_subset(proj.residual, peel_qubits, peel);
            worst_pair_fidelity = std::max(worst_pair_fidelity,
                                           std::abs(peeled.probability - 1.0));
            if (!peeled.valid) {
                all_cats = false;
                continue;
            }
            user_state = peeled.residual;
        }

        std::vector<int> sorted_user_qubits = user_qubits;
        std::sort(sorted_user_qubits.begin(), sorted_user_qubits.end());
        const auto found = identify_cat(user_state, sorted_user_qubits);
        OutcomeRecord rec;
        rec.outcome = canonicalized(outcome);
        rec.probability = proj.probability;
        if (found) {
            rec.residual = found->label;
            for (int q = 0; q < user_state.num_qubits; ++q) {
                worst_entropy = std::max(worst_entropy,
                                         std::abs(subsystem_entropy(user_state, {q}) - 1.0));
            }
        } else {
            all_cats = false;
        }

        const auto predicted = swap_predict(prediction_scenario, outcome);
        if (!predicted || !found || predicted->residual != found->label ||
            std::abs(predicted->probability - proj.probability) > 1e-10) {
            prediction_agrees = false;
        }
        report.outcomes.push_back(std::move(rec));
    }

    report.checks.push_back(check_close("outcome probabilities sum to 1", 1.0, total, 1e-10));
    report.checks.push_back(check_close("outcomes uniform at 2^-" + std::to_string(p), 0.0,
                                        worst_uniform, 1e-10));
    report.checks.push_back(check_true("subset users share a cat state on every outcome",
                                       all_cats));
    report.checks.push_back(check_close("subset users' single-qubit entropies are 1", 0.0,
                                        worst_entropy, 1e-9));
    if (!untouched_pos.empty()) {
        report.checks.push_back(check_close("untouched pairs keep their Bell labels", 0.0,
                                            worst_pair_fidelity, 1e-10));
    }
    report.checks.push_back(check_true("symbolic prediction matches simulation",
                                       prediction_agrees));

    if (!mode.exhaustive) {
        Rng rng = substream(seed, 0);
        std::vector<int> counts(probs.size(), 0);
        for (int t = 0; t < mode.trials; ++t) counts[detail::sample_index(probs, rng)]++;
        bool within = true;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            const double sigma = std::sqrt(probs[i] * (1 - probs[i]) * mode.trials);
            if (std::abs(counts[i] - probs[i] * mode.trials) > 4 * sigma + 1) within = false;
            report.outcomes[i].note = "count=" + std::to_string(counts[i]) + "/" +
                                      std::to_string(mode.trials);
        }
        report.checks.push_back(check_true("sampled outcome frequencies within 4 sigma",
                                           within));
    }
    return report;
}

// -------------------------------------------------------------------------
// Growing cats with Bell measurements

// Takes an n-cat and a GHZ triplet, Bell-measures one qubit from each; all
// four outcomes leave the remaining n+1 qubits in a cat state.
inline ProtocolReport grow_cat(int n, const Mode& mode = Mode::Exhaustive(),
                               std::uint64_t seed = 0) {
    if (n < 2 || n > 10) throw std::invalid_argument("grow_cat supports 2 <= n <= 10");

    SwapScenario sc;
    std::vector<int> start_qubits(static_cast<std::size_t>(n));
    std::iota(start_qubits.begin(), start_qubits.end(), 0);
    sc.cats.push_back(CatLabel{start_qubits, std::string(std::size_t(n), '0'), +1});
    sc.cats.push_back(ghz_label(n, n + 1, n + 2));
    sc.measured = {{n - 1}, {n}};

    ProtocolReport report;
    report.scenario = "grow";
    report.seed = seed;
    report.mode = mode.str();

    const auto entries = swap_simulate<double>(sc);
    double total = 0;
    bool all_grown = true, prediction_agrees = true;
    std::vector<double> probs;
    for (const auto& entry : entries) {
        total += entry.probability;
        probs.push_back(entry.probability);
        OutcomeRecord rec;
        rec.outcome = entry.outcome;
        rec.probability = entry.probability;
        rec.residual = entry.residual;
        if (!entry.residual || entry.residual->qubits.size() != std::size_t(n) + 1) {
            all_grown = false;
        }
        const auto predicted = swap_predict(sc, entry.outcome);
        if (!predicted || !entry.residual || predicted->residual != *entry.residual ||
            std::abs(predicted->probability - entry.probability) > 1e-10) {
            prediction_agrees = false;
        }
        report.outcomes.push_back(std::move(rec));
    }

    report.checks.push_back(check_close("Bell outcomes sum to 1", 1.0, total, 1e-10));
    report.checks.push_back(check_true(
        "every Bell outcome yields a " + std::to_string(n + 1) + "-qubit cat", all_grown));
    report.checks.push_back(check_true("symbolic prediction matches simulation",
                                       prediction_agrees));

    if (n == 2) {
        // Alternative route: three Bell pairs, one qubit from each projected
        // onto the GHZ basis, leaves the partners in a GHZ state.
        SwapScenario three;
        three.cats = {bell_label(0, 1), bell_label(2, 3), bell_label(4, 5)};
        three.measured = {{1}, {3}, {5}};
        bool ghz_route = true;
        double route_total = 0;
        for (const auto& entry : swap_simulate<double>(three)) {
            route_total += entry.probability;
            if (!entry.residual || entry.residual->qubits.size() != 3) ghz_route = false;
            if (std::abs(entry.probability - 0.125) > 1e-10) ghz_route = false;
        }
        ghz_route = ghz_route && std::abs(route_total - 1.0) <= 1e-10;
        report.checks.push_back(
            check_true("three Bell pairs + GHZ measurement also yield a GHZ", ghz_route));
    }

    if (!mode.exhaustive) {
        Rng rng = substream(seed, 0);
        std::vector<int> counts(probs.size(), 0);
        for (int t = 0; t < mode.trials; ++t) counts[detail::sample_index(probs, rng)]++;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            report.outcomes[i].note = "count=" + std::to_string(counts[i]) + "/" +
                                      std::to_string(mode.trials);
        }
    }
    return report;
}

// -------------------------------------------------------------------------
// Multiparty superdense coding

struct SuperdenseAssignment {
    int receiver = 0;              // user holding the undisturbed qubit
    std::vector<int> senders;      // remaining users, message order
    int designated = 0;            // index into senders of the 4-operation sender
};

// Users 0..n share an (n+1)-cat, user k holding qubit k. User 0 receives;
// the first sender carries the 4-element operation set {I, X, Z, ZX}.
inline SuperdenseAssignment default_superdense_assignment(int n) {
    if (n < 1) throw std::invalid_argument("superdense coding needs n >= 1 senders");
    SuperdenseAssignment a;
    a.receiver = 0;
    for (int u = 1; u <= n; ++u) a.senders.push_back(u);
    a.designated = 0;
    return a;
}

// Allowed local unitaries of a sender: the designated one encodes two bits
// with {I, X, Z, ZX}, everyone else encodes one bit with {I, X}. The set
// sizes multiply to 2^(n+1), one combination per message.
inline std::vector<std::string> operation_set(const SuperdenseAssignment& a, int sender_index) {
    if (sender_index < 0 || sender_index >= static_cast<int>(a.senders.size())) {
        throw std::invalid_argument("sender index out of range");
    }
    if (sender_index == a.designated) return {"I", "X", "Z", "ZX"};
    return {"I", "X"};
}

inline void validate_assignment(int n, const SuperdenseAssignment& a) {
    if (static_cast<int>(a.senders.size()) != n) {
        throw std::invalid_argument("assignment must list exactly n senders");
    }
    if (a.designated < 0 || a.designated >= n) {
        throw std::invalid_argument("designated sender index out of range");
    }
    std::set<int> users(a.senders.begin(), a.senders.end());
    users.insert(a.receiver);
    if (users.size() != std::size_t(n) + 1) {
        throw std::invalid_argument("assignment users must be distinct");
    }
    for (int u : users) {
        if (u < 0 || u > n) throw std::invalid_argument("assignment user ids must be 0..n");
    }
}

struct SuperdenseRun {
    std::string decoded;
    CatLabel encoded_label;  // cat label the message mapped to
};

// One round trip: encode `message` with local unitaries, then identify the
// resulting cat with the reversed generator circuit and invert the encoding.
// Message layout: senders in listed order; the designated sender consumes two
// bits (first -> Z, second -> X), every other sender one bit (-> X).
inline SuperdenseRun superdense_roundtrip_once(int n, const std::string& message,
                                               const SuperdenseAssignment& assignment) {
    if (n < 1 || n > 10) throw std::invalid_argument("superdense coding supports 1 <= n <= 10");
    validate_assignment(n, assignment);
    if (static_cast<int>(message.size()) != n + 1) {
        throw std::invalid_argument("message must have n+1 bits");
    }
    for (char c : message) {
        if (c != '0' && c != '1') throw std::invalid_argument("message must be bits");
    }

    std::vector<int> qubits(std::size_t(n) + 1);
    std::iota(qubits.begin(), qubits.end(), 0);
    auto state = cat_state<double>(CatLabel{qubits, std::string(std::size_t(n) + 1, '0'), +1});

    std::size_t cursor = 0;
    for (std::size_t s = 0; s < assignment.senders.size(); ++s) {
        const int qubit = assignment.senders[s];
        if (static_cast<int>(s) == assignment.designated) {
            if (message[cursor++] == '1') state = apply_gate(std::move(state), pauli_z(qubit));
            if (message[cursor++] == '1') state = apply_gate(std::move(state), pauli_x(qubit));
        } else {
            if (message[cursor++] == '1') state = apply_gate(std::move(state), pauli_x(qubit));
        }
    }

    const auto readout = analyze_cat(state, qubits);

    // Invert the encoding from the identified label.
    SuperdenseRun run;
    run.encoded_label = readout.label;
    std::map<int, char> bit_for_qubit;
    for (std::size_t i = 0; i < readout.label.qubits.size(); ++i) {
        bit_for_qubit[readout.label.qubits[i]] = readout.label.pattern[i];
    }
    for (std::size_t s = 0; s < assignment.senders.size(); ++s) {
        const int qubit = assignment.senders[s];
        if (static_cast<int>(s) == assignment.designated) {
            run.decoded += readout.label.sign < 0 ? '1' : '0';
        }
        run.decoded += bit_for_qubit.at(qubit);
    }
    return run;
}

// Round-trips either a single message or, when message is empty, all 2^(n+1)
// messages exhaustively; checks decoding and label distinctness.
inline ProtocolReport superdense_roundtrip(int n, const std::string& message,
                                           const SuperdenseAssignment& assignment) {
    ProtocolReport report;
    report.scenario = "superdense";
    report.mode = message.empty() ? "exhaustive" : "single-message";

    std::vector<std::string> messages;
    if (message.empty()) {
        for (std::uint64_t w = 0; w < (1ULL << (n + 1)); ++w) {
            std::string msg(std::size_t(n) + 1, '0');
            for (int b = 0; b <= n; ++b) {
                if (w >> (n - b) & 1ULL) msg[std::size_t(b)] = '1';
            }
            messages.push_back(msg);
        }
    } else {
        messages.push_back(message);
    }

    bool all_decoded = true;
    std::set<std::string> label_keys;
    for (const auto& msg : messages) {
        const auto run = superdense_roundtrip_once(n, msg, assignment);
        all_decoded = all_decoded && run.decoded == msg;
        label_keys.insert(to_string(run.encoded_label));
        OutcomeRecord rec;
        rec.outcome = run.encoded_label;
        rec.probability = 1.0;  // decoding is deterministic
        rec.note = "message=" + msg + " decoded=" + run.decoded;
        report.outcomes.push_back(std::move(rec));
    }

    report.checks.push_back(check_true("all messages decode correctly", all_decoded));
    if (message.empty()) {
        const bool distinct = label_keys.size() == messages.size();
        report.checks.push_back(check_true(
            "messages map to " + std::to_string(messages.size()) + " distinct cat labels",
            distinct));
    }
    report.circuits.push_back({"analyzer", reversed(cat_generator_circuit(n + 1))});
    return report;
}

struct InformationRates {
    double r1 = 0;  // multiparty scheme: n+1 bits per (t_h + n t_c)
    double r2 = 0;  // pairwise superdense coding: 2n bits per n (t_h + t_c)
    int particles_multiparty = 0;  // n + 1
    int particles_pairwise = 0;    // 2n
};

inline InformationRates information_rates(int n, double t_h, double t_c) {
    if (n < 1) throw std::invalid_argument("information_rates needs n >= 1");
    if (!(t_h > 0) || !(t_c > 0)) throw std::invalid_argument("gate times must be positive");
    InformationRates r;
    r.r1 = (n + 1) / (t_h + n * t_c);
    r.r2 = 2.0 * n / (n * (t_h + t_c));
    r.particles_multiparty = n + 1;
    r.particles_pairwise = 2 * n;
    return r;
}

// -------------------------------------------------------------------------
// Probabilistic amplitude-error correction by swapping

// Two propagation-damaged pairs cos(theta)|01> + sin(theta)|10> on (0,1) and
// (2,3); a Bell measurement on (1,2) either repairs the distant pair (0,3)
// into (|00> +/- |11>)/sqrt(2) -- the Phi outcomes, probability
// sin^2(2 theta)/2 together -- or degrades it further (the Psi outcomes).
inline ProtocolReport amplitude_swap_correct(double theta,
                                             const Mode& mode = Mode::Exhaustive(),
                                             std::uint64_t seed = 0) {
    const double half_pi = std::asin(1.0);
    if (!(theta > 0) || !(theta < half_pi)) {
        throw std::invalid_argument("theta must lie strictly inside (0, pi/2)");
    }

    auto damaged_pair = [&]() {
        auto s = zero_state<double>(2);
        s.amplitudes[2] = std::cos(theta);  // |01>: first qubit 0, second qubit 1
        s.amplitudes[1] = std::sin(theta);  // |10>
        return s;
    };
    const auto state = tensor(damaged_pair(), damaged_pair());

    const double s2 = std::sin(2 * theta);
    const double c2 = std::cos(2 * theta);
    const double phi_prob = s2 * s2 / 4;            // each of Phi+-
    const double psi_prob = (1 + c2 * c2) / 4;      // each of Psi+-
    const double input_entropy = subsystem_entropy(damaged_pair(), {0});

    ProtocolReport report;
    report.scenario = "amplitude";
    report.seed = seed;
    report.mode = mode.str();

    double total = 0, success_total = 0, failure_total = 0;
    double worst_prob = 0, worst_success_fidelity = 0;
    bool failure_less_entangled = true;
    std::vector<double> probs;
    for (const CatLabel& slot_outcome : enumerate_cat_basis(2)) {
        const bool success = slot_outcome.pattern == "00";  // Phi outcomes
        const auto proj = project_subset(state, {1, 2}, cat_state<double>(slot_outcome));
        total += proj.probability;
        probs.push_back(proj.probability);
        (success ? success_total : failure_total) += proj.probability;
        worst_prob = std::max(worst_prob,
                              std::abs(proj.probability - (success ? phi_prob : psi_prob)));

        OutcomeRecord rec;
        CatLabel outcome = slot_outcome;
        outcome.qubits = {1, 2};
        rec.outcome = outcome;
        rec.probability = proj.probability;
        if (proj.valid) {
            if (success) {
                // Residual should be (|00> + sign|11>)/sqrt(2) on (0,3).
                const auto expected =
                    cat_state<double>(CatLabel{{0, 1}, "00", slot_outcome.sign});
                worst_success_fidelity = std::max(
                    worst_success_fidelity, std::abs(fidelity(proj.residual, expected) - 1.0));
                const auto found = identify_cat(proj.residual, {0, 3});
                if (found) rec.residual = found->label;
            } else {
                const double residual_entropy = subsystem_entropy(proj.residual, {0});
                rec.note = "residual entropy " + format_value(residual_entropy) +
                           " vs input " + format_value(input_entropy);
                if (std::abs(theta - half_pi / 2) > 1e-12 &&
                    !(residual_entropy < input_entropy)) {
                    failure_less_entangled = false;
                }
            }
        }
        report.outcomes.push_back(std::move(rec));
    }

    report.checks.push_back(check_close("outcome probabilities sum to 1", 1.0, total, 1e-10));
    report.checks.push_back(check_close("per-outcome probabilities match closed form", 0.0,
                                        worst_prob, 1e-10));
    report.checks.push_back(check_close("success probability sin^2(2 theta)/2",
                                        s2 * s2 / 2, success_total, 1e-10));
    report.checks.push_back(check_close("failure probability (1+cos^2(2 theta))/2",
                                        (1 + c2 * c2) / 2, failure_total, 1e-10));
    report.checks.push_back(check_close("success residuals are (|00>+-|11>)/sqrt(2)", 0.0,
                                        worst_success_fidelity, 1e-10));
    report.checks.push_back(check_true("failure residuals are less entangled than the input",
                                       failure_less_entangled));

    if (!mode.exhaustive) {
        Rng rng = substream(seed, 0);
        std::vector<int> counts(probs.size(), 0);
        for (int t = 0; t < mode.trials; ++t) counts[detail::sample_index(probs, rng)]++;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            report.outcomes[i].note += (report.outcomes[i].note.empty() ? "" : "; ");
            report.outcomes[i].note += "count=" + std::to_string(counts[i]) + "/" +
                                       std::to_string(mode.trials);
        }
    }
    return report;
}

// -------------------------------------------------------------------------
// Conferencing key agreement

enum class BasisMode { Single, Dual };

struct Eavesdropper {
    bool active = false;
    int channel_user = 0;  // whose exchange->user channel is tapped

    static Eavesdropper None() { return {}; }
    static Eavesdropper InterceptResend(int channel_user) {
        return {true, channel_user};
    }
};

// GHZ stabilizer set for n qubits: X on every qubit (+), X-strings with Y on
// exactly two positions (-), and all Z_i Z_j pairs (+). Every element has
// expectation +1 on the intact cat (|0..0> + |1..1>)/sqrt(2).
inline std::vector<PauliString> ghz_stabilizer_set(int n) {
    if (n < 2) throw std::invalid_argument("stabilizer set needs n >= 2");
    std::vector<PauliString> out;
    out.push_back(pauli_string(std::string(std::size_t(n), 'X'), +1));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::string letters(std::size_t(n), 'X');
            letters[std::size_t(i)] = 'Y';
            letters[std::size_t(j)] = 'Y';
            out.push_back(pauli_string(letters, -1));
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::string letters(std::size_t(n), 'I');
            letters[std::size_t(i)] = 'Z';
            letters[std::size_t(j)] = 'Z';
            out.push_back(pauli_string(letters, +1));
        }
    }
    return out;
}

inline std::vector<std::pair<PauliString, double>> stabilizer_check(const StateVectord& state,
                                                                    int n) {
    if (state.num_qubits != n) {
        throw std::invalid_argument("stabilizer_check: state size does not match n");
    }
    std::vector<std::pair<PauliString, double>> out;
    for (const auto& p : ghz_stabilizer_set(n)) {
        out.emplace_back(p, pauli_expectation(state, p));
    }
    return out;
}

struct ConferenceStats {
    int rounds = 0;
    int kept = 0;
    int agreed = 0;
    int product_violations = 0;
    int xxx_rounds = 0;          // kept rounds where every user measured X
    double xxx_estimate = 0.0;   // mean outcome product over those rounds
    double sift_rate = 0.0;
    double agreement_rate = 0.0;
};

// Runs `rounds` conferencing rounds. Each round distributes a fresh n-GHZ;
// users measure X (single mode) or X/Y chosen uniformly (dual mode). Dual
// rounds are kept only when the Y-count is even, in which case the outcome
// product is deterministic: +1 for Y-count = 0 mod 4, -1 for 2 mod 4. Each
// kept round yields one shared key bit: user 0 keeps their raw outcome and
// every other user corrects their own outcome with the announced outcomes of
// the remaining non-reference users plus the expected product.
inline ProtocolReport conference_key(int n_users, int rounds, BasisMode basis_mode,
                                     std::uint64_t seed,
                                     const Eavesdropper& eve = Eavesdropper::None(),
                                     ConferenceStats* stats_out = nullptr) {
    if (n_users < 2) throw std::invalid_argument("conferencing needs at least 2 users");
    if (rounds < 1) throw std::invalid_argument("conferencing needs at least 1 round");
    if (eve.active && (eve.channel_user < 0 || eve.channel_user >= n_users)) {
        throw std::invalid_argument("eavesdropped channel out of range");
    }

    Eigen::Matrix2cd s_dagger;
    s_dagger << 1, 0, 0, std::complex<double>(0, -1);

    std::vector<int> qubits(static_cast<std::size_t>(n_users));
    std::iota(qubits.begin(), qubits.end(), 0);
    const CatLabel ghz{qubits, std::string(std::size_t(n_users), '0'), +1};

    int kept = 0, agreed = 0, product_violations = 0;
    int xxx_rounds = 0;
    long long xxx_sum = 0;
    std::vector<std::string> keys(static_cast<std::size_t>(n_users));

    for (int round = 0; round < rounds; ++round) {
        Rng rng = substream(seed, std::uint64_t(round));
        auto state = cat_state<double>(ghz);

        if (eve.active) {
            auto tapped = measure_qubit_projective(state, eve.channel_user, rng);
            state = std::move(tapped.residual);
        }

        std::vector<int> bases(std::size_t(n_users), 0);  // 0 = X, 1 = Y
        if (basis_mode == BasisMode::Dual) {
            for (auto& b : bases) b = uniform_unit(rng) < 0.5 ? 1 : 0;
        }
        const int y_count = std::accumulate(bases.begin(), bases.end(), 0);
        const bool keep = y_count % 2 == 0;
        const int expected_product = (y_count % 4 == 0) ? +1 : -1;

        // Measure users in ascending order; after each removal the next
        // user's qubit is always local qubit 0.
        std::vector<int> bits(static_cast<std::size_t>(n_users));
        for (int u = 0; u < n_users; ++u) {
            if (bases[std::size_t(u)] == 1) {
                state = apply_single_qubit(std::move(state), 0, s_dagger);
            }
            state = apply_gate(std::move(state), hadamard(0));
            if (state.num_qubits == 1) {
                const double p1 = probability_of_bit(state, 0, 1);
                bits[std::size_t(u)] = uniform_unit(rng) < p1 ? 1 : 0;
            } else {
                auto m = measure_qubit(state, 0, rng);
                bits[std::size_t(u)] = m.bit;
                state = std::move(m.residual);
            }
        }

        if (!keep) continue;
        ++kept;

        int parity = 0;
        for (int b : bits) parity ^= b;
        const int product = parity ? -1 : +1;
        if (product != expected_product) ++product_violations;
        if (y_count == 0) {
            ++xxx_rounds;
            xxx_sum += product;
        }

        // Key derivation: user 0 keeps b_0; user j corrects with the other
        // non-reference outcomes and the expected product's sign.
        int others_parity = 0;
        for (int u = 1; u < n_users; ++u) others_parity ^= bits[std::size_t(u)];
        std::vector<int> key_bits(static_cast<std::size_t>(n_users));
        key_bits[0] = bits[0];
        for (int u = 1; u < n_users; ++u) {
            key_bits[std::size_t(u)] = bits[std::size_t(u)] ^
                                       (others_parity ^ bits[std::size_t(u)]) ^
                                       (expected_product < 0 ? 1 : 0);
        }
        bool round_agrees = true;
        for (int u = 0; u < n_users; ++u) {
            keys[std::size_t(u)] += key_bits[std::size_t(u)] ? '1' : '0';
            round_agrees = round_agrees && key_bits[std::size_t(u)] == key_bits[0];
        }
        if (round_agrees) ++agreed;
    }

    ProtocolReport report;
    report.scenario = "conference";
    report.seed = seed;
    report.mode = basis_mode == BasisMode::Single ? "single-basis" : "dual-basis";

    const double sift_rate = double(kept) / rounds;
    const double agreement_rate = kept ? double(agreed) / kept : 0.0;
    const double xxx_estimate = xxx_rounds ? double(xxx_sum) / xxx_rounds : 0.0;
    if (stats_out) {
        *stats_out = ConferenceStats{rounds, kept, agreed, product_violations,
                                     xxx_rounds, xxx_estimate, sift_rate, agreement_rate};
    }

    report.checks.push_back(check_close("sift rate", basis_mode == BasisMode::Single ? 1.0 : 0.5,
                                        sift_rate,
                                        basis_mode == BasisMode::Single
                                            ? 0.0
                                            : 5.0 * 0.5 / std::sqrt(double(rounds))));
    if (!eve.active) {
        report.checks.push_back(check_true("outcome product deterministic in every kept round",
                                           product_violations == 0,
                                           std::to_string(product_violations) + " violations"));
        report.checks.push_back(check_close("key agreement rate", 1.0, agreement_rate, 0.0));
        if (xxx_rounds > 0) {
            report.checks.push_back(
                check_close("measured XXX product", 1.0, xxx_estimate, 0.0));
        }
    } else {
        report.checks.push_back(check_true("eavesdropper induces key errors",
                                           kept > 0 && agreed < kept,
                                           format_value(1.0 - agreement_rate) + " error rate"));
        if (xxx_rounds > 0) {
            report.checks.push_back(check_close(
                "measured XXX product driven to 0", 0.0, xxx_estimate,
                5.0 / std::sqrt(double(xxx_rounds))));
        }
    }

    // Exact stabilizer expectations on the intact state, for the report.
    const auto intact = stabilizer_check(cat_state<double>(ghz), n_users);
    bool stabilizers_intact = true;
    for (const auto& [p, value] : intact) {
        if (std::abs(value - 1.0) > 1e-12) stabilizers_intact = false;
    }
    report.checks.push_back(check_true("intact-state stabilizer expectations are all +1",
                                       stabilizers_intact));

    for (int u = 0; u < n_users; ++u) {
        OutcomeRecord rec;
        rec.probability = agreement_rate;
        rec.note = "user " + std::to_string(u) + " key " + keys[std::size_t(u)];
        report.outcomes.push_back(std::move(rec));
    }
    return report;
}

}  // namespace catswap
