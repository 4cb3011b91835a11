#pragma once

// Symbolic cat-state calculus. A cat state over qubits (q_0..q_{n-1}) is
// (|u> + sign*|u^c>)/sqrt(2) with u a bitstring and u^c its complement;
// Bell states are the n=2 case, GHZ the n=3 case. Labels are canonicalized
// with pattern[0] == '0' so that u and u^c name the same state.
//
// The generalized swapping law is implemented twice: symbolically
// (swap_predict, a closed-form rule) and numerically (swap_simulate, full
// projection via the state-vector engine). The two routes must agree on
// every outcome; neither is trusted alone.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catswap/state.hpp"

namespace catswap {

struct CatLabel {
    std::vector<int> qubits;  // global qubit ids, distinct, listed order
    std::string pattern;      // pattern[i] is the u-bit of qubits[i]; pattern[0]=='0'
    int sign = +1;            // relative sign between the |u> and |u^c> branches

    friend bool operator==(const CatLabel&, const CatLabel&) = default;
};

inline CatLabel make_cat_label(std::vector<int> qubits, std::string pattern, int sign) {
    return CatLabel{std::move(qubits), std::move(pattern), sign};
}

// Bell pair shorthand: Phi (pattern "00") or Psi (pattern "01") with a sign.
inline CatLabel bell_label(int qa, int qb, bool psi = false, int sign = +1) {
    return CatLabel{{qa, qb}, psi ? "01" : "00", sign};
}

inline CatLabel ghz_label(int qa, int qb, int qc, int sign = +1) {
    return CatLabel{{qa, qb, qc}, "000", sign};
}

inline void validate_label(const CatLabel& label) {
    if (label.qubits.size() != label.pattern.size()) {
        throw std::invalid_argument("cat label pattern length must match qubit count");
    }
    if (label.qubits.empty()) throw std::invalid_argument("cat label must list qubits");
    if (label.sign != 1 && label.sign != -1) {
        throw std::invalid_argument("cat label sign must be +1/-1");
    }
    for (char c : label.pattern) {
        if (c != '0' && c != '1') throw std::invalid_argument("cat pattern must be 0/1");
    }
    std::vector<int> sorted = label.qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("cat label qubits must be distinct");
    }
}

// Canonical form: qubits ascending (pattern permuted along) and pattern[0]=='0'
// (complementing the whole pattern if needed; the sign is unchanged, only a
// global phase moves). Label equality is defined on this form.
inline CatLabel canonicalized(CatLabel label) {
    validate_label(label);
    std::vector<std::size_t> order(label.qubits.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return label.qubits[a] < label.qubits[b]; });
    CatLabel out;
    out.sign = label.sign;
    out.qubits.reserve(order.size());
    out.pattern.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.qubits.push_back(label.qubits[order[i]]);
        out.pattern[i] = label.pattern[order[i]];
    }
    if (out.pattern[0] == '1') {
        for (char& c : out.pattern) c = (c == '0') ? '1' : '0';
    }
    return out;
}

inline std::string to_string(const CatLabel& label) {
    std::string s = "(";
    for (std::size_t i = 0; i < label.qubits.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(label.qubits[i]);
    }
    s += ")";
    s += label.pattern;
    s += label.sign > 0 ? '+' : '-';
    return s;
}

// (|u> + sign*|u^c>)/sqrt(2) over the label's qubits in listed order: local
// qubit i of the returned state is label.qubits[i].
template <typename Scalar = double>
StateVector<Scalar> cat_state(const CatLabel& label) {
    validate_label(label);
    if (label.qubits.size() < 2) {
        throw std::invalid_argument("cat_state needs at least 2 qubits; single-qubit "
                                    "labels are degenerate markers");
    }
    const int n = static_cast<int>(label.qubits.size());
    std::uint64_t u = 0;
    for (int i = 0; i < n; ++i) {
        if (label.pattern[i] == '1') u |= 1ULL << i;
    }
    const std::uint64_t uc = ~u & ((1ULL << n) - 1);
    auto s = zero_state<Scalar>(n);
    const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
    s.amplitudes[Eigen::Index(u)] = r;
    s.amplitudes[Eigen::Index(uc)] = Scalar(label.sign) * r;
    return s;
}

// All 2^p cat labels over local qubits 0..p-1: 2^(p-1) canonical patterns
// times 2 signs, in lexicographic (pattern, sign) order with '+' first.
// They form a complete orthonormal basis of the p-qubit space.
inline std::vector<CatLabel> enumerate_cat_basis(int p) {
    if (p < 2 || p > 12) {
        throw std::invalid_argument("cat basis enumeration supports 2 <= p <= 12");
    }
    std::vector<int> qubits(p);
    for (int i = 0; i < p; ++i) qubits[i] = i;
    std::vector<CatLabel> out;
    out.reserve(std::size_t(1) << p);
    for (std::uint64_t tail = 0; tail < (1ULL << (p - 1)); ++tail) {
        std::string pattern(p, '0');
        // lexicographic: pattern read left to right is (slot 0, slot 1, ...)
        for (int i = 1; i < p; ++i) {
            if (tail >> (p - 1 - i) & 1ULL) pattern[i] = '1';
        }
        for (int sign : {+1, -1}) {
            out.push_back(CatLabel{qubits, pattern, sign});
        }
    }
    return out;
}

struct IdentifiedCat {
    CatLabel label;     // canonical, over the caller-supplied qubit ids
    double phase = 0.0; // recovered global phase in radians
};

// Exhaustive overlap of a normalized state against the cat basis: returns the
// unique label whose state matches up to global phase within tol, else
// nothing. The overlap with (|u> + s|u^c>)/sqrt(2) only touches the two
// amplitudes at u and u^c.
template <typename Scalar>
std::optional<IdentifiedCat> identify_cat(const StateVector<Scalar>& s,
                                          const std::vector<int>& qubit_ids,
                                          double tol = 1e-10) {
    if (static_cast<int>(qubit_ids.size()) != s.num_qubits) {
        throw std::invalid_argument("identify_cat: qubit id list does not match state size");
    }
    if (s.num_qubits < 2 || s.num_qubits > 12) return std::nullopt;
    const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
    for (const CatLabel& candidate : enumerate_cat_basis(s.num_qubits)) {
        std::uint64_t u = 0;
        for (int i = 0; i < s.num_qubits; ++i) {
            if (candidate.pattern[i] == '1') u |= 1ULL << i;
        }
        const std::uint64_t uc = ~u & ((1ULL << s.num_qubits) - 1);
        const std::complex<Scalar> overlap =
            r * (s.amplitudes[Eigen::Index(u)] +
                 Scalar(candidate.sign) * s.amplitudes[Eigen::Index(uc)]);
        if (std::norm(overlap) >= Scalar(1) - Scalar(tol)) {
            CatLabel named = candidate;
            named.qubits = qubit_ids;
            return IdentifiedCat{canonicalized(named), std::arg(overlap)};
        }
    }
    return std::nullopt;
}

// -------------------------------------------------------------------------
// Swap scenarios

struct SwapScenario {
    std::vector<CatLabel> cats;              // disjoint qubit sets
    std::vector<std::vector<int>> measured;  // per-cat ordered sublist (p_m picks)
    // A cat may only be fully consumed (p_m == n_m) in a terminal scenario.
    bool terminal = false;
};

namespace detail {

inline bool contains(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace detail

inline void validate_scenario(const SwapScenario& sc) {
    if (sc.cats.empty()) throw std::invalid_argument("scenario needs at least one cat");
    if (sc.measured.size() != sc.cats.size()) {
        throw std::invalid_argument("scenario needs one measured list per cat");
    }
    std::vector<int> all;
    for (const auto& cat : sc.cats) {
        validate_label(cat);
        if (cat.qubits.size() < 2) {
            throw std::invalid_argument("swap scenarios reject degenerate single-qubit cats");
        }
        all.insert(all.end(), cat.qubits.begin(), cat.qubits.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw std::invalid_argument("cats must occupy disjoint qubit sets");
    }

    int total_measured = 0;
    int total_unmeasured_of_measured_cats = 0;
    for (std::size_t m = 0; m < sc.cats.size(); ++m) {
        const auto& picks = sc.measured[m];
        std::vector<int> sorted = picks;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("measured picks must be distinct");
        }
        for (int q : picks) {
            if (!detail::contains(sc.cats[m].qubits, q)) {
                throw std::invalid_argument("measured qubit " + std::to_string(q) +
                                            " does not belong to its cat");
            }
        }
        if (picks.size() == sc.cats[m].qubits.size() && !sc.terminal) {
            throw std::invalid_argument("cat fully consumed; flag the scenario terminal");
        }
        total_measured += static_cast<int>(picks.size());
        if (!picks.empty()) {
            total_unmeasured_of_measured_cats +=
                static_cast<int>(sc.cats[m].qubits.size() - picks.size());
        }
    }
    if (total_measured < 2) {
        throw std::invalid_argument("at least 2 qubits must be measured (cat basis needs p >= 2)");
    }
    if (total_measured > 12) {
        throw std::invalid_argument("measured qubit count capped at 12");
    }
    if (total_unmeasured_of_measured_cats < 2) {
        throw std::invalid_argument("residual would have fewer than 2 qubits");
    }
    // identify_cat enumerates the residual's cat basis, which caps at 12.
    if (total_unmeasured_of_measured_cats > 12) {
        throw std::invalid_argument("residual qubit count capped at 12");
    }
    bool any_measured = false;
    for (const auto& picks : sc.measured) any_measured |= !picks.empty();
    if (!any_measured) throw std::invalid_argument("at least one cat must be measured");

    int total_qubits = 0;
    for (std::size_t m = 0; m < sc.cats.size(); ++m) {
        if (!sc.measured[m].empty()) total_qubits += static_cast<int>(sc.cats[m].qubits.size());
    }
    if (total_qubits > kMaxQubits) {
        throw std::invalid_argument("scenario exceeds the qubit cap");
    }
}

// Indices of cats that contribute measured qubits; cats with p_m = 0 pass
// through untouched and take no part in the swap.
inline std::vector<std::size_t> measured_cat_indices(const SwapScenario& sc) {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < sc.cats.size(); ++m) {
        if (!sc.measured[m].empty()) out.push_back(m);
    }
    return out;
}

// Measured qubits in scenario order: each measured cat's picks, cat by cat.
inline std::vector<int> measured_qubits(const SwapScenario& sc) {
    std::vector<int> out;
    for (std::size_t m : measured_cat_indices(sc)) {
        out.insert(out.end(), sc.measured[m].begin(), sc.measured[m].end());
    }
    return out;
}

struct SwapPrediction {
    double probability = 0.0;
    CatLabel residual;  // canonical, over the unmeasured qubits of measured cats
};

// Closed-form swapping rule. An outcome label over the p measured qubits is
// compatible iff, for every measured cat, the outcome pattern restricted to
// that cat's measured qubits equals the cat's own pattern slice or its
// bitwise complement (an independent choice eps_m per cat). Then:
//   probability    = 2^-N'   (N' = number of measured cats)
//   residual bits  = cat pattern on unmeasured qubits, XOR eps_m
//   residual sign  = outcome sign * product of measured cats' signs
// Incompatible outcomes have probability 0 and yield nothing.
inline std::optional<SwapPrediction> swap_predict(const SwapScenario& sc,
                                                  const CatLabel& outcome) {
    validate_scenario(sc);
    validate_label(outcome);

    const std::vector<int> measured = measured_qubits(sc);
    {
        std::vector<int> a = measured, b = outcome.qubits;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) {
            throw std::invalid_argument("outcome label must cover exactly the measured qubits");
        }
    }
    std::map<int, char> outcome_bit;
    for (std::size_t i = 0; i < outcome.qubits.size(); ++i) {
        outcome_bit[outcome.qubits[i]] = outcome.pattern[i];
    }

    const auto cats = measured_cat_indices(sc);
    int sign = outcome.sign;
    std::vector<std::pair<int, char>> residual_bits;  // (qubit, bit)
    for (std::size_t m : cats) {
        const CatLabel& cat = sc.cats[m];
        // eps for this cat: 0 = outcome matches the pattern slice, 1 = matches
        // the complement. A mixed slice is incompatible.
        int eps = -1;
        for (int q : sc.measured[m]) {
            const std::size_t pos = std::size_t(
                std::find(cat.qubits.begin(), cat.qubits.end(), q) - cat.qubits.begin());
            const int want = cat.pattern[pos] == outcome_bit.at(q) ? 0 : 1;
            if (eps == -1) {
                eps = want;
            } else if (eps != want) {
                return std::nullopt;
            }
        }
        sign *= cat.sign;
        for (std::size_t i = 0; i < cat.qubits.size(); ++i) {
            if (detail::contains(sc.measured[m], cat.qubits[i])) continue;
            char bit = cat.pattern[i];
            if (eps == 1) bit = bit == '0' ? '1' : '0';
            residual_bits.emplace_back(cat.qubits[i], bit);
        }
    }

    SwapPrediction out;
    out.probability = std::ldexp(1.0, -static_cast<int>(cats.size()));
    CatLabel residual;
    for (const auto& [q, b] : residual_bits) {
        residual.qubits.push_back(q);
        residual.pattern.push_back(b);
    }
    residual.sign = sign;
    out.residual = canonicalized(residual);
    return out;
}

// Product state of disjoint cats over their sorted global qubit ids
// (simulator qubit k = k-th smallest id). Built by direct expansion: one
// branch per per-cat complement choice.
template <typename Scalar = double>
std::pair<StateVector<Scalar>, std::vector<int>> product_of_cats(
    const std::vector<CatLabel>& cats) {
    if (cats.empty()) throw std::invalid_argument("product of zero cats");
    std::vector<int> ids;
    for (const CatLabel& cat : cats) {
        validate_label(cat);
        ids.insert(ids.end(), cat.qubits.begin(), cat.qubits.end());
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw std::invalid_argument("cats must occupy disjoint qubit sets");
    }
    if (static_cast<int>(ids.size()) > kMaxQubits) {
        throw std::invalid_argument("cat product exceeds the qubit cap");
    }
    std::map<int, int> sim_index;
    for (std::size_t i = 0; i < ids.size(); ++i) sim_index[ids[i]] = static_cast<int>(i);

    auto state = zero_state<Scalar>(static_cast<int>(ids.size()));
    const Scalar amp = std::pow(Scalar(2), -Scalar(cats.size()) / Scalar(2));
    for (std::uint64_t eps = 0; eps < (1ULL << cats.size()); ++eps) {
        std::uint64_t index = 0;
        Scalar coeff = amp;
        for (std::size_t j = 0; j < cats.size(); ++j) {
            const CatLabel& cat = cats[j];
            const bool complement = (eps >> j) & 1ULL;
            if (complement) coeff *= Scalar(cat.sign);
            for (std::size_t i = 0; i < cat.qubits.size(); ++i) {
                const bool one = (cat.pattern[i] == '1') != complement;
                if (one) index |= 1ULL << sim_index.at(cat.qubits[i]);
            }
        }
        state.amplitudes[Eigen::Index(index)] += coeff;
    }
    return {std::move(state), std::move(ids)};
}

// Full product state of a scenario's measured cats. Untouched cats are
// excluded; they factor out of the swap entirely.
template <typename Scalar = double>
std::pair<StateVector<Scalar>, std::vector<int>> scenario_state(const SwapScenario& sc) {
    validate_scenario(sc);
    std::vector<CatLabel> participating;
    for (std::size_t m : measured_cat_indices(sc)) participating.push_back(sc.cats[m]);
    return product_of_cats<Scalar>(participating);
}

struct SwapEntry {
    CatLabel outcome;  // over the measured qubits in scenario order
    double probability = 0.0;
    std::optional<CatLabel> residual;  // canonical; nothing on zero-probability outcomes
};

// Numeric route: builds the product state, projects onto every cat-basis
// outcome of the measured qubits, and identifies each nonzero residual.
// Probabilities over the full basis sum to 1.
template <typename Scalar = double>
std::vector<SwapEntry> swap_simulate(const SwapScenario& sc, double tol = 1e-10) {
    auto [state, ids] = scenario_state<Scalar>(sc);
    std::map<int, int> sim_index;
    for (std::size_t i = 0; i < ids.size(); ++i) sim_index[ids[i]] = static_cast<int>(i);

    const std::vector<int> measured = measured_qubits(sc);
    std::vector<int> measured_sim;
    measured_sim.reserve(measured.size());
    for (int q : measured) measured_sim.push_back(sim_index.at(q));

    std::vector<int> residual_ids;  // unmeasured global ids, ascending
    {
        std::vector<int> sorted_measured = measured;
        std::sort(sorted_measured.begin(), sorted_measured.end());
        for (int id : ids) {
            if (!std::binary_search(sorted_measured.begin(), sorted_measured.end(), id)) {
                residual_ids.push_back(id);
            }
        }
    }

    std::vector<SwapEntry> out;
    for (const CatLabel& slot_outcome : enumerate_cat_basis(static_cast<int>(measured.size()))) {
        const auto proj = project_subset(state, measured_sim, cat_state<Scalar>(slot_outcome));
        SwapEntry entry;
        entry.outcome = slot_outcome;
        entry.outcome.qubits = measured;
        entry.probability = double(proj.probability);
        if (proj.valid) {
            const auto found = identify_cat(proj.residual, residual_ids, tol);
            if (found) entry.residual = found->label;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace catswap
