#pragma once

// Gate-network builders: the generic cat-state generator/analyzer (Hadamard
// plus a CNOT fan-out), the Bell analyzer as its 2-qubit case, and the
// single-CNOT merge of two cat groups.
//
// The generator fixes a bijection between computational-basis inputs
// b_0 b_1 ... b_{n-1} and cat labels:
//   sign    = (-1)^{b_0}
//   pattern = (0, b_1, ..., b_{n-1})   (already canonical)
// Run in reverse, the same circuit reads a cat state back out as bits.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "catswap/catalg.hpp"
#include "catswap/state.hpp"

namespace catswap {

struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> gates;  // applied front to back
};

inline void validate_circuit(const Circuit& c) {
    for (const Gate& g : c.gates) {
        detail::check_qubit_index(c.num_qubits, g.qubit);
        if (g.kind == GateKind::Cnot) {
            detail::check_qubit_index(c.num_qubits, g.target);
            if (g.qubit == g.target) {
                throw std::invalid_argument("CNOT control and target must differ");
            }
        }
    }
}

template <typename Scalar>
StateVector<Scalar> apply_circuit(StateVector<Scalar> s, const Circuit& c) {
    if (s.num_qubits != c.num_qubits) {
        throw std::invalid_argument("circuit size does not match state size");
    }
    for (const Gate& g : c.gates) s = apply_gate(std::move(s), g);
    return s;
}

// All gates in the H/X/Z/CNOT set are self-inverse, so the reverse circuit
// is just the gate list backwards.
inline Circuit reversed(const Circuit& c) {
    Circuit r;
    r.num_qubits = c.num_qubits;
    r.gates.assign(c.gates.rbegin(), c.gates.rend());
    return r;
}

// H on qubit 0 followed by CNOT(0 -> k) for k = 1..n-1. Applied to a basis
// input it produces the cat state of the bijection above.
inline Circuit cat_generator_circuit(int n) {
    if (n < 2 || n > kMaxQubits) {
        throw std::invalid_argument("cat generator supports 2 <= n <= " +
                                    std::to_string(kMaxQubits));
    }
    Circuit c;
    c.num_qubits = n;
    c.gates.push_back(hadamard(0));
    for (int k = 1; k < n; ++k) c.gates.push_back(cnot(0, k));
    return c;
}

// bits[k] is the input on qubit k ('0'/'1', input-port order).
inline CatLabel label_for_generator_bits(const std::string& bits) {
    const int n = static_cast<int>(bits.size());
    if (n < 2) throw std::invalid_argument("generator bits need length >= 2");
    CatLabel label;
    label.qubits.resize(n);
    for (int i = 0; i < n; ++i) label.qubits[i] = i;
    label.pattern = bits;
    label.pattern[0] = '0';
    label.sign = bits[0] == '1' ? -1 : +1;
    return label;
}

inline std::string generator_bits_for_label(const CatLabel& label) {
    const CatLabel canon = canonicalized(label);
    std::string bits = canon.pattern;
    bits[0] = canon.sign < 0 ? '1' : '0';
    return bits;
}

struct CatReadout {
    std::string bits;  // bits[k] is the readout of qubit k
    CatLabel label;    // canonical, over the supplied qubit ids
};

// Runs the generator backwards and reads the (deterministic) basis string.
// Feeding anything that is not exactly a cat state leaves weight on several
// basis strings; that misuse is detected by the confidence check.
template <typename Scalar>
CatReadout analyze_cat(const StateVector<Scalar>& s, const std::vector<int>& qubit_ids) {
    if (static_cast<int>(qubit_ids.size()) != s.num_qubits) {
        throw std::invalid_argument("analyze_cat: qubit id list does not match state size");
    }
    const auto decoded = apply_circuit(s, reversed(cat_generator_circuit(s.num_qubits)));

    Eigen::Index best = 0;
    decoded.amplitudes.cwiseAbs2().maxCoeff(&best);
    const double p = std::norm(decoded.amplitudes[best]);
    if (p < 1.0 - 1e-10) {
        throw std::invalid_argument("analyze_cat: input is not a cat state (readout "
                                    "probability " + std::to_string(p) + ")");
    }

    CatReadout out;
    out.bits.resize(std::size_t(s.num_qubits));
    for (int k = 0; k < s.num_qubits; ++k) {
        out.bits[std::size_t(k)] = (std::uint64_t(best) >> k & 1ULL) ? '1' : '0';
    }
    out.label = label_for_generator_bits(out.bits);
    out.label.qubits = qubit_ids;
    out.label = canonicalized(out.label);
    return out;
}

// Serial gate-time model: Hadamards cost t_h, CNOTs cost t_c, X/Z are free
// (the rate formulas count only H and CNOT).
inline double gate_cost(const Circuit& c, double t_h, double t_c) {
    if (t_h < 0 || t_c < 0) throw std::invalid_argument("gate times must be non-negative");
    double total = 0;
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::H) total += t_h;
        if (g.kind == GateKind::Cnot) total += t_c;
    }
    return total;
}

template <typename Scalar>
struct MergeResult {
    int outcome = 0;
    StateVector<Scalar> residual;  // target qubit removed
};

// Single-CNOT merge of two cat groups: CNOT(control -> target), then measure
// the target. On an N-cat x M-cat input the residual is an (N+M-1)-qubit cat.
template <typename Scalar>
MergeResult<Scalar> cnot_merge(const StateVector<Scalar>& s, int control, int target,
                                    Rng& rng) {
    auto after = apply_gate(s, cnot(control, target));
    auto m = measure_qubit(after, target, rng);
    return MergeResult<Scalar>{m.bit, std::move(m.residual)};
}

// Both branches of the merge, with probabilities, for exhaustive checks.
template <typename Scalar>
std::array<ProjectionResult<Scalar>, 2> cnot_merge_branches(const StateVector<Scalar>& s,
                                                           int control, int target) {
    const auto after = apply_gate(s, cnot(control, target));
    std::array<ProjectionResult<Scalar>, 2> out;
    for (int bit : {0, 1}) {
        out[std::size_t(bit)] =
            project_subset(after, std::vector<int>{target},
                           basis_state<Scalar>(1, std::uint64_t(bit)));
    }
    return out;
}

}  // namespace catswap
