#pragma once

// Dense state-vector engine: basis states, the H/X/Z/CNOT gate set,
// partial projection onto subset states, single-qubit measurement and
// entanglement diagnostics.
//
// Conventions, fixed repo-wide:
//   * Bit k of an amplitude index (least significant = qubit 0) holds the
//     computational-basis value of qubit k.
//   * Ket-style bitstrings ("10") are written with qubit n-1 leftmost and
//     qubit 0 rightmost, matching how |q1 q0> is usually typed.
//   * All public operations that return a normalized state keep the norm
//     within 1e-10; gates preserve it to 1e-12.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "catswap/rng.hpp"

namespace catswap {

// Desk-scale cap: 2^24 complex doubles is 256 MiB of scratch at the very
// worst; anything above that is almost certainly a mis-written scenario.
inline constexpr int kMaxQubits = 24;

template <typename Scalar = double>
struct StateVector {
    using Complex = std::complex<Scalar>;
    using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    int num_qubits = 0;
    Amplitudes amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }
};

using StateVectord = StateVector<double>;

namespace detail {

inline void check_qubit_count(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("num_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(num_qubits));
    }
}

inline void check_qubit_index(int num_qubits, int q) {
    if (q < 0 || q >= num_qubits) {
        throw std::out_of_range("qubit index " + std::to_string(q) +
                                " out of range for " + std::to_string(num_qubits) +
                                " qubits");
    }
}

inline int index_bit(std::uint64_t index, int q) {
    return static_cast<int>((index >> q) & 1ULL);
}

// Removes bit q from an index, shifting the higher bits down one slot.
inline std::uint64_t drop_bit(std::uint64_t index, int q) {
    const std::uint64_t low = index & ((1ULL << q) - 1);
    const std::uint64_t high = index >> (q + 1);
    return low | (high << q);
}

}  // namespace detail

template <typename Scalar>
StateVector<Scalar> zero_state(int num_qubits) {
    detail::check_qubit_count(num_qubits);
    StateVector<Scalar> s;
    s.num_qubits = num_qubits;
    s.amplitudes = StateVector<Scalar>::Amplitudes::Zero(Eigen::Index(1) << num_qubits);
    return s;
}

// |index> as a state vector.
template <typename Scalar = double>
StateVector<Scalar> basis_state(int num_qubits, std::uint64_t index) {
    auto s = zero_state<Scalar>(num_qubits);
    if (index >= std::uint64_t(s.dim())) {
        throw std::out_of_range("basis index out of range");
    }
    s.amplitudes[Eigen::Index(index)] = Scalar(1);
    return s;
}

// Basis state from a ket-style bitstring: "10" means qubit 1 = 1, qubit 0 = 0.
template <typename Scalar = double>
StateVector<Scalar> new_basis_state(int num_qubits, std::string_view bits) {
    detail::check_qubit_count(num_qubits);
    if (static_cast<int>(bits.size()) != num_qubits) {
        throw std::invalid_argument("bitstring length " + std::to_string(bits.size()) +
                                    " does not match num_qubits " +
                                    std::to_string(num_qubits));
    }
    std::uint64_t index = 0;
    for (int i = 0; i < num_qubits; ++i) {
        const char c = bits[i];
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bitstring must contain only '0'/'1'");
        }
        if (c == '1') index |= 1ULL << (num_qubits - 1 - i);
    }
    return basis_state<Scalar>(num_qubits, index);
}

template <typename Scalar>
Scalar state_norm(const StateVector<Scalar>& s) {
    return s.amplitudes.norm();
}

template <typename Scalar>
StateVector<Scalar> normalized(StateVector<Scalar> s) {
    const Scalar n = state_norm(s);
    if (n <= Scalar(0)) {
        throw std::invalid_argument("cannot normalize a zero state");
    }
    s.amplitudes /= n;
    return s;
}

template <typename Scalar>
std::complex<Scalar> inner(const StateVector<Scalar>& a, const StateVector<Scalar>& b) {
    if (a.num_qubits != b.num_qubits) {
        throw std::invalid_argument("inner product of states with different qubit counts");
    }
    return a.amplitudes.dot(b.amplitudes);  // Eigen's dot conjugates the left side
}

template <typename Scalar>
Scalar fidelity(const StateVector<Scalar>& a, const StateVector<Scalar>& b) {
    return std::norm(inner(a, b));
}

// Tensor product; the qubits of `b` land above the qubits of `a`
// (result qubit k = a's qubit k for k < a.num_qubits, then b's).
template <typename Scalar>
StateVector<Scalar> tensor(const StateVector<Scalar>& a, const StateVector<Scalar>& b) {
    detail::check_qubit_count(a.num_qubits + b.num_qubits);
    StateVector<Scalar> out;
    out.num_qubits = a.num_qubits + b.num_qubits;
    out.amplitudes.resize(a.dim() * b.dim());
    for (Eigen::Index ib = 0; ib < b.dim(); ++ib) {
        out.amplitudes.segment(ib * a.dim(), a.dim()) = b.amplitudes[ib] * a.amplitudes;
    }
    return out;
}

// -------------------------------------------------------------------------
// Gates

enum class GateKind { H, X, Z, Cnot };

struct Gate {
    GateKind kind = GateKind::H;
    int qubit = 0;    // target of H/X/Z, control of CNOT
    int target = -1;  // CNOT target
};

inline Gate hadamard(int q) { return {GateKind::H, q, -1}; }
inline Gate pauli_x(int q) { return {GateKind::X, q, -1}; }
inline Gate pauli_z(int q) { return {GateKind::Z, q, -1}; }
inline Gate cnot(int control, int target) { return {GateKind::Cnot, control, target}; }

// General single-qubit unitary. H/X/Z go through here; protocol code also
// uses it for X/Y measurement-basis rotations.
template <typename Scalar>
StateVector<Scalar> apply_single_qubit(StateVector<Scalar> s, int q,
                                       const Eigen::Matrix<std::complex<Scalar>, 2, 2>& u) {
    detail::check_qubit_index(s.num_qubits, q);
    const std::uint64_t stride = 1ULL << q;
    const std::uint64_t dim = std::uint64_t(s.dim());
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & stride) continue;
        const Eigen::Index i0 = Eigen::Index(base);
        const Eigen::Index i1 = Eigen::Index(base | stride);
        const auto a0 = s.amplitudes[i0];
        const auto a1 = s.amplitudes[i1];
        s.amplitudes[i0] = u(0, 0) * a0 + u(0, 1) * a1;
        s.amplitudes[i1] = u(1, 0) * a0 + u(1, 1) * a1;
    }
    return s;
}

template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, 2, 2> hadamard_matrix() {
    const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
    Eigen::Matrix<std::complex<Scalar>, 2, 2> u;
    u << r, r, r, -r;
    return u;
}

template <typename Scalar>
StateVector<Scalar> apply_gate(StateVector<Scalar> s, const Gate& g) {
    switch (g.kind) {
        case GateKind::H:
            return apply_single_qubit(std::move(s), g.qubit, hadamard_matrix<Scalar>());
        case GateKind::X: {
            detail::check_qubit_index(s.num_qubits, g.qubit);
            const std::uint64_t stride = 1ULL << g.qubit;
            for (std::uint64_t base = 0; base < std::uint64_t(s.dim()); ++base) {
                if (base & stride) continue;
                std::swap(s.amplitudes[Eigen::Index(base)],
                          s.amplitudes[Eigen::Index(base | stride)]);
            }
            return s;
        }
        case GateKind::Z: {
            detail::check_qubit_index(s.num_qubits, g.qubit);
            const std::uint64_t stride = 1ULL << g.qubit;
            for (std::uint64_t i = 0; i < std::uint64_t(s.dim()); ++i) {
                if (i & stride) s.amplitudes[Eigen::Index(i)] = -s.amplitudes[Eigen::Index(i)];
            }
            return s;
        }
        case GateKind::Cnot: {
            detail::check_qubit_index(s.num_qubits, g.qubit);
            detail::check_qubit_index(s.num_qubits, g.target);
            if (g.qubit == g.target) {
                throw std::invalid_argument("CNOT control and target must differ");
            }
            const std::uint64_t cbit = 1ULL << g.qubit;
            const std::uint64_t tbit = 1ULL << g.target;
            for (std::uint64_t i = 0; i < std::uint64_t(s.dim()); ++i) {
                if ((i & cbit) && !(i & tbit)) {
                    std::swap(s.amplitudes[Eigen::Index(i)],
                              s.amplitudes[Eigen::Index(i | tbit)]);
                }
            }
            return s;
        }
    }
    throw std::logic_error("unreachable gate kind");
}

// -------------------------------------------------------------------------
// Partial projection

template <typename Scalar>
struct ProjectionResult {
    Scalar probability = Scalar(0);
    // Normalized post-projection state over the remaining qubits, which keep
    // their relative order and are re-indexed densely. Meaningless when
    // valid == false (zero-probability branch; caller must check).
    StateVector<Scalar> residual;
    bool valid = false;
};

namespace detail {

inline void check_subset(int num_qubits, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
    std::vector<int> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("subset qubits must be distinct");
    }
    for (int q : subset) check_qubit_index(num_qubits, q);
}

}  // namespace detail

// Projects the ordered qubit subset onto `projector` (whose local qubit j is
// subset[j]). Returns the branch probability |<projector ⊗ rest | state>|^2
// and the normalized residual over the remaining qubits.
template <typename Scalar>
ProjectionResult<Scalar> project_subset(const StateVector<Scalar>& s,
                                        const std::vector<int>& subset,
                                        const StateVector<Scalar>& projector) {
    detail::check_subset(s.num_qubits, subset);
    if (static_cast<int>(subset.size()) >= s.num_qubits) {
        throw std::invalid_argument("subset must be strictly smaller than the register");
    }
    if (projector.num_qubits != static_cast<int>(subset.size())) {
        throw std::invalid_argument("projector dimension does not match subset size");
    }
    if (std::abs(state_norm(projector) - Scalar(1)) > Scalar(1e-9)) {
        throw std::invalid_argument("projector must be normalized");
    }

    const int rest_qubits = s.num_qubits - static_cast<int>(subset.size());
    ProjectionResult<Scalar> out;
    out.residual = zero_state<Scalar>(rest_qubits);

    std::vector<bool> in_subset(s.num_qubits, false);
    for (int q : subset) in_subset[q] = true;
    std::vector<int> rest;  // remaining qubits in ascending order
    rest.reserve(rest_qubits);
    for (int q = 0; q < s.num_qubits; ++q) {
        if (!in_subset[q]) rest.push_back(q);
    }

    for (std::uint64_t idx = 0; idx < std::uint64_t(s.dim()); ++idx) {
        std::uint64_t sub_idx = 0;
        for (std::size_t j = 0; j < subset.size(); ++j) {
            sub_idx |= std::uint64_t(detail::index_bit(idx, subset[j])) << j;
        }
        std::uint64_t rest_idx = 0;
        for (std::size_t j = 0; j < rest.size(); ++j) {
            rest_idx |= std::uint64_t(detail::index_bit(idx, rest[j])) << j;
        }
        out.residual.amplitudes[Eigen::Index(rest_idx)] +=
            std::conj(projector.amplitudes[Eigen::Index(sub_idx)]) *
            s.amplitudes[Eigen::Index(idx)];
    }

    const Scalar norm2 = out.residual.amplitudes.squaredNorm();
    out.probability = norm2;
    if (norm2 > Scalar(1e-12)) {
        out.residual.amplitudes /= std::sqrt(norm2);
        out.valid = true;
    } else {
        out.valid = false;
    }
    return out;
}

// -------------------------------------------------------------------------
// Measurement

template <typename Scalar>
Scalar probability_of_bit(const StateVector<Scalar>& s, int q, int bit) {
    detail::check_qubit_index(s.num_qubits, q);
    Scalar p = Scalar(0);
    for (std::uint64_t i = 0; i < std::uint64_t(s.dim()); ++i) {
        if (detail::index_bit(i, q) == bit) p += std::norm(s.amplitudes[Eigen::Index(i)]);
    }
    return p;
}

template <typename Scalar>
struct MeasureResult {
    int bit = 0;
    StateVector<Scalar> residual;
};

// Born-samples qubit q and returns the normalized post-measurement state
// with qubit q removed (remaining qubits re-indexed densely). Needs at least
// two qubits; use measure_qubit_projective to measure a lone qubit.
template <typename Scalar>
MeasureResult<Scalar> measure_qubit(const StateVector<Scalar>& s, int q, Rng& rng) {
    if (s.num_qubits < 2) {
        throw std::invalid_argument("measure_qubit cannot remove the last qubit");
    }
    const Scalar p1 = probability_of_bit(s, q, 1);
    const int bit = uniform_unit(rng) < double(p1) ? 1 : 0;
    const Scalar p = bit ? p1 : Scalar(1) - p1;

    MeasureResult<Scalar> out;
    out.bit = bit;
    out.residual = zero_state<Scalar>(s.num_qubits - 1);
    const Scalar scale = Scalar(1) / std::sqrt(p);
    for (std::uint64_t i = 0; i < std::uint64_t(s.dim()); ++i) {
        if (detail::index_bit(i, q) != bit) continue;
        out.residual.amplitudes[Eigen::Index(detail::drop_bit(i, q))] =
            s.amplitudes[Eigen::Index(i)] * scale;
    }
    return out;
}

// Projective variant that keeps the measured qubit in the register
// (collapsed to |bit>). This is what an intercept-resend eavesdropper does.
template <typename Scalar>
MeasureResult<Scalar> measure_qubit_projective(const StateVector<Scalar>& s, int q, Rng& rng) {
    const Scalar p1 = probability_of_bit(s, q, 1);
    const int bit = uniform_unit(rng) < double(p1) ? 1 : 0;
    const Scalar p = bit ? p1 : Scalar(1) - p1;

    MeasureResult<Scalar> out;
    out.bit = bit;
    out.residual = zero_state<Scalar>(s.num_qubits);
    const Scalar scale = Scalar(1) / std::sqrt(p);
    for (std::uint64_t i = 0; i < std::uint64_t(s.dim()); ++i) {
        if (detail::index_bit(i, q) != bit) continue;
        out.residual.amplitudes[Eigen::Index(i)] = s.amplitudes[Eigen::Index(i)] * scale;
    }
    return out;
}

// -------------------------------------------------------------------------
// Entanglement diagnostics

// Reduced density operator of the given ordered subset (local qubit j of the
// returned matrix is subset[j]).
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> reduced_density(
    const StateVector<Scalar>& s, const std::vector<int>& subset) {
    detail::check_subset(s.num_qubits, subset);
    if (static_cast<int>(subset.size()) >= s.num_qubits) {
        throw std::invalid_argument("subset must be a proper subsystem");
    }

    std::vector<bool> in_subset(s.num_qubits, false);
    for (int q : subset) in_subset[q] = true;
    std::vector<int> rest;
    for (int q = 0; q < s.num_qubits; ++q) {
        if (!in_subset[q]) rest.push_back(q);
    }

    const Eigen::Index sub_dim = Eigen::Index(1) << subset.size();
    const Eigen::Index rest_dim = Eigen::Index(1) << rest.size();

    // psi reshaped to a (sub_dim x rest_dim) matrix; rho = psi psi^dagger.
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> psi(sub_dim, rest_dim);
    psi.setZero();
    for (std::uint64_t idx = 0; idx < std::uint64_t(s.dim()); ++idx) {
        std::uint64_t a = 0, b = 0;
        for (std::size_t j = 0; j < subset.size(); ++j) {
            a |= std::uint64_t(detail::index_bit(idx, subset[j])) << j;
        }
        for (std::size_t j = 0; j < rest.size(); ++j) {
            b |= std::uint64_t(detail::index_bit(idx, rest[j])) << j;
        }
        psi(Eigen::Index(a), Eigen::Index(b)) = s.amplitudes[Eigen::Index(idx)];
    }
    return psi * psi.adjoint();
}

// Von Neumann entropy (base-2) of the subset's reduced density operator.
template <typename Scalar>
Scalar subsystem_entropy(const StateVector<Scalar>& s, const std::vector<int>& subset) {
    const auto rho = reduced_density(s, subset);
    Eigen::SelfAdjointEigenSolver<
        Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>>
        solver(rho, Eigen::EigenvaluesOnly);
    Scalar entropy = Scalar(0);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const Scalar lambda = solver.eigenvalues()[i];
        if (lambda > Scalar(1e-14)) entropy -= lambda * std::log2(lambda);
    }
    return entropy;
}

// -------------------------------------------------------------------------
// Pauli strings

// letters[k] in {I,X,Y,Z} acts on qubit k; overall sign is +1 or -1.
struct PauliString {
    std::string letters;
    int sign = +1;
};

inline PauliString pauli_string(std::string letters, int sign = +1) {
    for (char c : letters) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw std::invalid_argument("Pauli letters must be I/X/Y/Z");
        }
    }
    if (sign != 1 && sign != -1) throw std::invalid_argument("Pauli sign must be +1/-1");
    return PauliString{std::move(letters), sign};
}

template <typename Scalar>
StateVector<Scalar> apply_pauli(const StateVector<Scalar>& s, const PauliString& p) {
    if (static_cast<int>(p.letters.size()) != s.num_qubits) {
        throw std::invalid_argument("Pauli string length does not match qubit count");
    }
    using Complex = std::complex<Scalar>;
    std::uint64_t flip_mask = 0;
    for (int q = 0; q < s.num_qubits; ++q) {
        const char c = p.letters[q];
        if (c == 'X' || c == 'Y') flip_mask |= 1ULL << q;
    }
    auto out = zero_state<Scalar>(s.num_qubits);
    for (std::uint64_t i = 0; i < std::uint64_t(s.dim()); ++i) {
        Complex phase = Complex(Scalar(p.sign), 0);
        for (int q = 0; q < s.num_qubits; ++q) {
            const char c = p.letters[q];
            const int b = detail::index_bit(i, q);
            if (c == 'Z' && b) phase = -phase;
            if (c == 'Y') phase *= b ? Complex(0, -1) : Complex(0, 1);
        }
        out.amplitudes[Eigen::Index(i ^ flip_mask)] += phase * s.amplitudes[Eigen::Index(i)];
    }
    return out;
}

// <state| P |state>. Any signed Pauli string is Hermitian, so the imaginary
// part is pure roundoff; only the real part is returned.
template <typename Scalar>
Scalar pauli_expectation(const StateVector<Scalar>& s, const PauliString& p) {
    const auto ps = apply_pauli(s, p);
    return inner(s, ps).real();
}

}  // namespace catswap
