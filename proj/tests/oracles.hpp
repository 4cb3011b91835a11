#pragma once

// Test-only oracles. These recompute quantities through dense matrix
// algebra, independent of the amplitude-indexing paths used by the library,
// so expected values in tests are not produced by the code under test.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

#include "catswap/rng.hpp"
#include "catswap/state.hpp"

namespace testutil {

inline Eigen::Matrix2cd pauli_matrix(char letter) {
    Eigen::Matrix2cd m;
    const std::complex<double> i(0, 1);
    switch (letter) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -i, i, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("bad Pauli letter");
    }
    return m;
}

// Full 2^n x 2^n matrix of a Pauli string, entry by entry:
// M[r][c] = sign * prod_k letter_k[bit_k(r)][bit_k(c)].
inline Eigen::MatrixXcd pauli_string_matrix(const catswap::PauliString& p) {
    const int n = static_cast<int>(p.letters.size());
    const Eigen::Index dim = Eigen::Index(1) << n;
    std::vector<Eigen::Matrix2cd> single;
    for (char c : p.letters) single.push_back(pauli_matrix(c));
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            std::complex<double> v(double(p.sign), 0);
            for (int k = 0; k < n; ++k) {
                v *= single[std::size_t(k)](r >> k & 1, c >> k & 1);
            }
            m(r, c) = v;
        }
    }
    return m;
}

inline double pauli_expectation_oracle(const catswap::StateVectord& s,
                                       const catswap::PauliString& p) {
    const Eigen::MatrixXcd m = pauli_string_matrix(p);
    return (s.amplitudes.adjoint() * m * s.amplitudes)(0, 0).real();
}

// Subsystem entropy through the full density matrix and an explicit partial
// trace, then eigenvalues.
inline double subsystem_entropy_oracle(const catswap::StateVectord& s,
                                       const std::vector<int>& subset) {
    const Eigen::MatrixXcd rho_full = s.amplitudes * s.amplitudes.adjoint();
    std::vector<int> rest;
    for (int q = 0; q < s.num_qubits; ++q) {
        if (std::find(subset.begin(), subset.end(), q) == subset.end()) rest.push_back(q);
    }
    const Eigen::Index sub_dim = Eigen::Index(1) << subset.size();
    const Eigen::Index rest_dim = Eigen::Index(1) << rest.size();
    auto assemble = [&](Eigen::Index a, Eigen::Index r) {
        Eigen::Index idx = 0;
        for (std::size_t k = 0; k < subset.size(); ++k) {
            idx |= (a >> k & 1) << subset[k];
        }
        for (std::size_t k = 0; k < rest.size(); ++k) {
            idx |= (r >> k & 1) << rest[k];
        }
        return idx;
    };
    Eigen::MatrixXcd rho(sub_dim, sub_dim);
    for (Eigen::Index a = 0; a < sub_dim; ++a) {
        for (Eigen::Index b = 0; b < sub_dim; ++b) {
            std::complex<double> v = 0;
            for (Eigen::Index r = 0; r < rest_dim; ++r) {
                v += rho_full(assemble(a, r), assemble(b, r));
            }
            rho(a, b) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    double entropy = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lambda = solver.eigenvalues()[i];
        if (lambda > 1e-14) entropy -= lambda * std::log2(lambda);
    }
    return entropy;
}

inline catswap::StateVectord random_state(int num_qubits, catswap::Rng& rng) {
    auto s = catswap::zero_state<double>(num_qubits);
    for (Eigen::Index i = 0; i < s.dim(); ++i) {
        s.amplitudes[i] = std::complex<double>(2 * catswap::uniform_unit(rng) - 1,
                                               2 * catswap::uniform_unit(rng) - 1);
    }
    s.amplitudes /= s.amplitudes.norm();
    return s;
}

}  // namespace testutil
