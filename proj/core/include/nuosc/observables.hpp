#pragma once

#include <vector>

#include "nuosc/mitigation.hpp"
#include "nuosc/statevector.hpp"

namespace nuosc {

// Flavor and entanglement observables computed from counts or density
// matrices.

// Fraction of shots in which the physical qubit carrying logical neutrino
// `neutrino` (after the circuit's final permutation) reads the flip of
// `initial_flavor_bit`. `permutation[logical] = physical wire`.
double inversion_probability(const CountsRecord& z_counts, int neutrino,
                             int initial_flavor_bit, const std::vector<int>& permutation);

// Same, from a quasi-probability vector over the full outcome space.
double inversion_probability(const Eigen::VectorXd& probs, int n_qubits, int neutrino,
                             int initial_flavor_bit, const std::vector<int>& permutation);

// -sum lambda log2 lambda; eigenvalues below -1e-6 are rejected as
// unphysical, small negatives are clipped to zero.
double von_neumann_entropy(const MatX& rho);

// Concurrence: max{0, l0 - l1 - l2 - l3} with l_i the descending square
// roots of the eigenvalues of rho (YxY) rho* (YxY), computed through the
// positive-semidefinite form sqrt(rho) (YxY) rho* (YxY) sqrt(rho).
double concurrence(const Mat4& rho);

// Untruncated variant: l0 - l1 - l2 - l3.
double extended_concurrence(const Mat4& rho);

// Average single-spin entropy of qubit k over its three pair reductions,
// with the error bar taken as the average of the three per-pair errors.
// Each entry of `pair_dms` is (other qubit index, pair density matrix with
// k as the first/high qubit already, i.e. Tr over the partner gives rho_k).

struct PairReduction {
    Mat4 rho;        // pair density matrix, qubit k is the high bit
    double error;    // per-pair error estimate (may be 0 for exact input)
};

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

ValueWithError single_spin_entropy_avg(const std::vector<PairReduction>& pairs);

}  // namespace nuosc
