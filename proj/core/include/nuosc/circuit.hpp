#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "nuosc/model.hpp"
#include "nuosc/statevector.hpp"

namespace nuosc {

enum class GateKind { OneQ, TwoQ, Entangler };

struct Gate {
    GateKind kind = GateKind::OneQ;
    MatX matrix;               // 2x2 for OneQ, 4x4 otherwise
    int q1 = 0, q2 = -1;       // q1 is the more significant bit for 2q gates
};

// Gates on a linear qubit array; 2q gates act on adjacent wires only.
// permutation[k] = physical wire holding logical qubit k after the circuit.
struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;
    std::vector<int> permutation;
    std::complex<double> global_phase = 1.0;
};

Mat4 swap_gate();
Mat4 cnot_gate();      // control = more significant qubit
Mat4 cnot_rev_gate();  // control = less significant qubit

// u_pq(t) = exp(-i t h_pq) by 4x4 Hermitian eigendecomposition; p < q.
Mat4 pair_unitary(const NeutrinoModel& model, int p, int q, double t);

// First-order step U1(t) = prod_j exp(-it b.sigma_j) prod_{p<q} exp(-it J_pq
// sigma_p.sigma_q), the p<q product in lexicographic order (leftmost factor
// applied last); non-adjacent pairs routed with explicit SWAP insertions.
Circuit trotter_u1_circuit(const NeutrinoModel& model, double t);

// Pair-propagator swap network: N alternating layers (odd bonds first) of
// combined gates SWAP * u_pq on adjacent pairs. Every pair interacts exactly
// once and the qubit order ends up reversed. `ordering` is the initial
// logical order as a permutation of 1..N (neutrino labels are 1-based at this
// boundary); default is identity when empty.
Circuit swap_network_circuit(const NeutrinoModel& model, double t,
                             std::vector<int> ordering = {});

void apply_circuit(Statevector& state, const Circuit& circuit);

MatX circuit_unitary(const Circuit& circuit);

struct GateCounts {
    int entanglers = 0;
    int single_qubit_rotations = 0;  // generic SU(2) counts as 3 (ZYZ)
    int uncompiled_2q = 0;
};
GateCounts gate_counts(const Circuit& circuit);

// Minimal rotation count of a 1q unitary up to global phase:
// 0 identity, 1 single-axis rotation, otherwise 3.
int rotation_count(const Mat2& u);

// Expand every TwoQ gate into single-qubit gates and CNOT entanglers.
Circuit compile_circuit(const Circuit& circuit);

// Reverse the gate order and invert every gate; undoes the circuit.
Circuit inverted_circuit(const Circuit& circuit);

nlohmann::json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

}  // namespace nuosc
