#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nuosc {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;

// Qubit convention used everywhere in this project: qubit 0 is the leftmost
// character of a bitstring and the most significant bit of a state index.

struct Statevector {
    int n_qubits = 0;
    VecX amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }
};

struct DensityMatrix {
    int n_qubits = 0;
    MatX matrix;
};

// Per-qubit Pauli labels, e.g. "ZIXY". Characters restricted to I,X,Y,Z.
struct PauliString {
    std::string ops;
};

struct CountsRecord {
    std::string setting;               // basis-setting label, e.g. "ZZ" or "XY"
    std::map<std::string, long> counts;
    long shots = 0;
};

Statevector new_basis_state(int n_qubits, std::string_view bitstring);

// Dense 2x2 Pauli / rotation building blocks.
Mat2 pauli_1q(char op);
Mat2 rot_x(double theta);
Mat2 rot_y(double theta);
Mat2 rot_z(double theta);

bool is_unitary(const MatX& m, double tol = 1e-10);

void apply_1q(Statevector& state, const Mat2& gate, int target);
// q1 is the more significant bit of the gate's 4-dimensional basis ordering.
void apply_2q(Statevector& state, const Mat4& gate, int q1, int q2);

double expectation_pauli(const Statevector& state, const PauliString& p);

// Partial trace onto `keep` (order of `keep` sets the qubit order of the
// result: keep[0] becomes the most significant bit).
DensityMatrix reduced_density(const Statevector& state, const std::vector<int>& keep);
DensityMatrix reduced_density(const DensityMatrix& rho, const std::vector<int>& keep);

// |amplitude|^2 per basis state.
Eigen::VectorXd probabilities(const Statevector& state);

// Multinomial shot sampling; deterministic for a fixed seed. Bitstring keys
// have ceil(log2(len(probs))) characters given n_bits.
CountsRecord sample_counts(const Eigen::VectorXd& probs, long shots, std::uint64_t seed,
                           int n_bits, const std::string& setting = "Z");

std::string index_to_bits(Eigen::Index idx, int n_bits);

// Embed a k-qubit gate acting on `targets` into the full 2^n unitary.
MatX embed_gate(const MatX& gate, const std::vector<int>& targets, int n_qubits);

}  // namespace nuosc
