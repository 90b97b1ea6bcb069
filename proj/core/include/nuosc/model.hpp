#pragma once

#include <Eigen/Dense>

#include "nuosc/statevector.hpp"

namespace nuosc {

// N-neutrino spin model in units of the two-body coupling eta:
//   H = sum_k b.sigma_k + sum_{p<q} J_pq sigma_p.sigma_q
// The monochromatic convention E_nu = dm^2/(4 eta) makes the one-body
// prefactor exactly |b| = 1, so no per-neutrino energy array is stored.
struct NeutrinoModel {
    int n = 0;
    Eigen::Vector3d b = Eigen::Vector3d::Zero();  // external field, units of eta
    Eigen::MatrixXd J;                            // symmetric, zero diagonal
    double theta_v = 0.0;
    double matter_A = 0.0;
};

struct PairHamiltonian {
    int p = 0, q = 0;   // 0-based
    Mat4 h;             // Hermitian, units of eta
};

// Angle grid theta_pq = arccos(max_cos) * |p-q| / (n-1), couplings
// J_pq = 1 - cos(theta_pq), field b = (sin 2theta_v, 0, -cos 2theta_v + A).
NeutrinoModel build_model(int n, double theta_v, double max_cos, double matter_A = 0.0);

// h_pq = b.(sigma_p + sigma_q)/(N-1) + J_pq sigma_p.sigma_q on the pair's
// 4-dimensional space (p the more significant qubit). Requires p < q.
PairHamiltonian pair_hamiltonian(const NeutrinoModel& model, int p, int q);

MatX full_hamiltonian(const NeutrinoModel& model);

// exp(-iHt) by dense Hermitian eigendecomposition.
MatX exact_propagator(const NeutrinoModel& model, double t);

Statevector exact_evolve(const Statevector& state, const NeutrinoModel& model, double t);

// Hermitian matrix exponential exp(i * scale * H).
MatX expm_i_hermitian(const MatX& H, double scale);

}  // namespace nuosc
