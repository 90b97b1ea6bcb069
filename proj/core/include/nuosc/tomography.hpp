#pragma once

#include <array>
#include <map>
#include <string>

#include "nuosc/statevector.hpp"

namespace nuosc {

// Two-qubit tomography from the 9 settings {X,Y,Z} x {X,Y,Z}. Expectations
// with identity factors are recovered from marginals, averaged over the
// settings that contain them.

// Outcome weights for one basis setting of a measured pair, ordered as the
// two-bit outcomes 00,01,10,11 (first qubit = more significant bit). Weights
// are counts for raw data but may be non-integral (and negative) after
// readout correction.
struct SettingData {
    std::array<double, 4> weights{};
    double total = 0.0;  // shots (kept separately: weights may not sum to it)
};

using SettingCounts = std::map<std::string, SettingData>;

std::array<std::string, 9> measurement_settings();

// M[a][b] = <P^a (x) P^b> with index order I,X,Y,Z; M[0][0] = 1.
struct PauliMatrixEstimate {
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
};

PauliMatrixEstimate estimate_pauli_matrix(const SettingCounts& counts_by_setting);

// rho_D = (1/4) sum_ab M_ab P^a (x) P^b. Hermitian and unit trace but not
// guaranteed positive semidefinite.
Mat4 linear_inversion_dm(const PauliMatrixEstimate& m);

PauliMatrixEstimate pauli_matrix_of_dm(const Mat4& rho);

struct MlOptions {
    int max_iterations = 500;
    double gradient_tol = 1e-8;
    // Accept a machine-precision line-search stall as converged when the
    // gradient is already below this looser bound.
    double stall_tol = 1e-6;
    bool has_warm_start = false;
    Mat4 warm_start;  // density-matrix initial guess, used when has_warm_start
};

struct MlResult {
    Mat4 rho;
    double log_likelihood = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Maximum-likelihood physical reconstruction: rho = T^dag T / tr(T^dag T)
// with lower-triangular T (16 real parameters), multinomial log-likelihood,
// BFGS with analytic gradient. Throws on non-convergence unless
// `allow_nonconverged` (the error carries the best iterate's gradient norm).
MlResult ml_reconstruct(const SettingCounts& counts_by_setting,
                        const MlOptions& opts = {}, bool allow_nonconverged = false);

// Multinomial log-likelihood of the observed weights under rho.
double tomography_log_likelihood(const Mat4& rho, const SettingCounts& counts_by_setting);

// Project a Hermitian matrix to the closest PSD unit-trace matrix
// (eigenvalue clipping followed by renormalization).
Mat4 project_to_physical(const Mat4& hermitian);

// Exact outcome probabilities of a two-qubit state in a given setting,
// in the 00,01,10,11 order used by SettingData.
Eigen::Vector4d setting_probabilities(const Mat4& rho, const std::string& setting);

}  // namespace nuosc
