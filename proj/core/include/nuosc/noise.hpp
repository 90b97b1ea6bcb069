#pragma once

#include <cstdint>
#include <string>

#include "nuosc/circuit.hpp"
#include "nuosc/statevector.hpp"

namespace nuosc {

// Parametric noise: a two-qubit depolarizing channel after every entangling
// gate plus independent per-qubit readout bit flips.
struct NoiseModel {
    double depol_2q = 0.0;       // probability per entangling gate
    Eigen::VectorXd readout_e0;  // P(read 1 | prepared 0) per qubit
    Eigen::VectorXd readout_e1;  // P(read 0 | prepared 1) per qubit

    static NoiseModel off(int n_qubits);
    static NoiseModel uniform(int n_qubits, double depol, double e0, double e1);
};

struct CalibrationRecord {
    CountsRecord zeros;  // counts from preparing |0...0>
    CountsRecord ones;   // counts from preparing |1...1>
};

// Entangler folding G -> G (G^dag G)^((r-1)/2); r odd. Logical unitary is
// unchanged while the entangler count is multiplied by r.
Circuit amplify_noise(const Circuit& circuit, int r);

// Exact noisy evolution of the density matrix through the circuit.
DensityMatrix run_noisy_density(const Circuit& circuit, const Statevector& initial,
                                const NoiseModel& noise);

// Measurement probabilities of rho in a per-qubit basis setting ('X','Y','Z'
// per character), before readout corruption.
Eigen::VectorXd measurement_probabilities(const DensityMatrix& rho,
                                          const std::string& basis_setting);

// Apply the per-qubit readout confusion matrices to ideal probabilities.
Eigen::VectorXd corrupt_readout(const Eigen::VectorXd& probs, const NoiseModel& noise);

CountsRecord run_noisy(const Circuit& circuit, const Statevector& initial,
                       const NoiseModel& noise, const std::string& basis_setting,
                       long shots, std::uint64_t seed);

CalibrationRecord calibration_run(const NoiseModel& noise, int n_qubits, long shots,
                                  std::uint64_t seed);

}  // namespace nuosc
