#include "nuosc/observables.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nuosc {

namespace {

int flipped_bit_position(int neutrino, const std::vector<int>& permutation, int n_qubits) {
    if (neutrino < 0 || neutrino >= n_qubits)
        throw std::invalid_argument("neutrino index out of range");
    if (static_cast<int>(permutation.size()) != n_qubits)
        throw std::invalid_argument("permutation size mismatch");
    const int wire = permutation[neutrino];
    if (wire < 0 || wire >= n_qubits) throw std::invalid_argument("invalid permutation entry");
    return wire;
}

}  // namespace

double inversion_probability(const CountsRecord& z_counts, int neutrino,
                             int initial_flavor_bit, const std::vector<int>& permutation) {
    if (z_counts.shots <= 0) throw std::invalid_argument("record has no shots");
    int n_qubits = static_cast<int>(z_counts.counts.begin()->first.size());
    const int wire = flipped_bit_position(neutrino, permutation, n_qubits);
    const char flipped = initial_flavor_bit == 0 ? '1' : '0';
    long hits = 0;
    for (const auto& [bits, count] : z_counts.counts)
        if (bits[wire] == flipped) hits += count;
    return static_cast<double>(hits) / static_cast<double>(z_counts.shots);
}

double inversion_probability(const Eigen::VectorXd& probs, int n_qubits, int neutrino,
                             int initial_flavor_bit, const std::vector<int>& permutation) {
    if (probs.size() != (Eigen::Index(1) << n_qubits))
        throw std::invalid_argument("probability vector dimension mismatch");
    const int wire = flipped_bit_position(neutrino, permutation, n_qubits);
    const int flipped = initial_flavor_bit == 0 ? 1 : 0;
    double total = 0.0;
    for (Eigen::Index idx = 0; idx < probs.size(); ++idx) {
        const int bit = static_cast<int>((idx >> (n_qubits - 1 - wire)) & 1);
        if (bit == flipped) total += probs(idx);
    }
    return total;
}

double von_neumann_entropy(const MatX& rho) {
    Eigen::SelfAdjointEigenSolver<MatX> es(0.5 * (rho + rho.adjoint()));
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double lambda = es.eigenvalues()(i);
        if (lambda < -1e-6) throw std::invalid_argument("density matrix has negative eigenvalue");
        if (lambda <= 0.0) continue;
        entropy -= lambda * std::log2(lambda);
    }
    return entropy;
}

namespace {

double concurrence_sum(const Mat4& rho) {
    Mat4 yy = Mat4::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;

    Eigen::SelfAdjointEigenSolver<Mat4> rho_es(0.5 * (rho + rho.adjoint()));
    Eigen::Vector4d vals = rho_es.eigenvalues();
    for (int i = 0; i < 4; ++i) {
        if (vals(i) < -1e-6) throw std::invalid_argument("density matrix has negative eigenvalue");
        vals(i) = std::max(vals(i), 0.0);
    }
    const Mat4 sqrt_rho = rho_es.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
                          rho_es.eigenvectors().adjoint();
    const Mat4 m = sqrt_rho * yy * rho.conjugate() * yy * sqrt_rho;

    Eigen::SelfAdjointEigenSolver<Mat4> m_es(0.5 * (m + m.adjoint()));
    std::array<double, 4> lambdas{};
    for (int i = 0; i < 4; ++i) {
        double mu = m_es.eigenvalues()(i);
        if (mu < -1e-6) throw std::runtime_error("concurrence matrix has negative eigenvalue");
        lambdas[i] = std::sqrt(std::max(mu, 0.0));
    }
    std::sort(lambdas.begin(), lambdas.end(), std::greater<double>());
    return lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
}

}  // namespace

double concurrence(const Mat4& rho) { return std::max(0.0, concurrence_sum(rho)); }

double extended_concurrence(const Mat4& rho) { return concurrence_sum(rho); }

ValueWithError single_spin_entropy_avg(const std::vector<PairReduction>& pairs) {
    if (pairs.size() != 3) throw std::invalid_argument("need exactly three pair reductions");
    double value = 0.0;
    double error = 0.0;
    for (const auto& pair : pairs) {
        // Trace out the partner (low bit) to get the single-spin state.
        Mat2 rho_k = Mat2::Zero();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                rho_k(i, j) = pair.rho(2 * i, 2 * j) + pair.rho(2 * i + 1, 2 * j + 1);
        value += von_neumann_entropy(rho_k);
        error += pair.error;
    }
    return {value / 3.0, error / 3.0};
}

}  // namespace nuosc
