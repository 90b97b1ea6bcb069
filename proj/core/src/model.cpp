#include "nuosc/model.hpp"

#include <stdexcept>

namespace nuosc {

using cplx = std::complex<double>;

NeutrinoModel build_model(int n, double theta_v, double max_cos, double matter_A) {
    if (n < 2) throw std::invalid_argument("build_model: need at least 2 neutrinos");
    if (max_cos <= 0.0 || max_cos > 1.0)
        throw std::invalid_argument("build_model: max_cos must be in (0, 1]");
    NeutrinoModel m;
    m.n = n;
    m.theta_v = theta_v;
    m.matter_A = matter_A;
    m.b = Eigen::Vector3d(std::sin(2 * theta_v), 0.0, -std::cos(2 * theta_v) + matter_A);
    m.J = Eigen::MatrixXd::Zero(n, n);
    const double theta_max = std::acos(max_cos);
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const double theta_pq = theta_max * std::abs(p - q) / (n - 1);
            m.J(p, q) = m.J(q, p) = 1.0 - std::cos(theta_pq);
        }
    }
    return m;
}

namespace {
Mat4 two_site(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}
}  // namespace

PairHamiltonian pair_hamiltonian(const NeutrinoModel& model, int p, int q) {
    if (p >= q) throw std::invalid_argument("pair_hamiltonian: requires p < q");
    if (p < 0 || q >= model.n) throw std::invalid_argument("pair_hamiltonian: index out of range");
    const Mat2 id = Mat2::Identity();
    const Mat2 sig[3] = {pauli_1q('X'), pauli_1q('Y'), pauli_1q('Z')};
    Mat4 h = Mat4::Zero();
    for (int a = 0; a < 3; ++a) {
        h += (model.b[a] / (model.n - 1)) * (two_site(sig[a], id) + two_site(id, sig[a]));
        h += model.J(p, q) * two_site(sig[a], sig[a]);
    }
    return PairHamiltonian{p, q, h};
}

MatX full_hamiltonian(const NeutrinoModel& model) {
    const Eigen::Index dim = Eigen::Index{1} << model.n;
    MatX H = MatX::Zero(dim, dim);
    const char labels[3] = {'X', 'Y', 'Z'};
    for (int a = 0; a < 3; ++a) {
        const MatX sig = pauli_1q(labels[a]);
        for (int k = 0; k < model.n; ++k)
            H += model.b[a] * embed_gate(sig, {k}, model.n);
        for (int p = 0; p < model.n; ++p)
            for (int q = p + 1; q < model.n; ++q)
                H += model.J(p, q) * embed_gate(two_site(pauli_1q(labels[a]), pauli_1q(labels[a])),
                                                {p, q}, model.n);
    }
    return H;
}

MatX expm_i_hermitian(const MatX& H, double scale) {
    Eigen::SelfAdjointEigenSolver<MatX> es(H);
    const Eigen::VectorXd w = es.eigenvalues();
    VecX phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) phases[i] = std::exp(cplx(0.0, scale * w[i]));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

MatX exact_propagator(const NeutrinoModel& model, double t) {
    return expm_i_hermitian(full_hamiltonian(model), -t);
}

Statevector exact_evolve(const Statevector& state, const NeutrinoModel& model, double t) {
    if (state.n_qubits != model.n)
        throw std::invalid_argument("exact_evolve: qubit count mismatch");
    Statevector out = state;
    out.amplitudes = exact_propagator(model, t) * state.amplitudes;
    return out;
}

}  // namespace nuosc
