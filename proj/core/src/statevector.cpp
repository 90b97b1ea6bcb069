#include "nuosc/statevector.hpp"

#include <stdexcept>

#include "nuosc/rng.hpp"

namespace nuosc {

using cplx = std::complex<double>;

Statevector new_basis_state(int n_qubits, std::string_view bitstring) {
    if (n_qubits < 1) throw std::invalid_argument("new_basis_state: n_qubits must be >= 1");
    if (static_cast<int>(bitstring.size()) != n_qubits)
        throw std::invalid_argument("new_basis_state: bitstring length mismatch");
    Eigen::Index idx = 0;
    for (const char c : bitstring) {
        if (c != '0' && c != '1') throw std::invalid_argument("new_basis_state: bad bit");
        idx = (idx << 1) | (c == '1' ? 1 : 0);
    }
    Statevector sv;
    sv.n_qubits = n_qubits;
    sv.amplitudes = VecX::Zero(Eigen::Index{1} << n_qubits);
    sv.amplitudes[idx] = 1.0;
    return sv;
}

Mat2 pauli_1q(char op) {
    Mat2 m;
    switch (op) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli_1q: op must be one of I,X,Y,Z");
    }
    return m;
}

Mat2 rot_x(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    Mat2 m;
    m << c, cplx(0, -s), cplx(0, -s), c;
    return m;
}

Mat2 rot_y(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    Mat2 m;
    m << c, -s, s, c;
    return m;
}

Mat2 rot_z(double t) {
    Mat2 m;
    m << std::exp(cplx(0, -t / 2)), 0, 0, std::exp(cplx(0, t / 2));
    return m;
}

bool is_unitary(const MatX& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m.adjoint() * m - MatX::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < tol;
}

void apply_1q(Statevector& state, const Mat2& gate, int target) {
    if (target < 0 || target >= state.n_qubits)
        throw std::invalid_argument("apply_1q: target out of range");
    if (!is_unitary(gate)) throw std::invalid_argument("apply_1q: gate is not unitary");
    const Eigen::Index stride = Eigen::Index{1} << (state.n_qubits - 1 - target);
    auto& a = state.amplitudes;
    for (Eigen::Index base = 0; base < a.size(); base += 2 * stride) {
        for (Eigen::Index i = base; i < base + stride; ++i) {
            const cplx a0 = a[i], a1 = a[i + stride];
            a[i] = gate(0, 0) * a0 + gate(0, 1) * a1;
            a[i + stride] = gate(1, 0) * a0 + gate(1, 1) * a1;
        }
    }
}

void apply_2q(Statevector& state, const Mat4& gate, int q1, int q2) {
    if (q1 == q2) throw std::invalid_argument("apply_2q: targets must differ");
    if (q1 < 0 || q2 < 0 || q1 >= state.n_qubits || q2 >= state.n_qubits)
        throw std::invalid_argument("apply_2q: target out of range");
    if (!is_unitary(gate)) throw std::invalid_argument("apply_2q: gate is not unitary");
    const Eigen::Index s1 = Eigen::Index{1} << (state.n_qubits - 1 - q1);
    const Eigen::Index s2 = Eigen::Index{1} << (state.n_qubits - 1 - q2);
    auto& a = state.amplitudes;
    const Eigen::Index dim = a.size();
    for (Eigen::Index i = 0; i < dim; ++i) {
        if ((i & s1) || (i & s2)) continue;  // visit each 4-group once, at its 00 index
        const Eigen::Index i00 = i, i01 = i | s2, i10 = i | s1, i11 = i | s1 | s2;
        const cplx v00 = a[i00], v01 = a[i01], v10 = a[i10], v11 = a[i11];
        a[i00] = gate(0, 0) * v00 + gate(0, 1) * v01 + gate(0, 2) * v10 + gate(0, 3) * v11;
        a[i01] = gate(1, 0) * v00 + gate(1, 1) * v01 + gate(1, 2) * v10 + gate(1, 3) * v11;
        a[i10] = gate(2, 0) * v00 + gate(2, 1) * v01 + gate(2, 2) * v10 + gate(2, 3) * v11;
        a[i11] = gate(3, 0) * v00 + gate(3, 1) * v01 + gate(3, 2) * v10 + gate(3, 3) * v11;
    }
}

double expectation_pauli(const Statevector& state, const PauliString& p) {
    if (static_cast<int>(p.ops.size()) != state.n_qubits)
        throw std::invalid_argument("expectation_pauli: length mismatch");
    Statevector tmp = state;
    for (int q = 0; q < state.n_qubits; ++q) {
        if (p.ops[q] != 'I') apply_1q(tmp, pauli_1q(p.ops[q]), q);
    }
    return state.amplitudes.dot(tmp.amplitudes).real();
}

namespace {

// shared partial-trace kernel over an arbitrary 2^n x 2^n density matrix
MatX partial_trace(const MatX& rho, int n_qubits, const std::vector<int>& keep) {
    if (keep.empty()) throw std::invalid_argument("reduced_density: keep must be nonempty");
    for (const int q : keep)
        if (q < 0 || q >= n_qubits) throw std::invalid_argument("reduced_density: qubit out of range");
    const int k = static_cast<int>(keep.size());
    std::vector<int> traced;
    for (int q = 0; q < n_qubits; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

    auto full_index = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
        Eigen::Index idx = 0;
        for (int j = 0; j < k; ++j)
            if (kept_bits & (Eigen::Index{1} << (k - 1 - j)))
                idx |= Eigen::Index{1} << (n_qubits - 1 - keep[j]);
        for (size_t j = 0; j < traced.size(); ++j)
            if (traced_bits & (Eigen::Index{1} << (traced.size() - 1 - j)))
                idx |= Eigen::Index{1} << (n_qubits - 1 - traced[j]);
        return idx;
    };

    const Eigen::Index dk = Eigen::Index{1} << k;
    const Eigen::Index dt = Eigen::Index{1} << traced.size();
    MatX out = MatX::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r)
        for (Eigen::Index c = 0; c < dk; ++c)
            for (Eigen::Index t = 0; t < dt; ++t)
                out(r, c) += rho(full_index(r, t), full_index(c, t));
    return out;
}

}  // namespace

DensityMatrix reduced_density(const Statevector& state, const std::vector<int>& keep) {
    const MatX rho = state.amplitudes * state.amplitudes.adjoint();
    return DensityMatrix{static_cast<int>(keep.size()), partial_trace(rho, state.n_qubits, keep)};
}

DensityMatrix reduced_density(const DensityMatrix& rho, const std::vector<int>& keep) {
    return DensityMatrix{static_cast<int>(keep.size()),
                         partial_trace(rho.matrix, rho.n_qubits, keep)};
}

Eigen::VectorXd probabilities(const Statevector& state) {
    return state.amplitudes.cwiseAbs2();
}

std::string index_to_bits(Eigen::Index idx, int n_bits) {
    std::string s(n_bits, '0');
    for (int b = 0; b < n_bits; ++b)
        if (idx & (Eigen::Index{1} << (n_bits - 1 - b))) s[b] = '1';
    return s;
}

CountsRecord sample_counts(const Eigen::VectorXd& probs, long shots, std::uint64_t seed,
                           int n_bits, const std::string& setting) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        if (probs[i] < -1e-9)
            throw std::invalid_argument("sample_counts: negative probability");
        sum += std::max(0.0, probs[i]);
    }
    if (std::abs(sum - 1.0) > 1e-9 && sum <= 0.0)
        throw std::invalid_argument("sample_counts: probabilities sum to zero");
    Rng rng(seed);
    const auto counts = rng.multinomial(probs.cwiseMax(0.0) / sum, shots);
    CountsRecord rec;
    rec.setting = setting;
    rec.shots = shots;
    for (size_t i = 0; i < counts.size(); ++i)
        if (counts[i] > 0) rec.counts[index_to_bits(static_cast<Eigen::Index>(i), n_bits)] = counts[i];
    return rec;
}

MatX embed_gate(const MatX& gate, const std::vector<int>& targets, int n_qubits) {
    const int k = static_cast<int>(targets.size());
    if (gate.rows() != (Eigen::Index{1} << k))
        throw std::invalid_argument("embed_gate: size mismatch");
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    MatX out = MatX::Zero(dim, dim);
    const Eigen::Index dk = Eigen::Index{1} << k;

    std::vector<Eigen::Index> masks(k);
    for (int j = 0; j < k; ++j) masks[j] = Eigen::Index{1} << (n_qubits - 1 - targets[j]);
    Eigen::Index rest_mask = dim - 1;
    for (const auto m : masks) rest_mask &= ~m;

    auto compose = [&](Eigen::Index sub, Eigen::Index rest) {
        Eigen::Index idx = rest;
        for (int j = 0; j < k; ++j)
            if (sub & (Eigen::Index{1} << (k - 1 - j))) idx |= masks[j];
        return idx;
    };

    // iterate over the bit patterns of the non-target qubits
    for (Eigen::Index rest = 0;; rest = (rest - rest_mask) & rest_mask) {
        for (Eigen::Index r = 0; r < dk; ++r)
            for (Eigen::Index c = 0; c < dk; ++c)
                out(compose(r, rest), compose(c, rest)) = gate(r, c);
        if (rest == rest_mask) break;
    }
    return out;
}

}  // namespace nuosc
