#include "nuosc/noise.hpp"

#include <stdexcept>

#include "nuosc/rng.hpp"

namespace nuosc {

NoiseModel NoiseModel::off(int n_qubits) {
    NoiseModel nm;
    nm.depol_2q = 0.0;
    nm.readout_e0 = Eigen::VectorXd::Zero(n_qubits);
    nm.readout_e1 = Eigen::VectorXd::Zero(n_qubits);
    return nm;
}

NoiseModel NoiseModel::uniform(int n_qubits, double depol, double e0, double e1) {
    NoiseModel nm;
    nm.depol_2q = depol;
    nm.readout_e0 = Eigen::VectorXd::Constant(n_qubits, e0);
    nm.readout_e1 = Eigen::VectorXd::Constant(n_qubits, e1);
    return nm;
}

Circuit amplify_noise(const Circuit& circuit, int r) {
    if (r < 1 || r % 2 == 0) throw std::invalid_argument("amplify_noise: r must be odd");
    Circuit out;
    out.n_qubits = circuit.n_qubits;
    out.permutation = circuit.permutation;
    out.global_phase = circuit.global_phase;
    for (const auto& g : circuit.gates) {
        if (g.kind != GateKind::Entangler) {
            out.gates.push_back(g);
            continue;
        }
        // G (G^dag G)^((r-1)/2) applied as r alternating gates
        out.gates.push_back(g);
        Gate gd = g;
        gd.matrix = MatX(g.matrix.adjoint());
        for (int i = 0; i < (r - 1) / 2; ++i) {
            out.gates.push_back(gd);
            out.gates.push_back(g);
        }
    }
    return out;
}

namespace {

void apply_gate_dm(MatX& rho, const Gate& g, int n_qubits) {
    const std::vector<int> targets =
        g.kind == GateKind::OneQ ? std::vector<int>{g.q1} : std::vector<int>{g.q1, g.q2};
    const MatX u = embed_gate(g.matrix, targets, n_qubits);
    rho = u * rho * u.adjoint();
}

// rho -> (1-p) rho + p * (I/4 (x) Tr_pair rho) on the two targeted qubits
void depolarize_pair(MatX& rho, int q1, int q2, double p, int n_qubits) {
    if (p <= 0.0) return;
    std::vector<int> rest;
    for (int q = 0; q < n_qubits; ++q)
        if (q != q1 && q != q2) rest.push_back(q);
    MatX mixed;
    if (rest.empty()) {
        mixed = MatX::Identity(4, 4) / 4.0;
    } else {
        const DensityMatrix env = reduced_density(DensityMatrix{n_qubits, rho}, rest);
        // embed I/4 on (q1,q2) tensor env back into the global ordering
        const Eigen::Index dim = Eigen::Index{1} << n_qubits;
        mixed = MatX::Zero(dim, dim);
        const int nr = static_cast<int>(rest.size());
        auto compose = [&](Eigen::Index pairbits, Eigen::Index restbits) {
            Eigen::Index idx = 0;
            if (pairbits & 2) idx |= Eigen::Index{1} << (n_qubits - 1 - q1);
            if (pairbits & 1) idx |= Eigen::Index{1} << (n_qubits - 1 - q2);
            for (int j = 0; j < nr; ++j)
                if (restbits & (Eigen::Index{1} << (nr - 1 - j)))
                    idx |= Eigen::Index{1} << (n_qubits - 1 - rest[j]);
            return idx;
        };
        const Eigen::Index dr = Eigen::Index{1} << nr;
        for (Eigen::Index pb = 0; pb < 4; ++pb)
            for (Eigen::Index r = 0; r < dr; ++r)
                for (Eigen::Index c = 0; c < dr; ++c)
                    mixed(compose(pb, r), compose(pb, c)) = env.matrix(r, c) / 4.0;
    }
    rho = (1.0 - p) * rho + p * mixed;
}

}  // namespace

DensityMatrix run_noisy_density(const Circuit& circuit, const Statevector& initial,
                                const NoiseModel& noise) {
    if (initial.n_qubits != circuit.n_qubits)
        throw std::invalid_argument("run_noisy_density: qubit count mismatch");
    MatX rho = initial.amplitudes * initial.amplitudes.adjoint();
    for (const auto& g : circuit.gates) {
        apply_gate_dm(rho, g, circuit.n_qubits);
        if (g.kind == GateKind::Entangler)
            depolarize_pair(rho, g.q1, g.q2, noise.depol_2q, circuit.n_qubits);
    }
    return DensityMatrix{circuit.n_qubits, rho};
}

Eigen::VectorXd measurement_probabilities(const DensityMatrix& rho,
                                          const std::string& basis_setting) {
    if (static_cast<int>(basis_setting.size()) != rho.n_qubits)
        throw std::invalid_argument("measurement_probabilities: setting length mismatch");
    // rotate each qubit so the requested axis becomes Z
    MatX rotated = rho.matrix;
    for (int q = 0; q < rho.n_qubits; ++q) {
        Mat2 r;
        switch (basis_setting[q]) {
            case 'Z': continue;
            case 'X': r = rot_y(-M_PI / 2); break;   // X -> Z
            case 'Y': r = rot_x(M_PI / 2); break;    // Y -> Z
            default: throw std::invalid_argument("measurement_probabilities: bad basis char");
        }
        const MatX u = embed_gate(r, {q}, rho.n_qubits);
        rotated = u * rotated * u.adjoint();
    }
    return rotated.diagonal().real();
}

Eigen::VectorXd corrupt_readout(const Eigen::VectorXd& probs, const NoiseModel& noise) {
    const int n = static_cast<int>(noise.readout_e0.size());
    if (probs.size() != (Eigen::Index{1} << n))
        throw std::invalid_argument("corrupt_readout: size mismatch");
    Eigen::VectorXd p = probs;
    for (int q = 0; q < n; ++q) {
        const double e0 = noise.readout_e0[q], e1 = noise.readout_e1[q];
        if (e0 == 0.0 && e1 == 0.0) continue;
        const Eigen::Index mask = Eigen::Index{1} << (n - 1 - q);
        Eigen::VectorXd next = Eigen::VectorXd::Zero(p.size());
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            const Eigen::Index i0 = i & ~mask, i1 = i | mask;
            if (i & mask) continue;
            next[i0] += (1 - e0) * p[i0] + e1 * p[i1];
            next[i1] += e0 * p[i0] + (1 - e1) * p[i1];
        }
        p = next;
    }
    return p;
}

CountsRecord run_noisy(const Circuit& circuit, const Statevector& initial,
                       const NoiseModel& noise, const std::string& basis_setting,
                       long shots, std::uint64_t seed) {
    const DensityMatrix rho = run_noisy_density(circuit, initial, noise);
    Eigen::VectorXd p = measurement_probabilities(rho, basis_setting);
    p = corrupt_readout(p, noise);
    return sample_counts(p, shots, seed, circuit.n_qubits, basis_setting);
}

CalibrationRecord calibration_run(const NoiseModel& noise, int n_qubits, long shots,
                                  std::uint64_t seed) {
    CalibrationRecord rec;
    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(Eigen::Index{1} << n_qubits);
    p0[0] = 1.0;
    Eigen::VectorXd p1 = Eigen::VectorXd::Zero(Eigen::Index{1} << n_qubits);
    p1[p1.size() - 1] = 1.0;
    rec.zeros = sample_counts(corrupt_readout(p0, noise), shots,
                              derive_seed(seed, {"calib", "zeros"}), n_qubits, "Z");
    rec.ones = sample_counts(corrupt_readout(p1, noise), shots,
                             derive_seed(seed, {"calib", "ones"}), n_qubits, "Z");
    return rec;
}

}  // namespace nuosc
