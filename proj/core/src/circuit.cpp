#include "nuosc/circuit.hpp"

#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "nuosc/kak.hpp"

namespace nuosc {

using cplx = std::complex<double>;

Mat4 swap_gate() {
    Mat4 m = Mat4::Zero();
    m(0, 0) = m(3, 3) = m(1, 2) = m(2, 1) = 1.0;
    return m;
}

Mat4 cnot_gate() {
    Mat4 m = Mat4::Zero();
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
}

Mat4 cnot_rev_gate() {
    Mat4 m = Mat4::Zero();
    m(0, 0) = m(2, 2) = m(1, 3) = m(3, 1) = 1.0;
    return m;
}

Mat4 pair_unitary(const NeutrinoModel& model, int p, int q, double t) {
    const PairHamiltonian ph = pair_hamiltonian(model, p, q);
    return expm_i_hermitian(ph.h, -t);
}

namespace {

void push_1q(Circuit& c, const Mat2& m, int q) {
    c.gates.push_back(Gate{GateKind::OneQ, m, q, -1});
}

void push_2q(Circuit& c, const Mat4& m, int q1, int q2, GateKind kind = GateKind::TwoQ) {
    if (std::abs(q1 - q2) != 1)
        throw std::invalid_argument("circuit: 2q gates must act on adjacent wires");
    c.gates.push_back(Gate{kind, m, q1, q2});
}

Mat2 one_body_rotation(const NeutrinoModel& model, double t) {
    Mat2 h = Mat2::Zero();
    h += model.b[0] * pauli_1q('X');
    h += model.b[1] * pauli_1q('Y');
    h += model.b[2] * pauli_1q('Z');
    return expm_i_hermitian(h, -t);
}

Mat4 exchange_unitary(double j, double t) {
    Mat4 h = Mat4::Zero();
    const char l[3] = {'X', 'Y', 'Z'};
    for (const char a : l) h += j * kron2(pauli_1q(a), pauli_1q(a));
    return expm_i_hermitian(h, -t);
}

}  // namespace

Circuit trotter_u1_circuit(const NeutrinoModel& model, double t) {
    Circuit c;
    c.n_qubits = model.n;
    c.permutation.resize(model.n);
    std::iota(c.permutation.begin(), c.permutation.end(), 0);

    // two-body factors first; the lexicographic product has (N-1,N) rightmost,
    // so that pair is applied to the state first
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < model.n; ++p)
        for (int q = p + 1; q < model.n; ++q) pairs.emplace_back(p, q);
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
        const auto [p, q] = *it;
        // route q down to p+1 with SWAPs, interact, route back
        for (int w = q - 1; w > p; --w) push_2q(c, swap_gate(), w, w + 1);
        push_2q(c, exchange_unitary(model.J(p, q), t), p, p + 1);
        for (int w = p + 1; w < q; ++w) push_2q(c, swap_gate(), w, w + 1);
    }
    for (int j = 0; j < model.n; ++j) push_1q(c, one_body_rotation(model, t), j);
    return c;
}

Circuit swap_network_circuit(const NeutrinoModel& model, double t, std::vector<int> ordering) {
    const int n = model.n;
    if (ordering.empty()) {
        ordering.resize(n);
        std::iota(ordering.begin(), ordering.end(), 1);
    }
    {
        std::vector<int> check = ordering;
        std::sort(check.begin(), check.end());
        for (int i = 0; i < n; ++i)
            if (check[static_cast<size_t>(i)] != i + 1)
                throw std::invalid_argument("swap_network_circuit: ordering must be a permutation of 1..N");
    }

    Circuit c;
    c.n_qubits = n;
    std::vector<int> wire(n);  // wire[w] = logical neutrino (0-based) on wire w
    for (int w = 0; w < n; ++w) wire[w] = ordering[w] - 1;

    const Mat4 swp = swap_gate();
    for (int layer = 0; layer < n; ++layer) {
        const int first = (layer % 2 == 0) ? 0 : 1;  // odd bonds first
        for (int w = first; w + 1 < n; w += 2) {
            const int a = wire[w], b = wire[w + 1];
            // h_pq is symmetric under qubit exchange, so orientation is free
            const Mat4 u = pair_unitary(model, std::min(a, b), std::max(a, b), t);
            push_2q(c, swp * u, w, w + 1);
            std::swap(wire[w], wire[w + 1]);
        }
    }
    c.permutation.resize(n);
    for (int w = 0; w < n; ++w) c.permutation[wire[w]] = w;
    return c;
}

void apply_circuit(Statevector& state, const Circuit& circuit) {
    if (state.n_qubits != circuit.n_qubits)
        throw std::invalid_argument("apply_circuit: qubit count mismatch");
    for (const auto& g : circuit.gates) {
        if (g.kind == GateKind::OneQ)
            apply_1q(state, Mat2(g.matrix), g.q1);
        else
            apply_2q(state, Mat4(g.matrix), g.q1, g.q2);
    }
    state.amplitudes *= circuit.global_phase;
}

MatX circuit_unitary(const Circuit& circuit) {
    if (circuit.n_qubits > 10)
        throw std::runtime_error("circuit_unitary: refusing to densify > 10 qubits");
    const Eigen::Index dim = Eigen::Index{1} << circuit.n_qubits;
    MatX u = MatX::Identity(dim, dim);
    for (const auto& g : circuit.gates) {
        const std::vector<int> targets =
            g.kind == GateKind::OneQ ? std::vector<int>{g.q1} : std::vector<int>{g.q1, g.q2};
        u = embed_gate(g.matrix, targets, circuit.n_qubits) * u;
    }
    return circuit.global_phase * u;
}

int rotation_count(const Mat2& u) {
    const double tol = 1e-9;
    // strip global phase using the largest entry
    if (std::abs(u(0, 1)) < tol && std::abs(u(1, 0)) < tol) {
        // diagonal: identity or Rz
        return std::abs(u(0, 0) - u(1, 1)) < tol ? 0 : 1;
    }
    if (std::abs(u(0, 0)) < tol && std::abs(u(1, 1)) < tol) return 1;  // X- or Y-like axis
    // single-axis rotations have |u00| == |u11| and |u01| == |u10| with a
    // phase pattern of Rx (imag off-diag) or Ry (real off-diag) up to phase
    const cplx ph = u(0, 0) / std::abs(u(0, 0));
    const Mat2 v = u / ph;
    if (std::abs(std::imag(v(0, 0))) < tol && std::abs(std::imag(v(1, 1))) < tol) {
        if (std::abs(std::real(v(0, 1)) + std::real(v(1, 0))) < tol &&
            std::abs(std::imag(v(0, 1))) < tol && std::abs(std::imag(v(1, 0))) < tol)
            return 1;  // Ry
        if (std::abs(std::real(v(0, 1))) < tol && std::abs(std::real(v(1, 0))) < tol &&
            std::abs(std::imag(v(0, 1)) - std::imag(v(1, 0))) < tol)
            return 1;  // Rx
    }
    return 3;
}

GateCounts gate_counts(const Circuit& circuit) {
    GateCounts gc;
    for (const auto& g : circuit.gates) {
        switch (g.kind) {
            case GateKind::Entangler: gc.entanglers += 1; break;
            case GateKind::TwoQ: gc.uncompiled_2q += 1; break;
            case GateKind::OneQ: gc.single_qubit_rotations += rotation_count(Mat2(g.matrix)); break;
        }
    }
    return gc;
}

Circuit compile_circuit(const Circuit& circuit) {
    Circuit out;
    out.n_qubits = circuit.n_qubits;
    out.permutation = circuit.permutation;
    out.global_phase = circuit.global_phase;
    for (const auto& g : circuit.gates) {
        if (g.kind == GateKind::OneQ) {
            out.gates.push_back(g);
            continue;
        }
        if (g.kind == GateKind::Entangler) {
            out.gates.push_back(g);
            continue;
        }
        const CompiledGate cg = kak_decompose(Mat4(g.matrix));
        out.global_phase *= cg.global_phase;
        for (const auto& e : cg.elements) {
            if (e.entangler) {
                push_2q(out, e.two_q, g.q1, g.q2, GateKind::Entangler);
            } else {
                if (rotation_count(e.one_q_hi) > 0) push_1q(out, e.one_q_hi, g.q1);
                if (rotation_count(e.one_q_lo) > 0) push_1q(out, e.one_q_lo, g.q2);
            }
        }
    }
    return out;
}

Circuit inverted_circuit(const Circuit& circuit) {
    Circuit out;
    out.n_qubits = circuit.n_qubits;
    out.global_phase = std::conj(circuit.global_phase);
    out.permutation.resize(circuit.n_qubits);
    std::iota(out.permutation.begin(), out.permutation.end(), 0);
    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
        Gate g = *it;
        g.matrix = MatX(g.matrix.adjoint());
        out.gates.push_back(std::move(g));
    }
    return out;
}

nlohmann::json circuit_to_json(const Circuit& circuit) {
    nlohmann::json j;
    j["n_qubits"] = circuit.n_qubits;
    j["permutation"] = circuit.permutation;
    j["global_phase"] = {circuit.global_phase.real(), circuit.global_phase.imag()};
    j["gates"] = nlohmann::json::array();
    for (const auto& g : circuit.gates) {
        nlohmann::json gj;
        gj["kind"] = g.kind == GateKind::OneQ ? "1q" : (g.kind == GateKind::TwoQ ? "2q" : "entangler");
        gj["targets"] = g.kind == GateKind::OneQ ? std::vector<int>{g.q1}
                                                 : std::vector<int>{g.q1, g.q2};
        std::vector<double> entries;
        for (Eigen::Index r = 0; r < g.matrix.rows(); ++r)
            for (Eigen::Index cidx = 0; cidx < g.matrix.cols(); ++cidx) {
                entries.push_back(g.matrix(r, cidx).real());
                entries.push_back(g.matrix(r, cidx).imag());
            }
        gj["matrix"] = entries;
        j["gates"].push_back(gj);
    }
    return j;
}

Circuit circuit_from_json(const nlohmann::json& j) {
    Circuit c;
    c.n_qubits = j.at("n_qubits").get<int>();
    c.permutation = j.at("permutation").get<std::vector<int>>();
    const auto ph = j.at("global_phase").get<std::vector<double>>();
    c.global_phase = cplx(ph.at(0), ph.at(1));
    for (const auto& gj : j.at("gates")) {
        Gate g;
        const std::string kind = gj.at("kind").get<std::string>();
        g.kind = kind == "1q" ? GateKind::OneQ : (kind == "2q" ? GateKind::TwoQ : GateKind::Entangler);
        const auto targets = gj.at("targets").get<std::vector<int>>();
        g.q1 = targets.at(0);
        g.q2 = targets.size() > 1 ? targets.at(1) : -1;
        const auto entries = gj.at("matrix").get<std::vector<double>>();
        const Eigen::Index dim = g.kind == GateKind::OneQ ? 2 : 4;
        g.matrix.resize(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index cidx = 0; cidx < dim; ++cidx)
                g.matrix(r, cidx) = cplx(entries.at(2 * (r * dim + cidx)),
                                         entries.at(2 * (r * dim + cidx) + 1));
        c.gates.push_back(std::move(g));
    }
    return c;
}

}  // namespace nuosc
