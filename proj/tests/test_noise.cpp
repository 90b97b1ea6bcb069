#include <doctest.h>

#include <nuosc/circuit.hpp>
#include <nuosc/model.hpp>
#include <nuosc/noise.hpp>

using namespace nuosc;

TEST_CASE("amplify_noise preserves the unitary and scales entanglers") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const Circuit base = compile_circuit(swap_network_circuit(m, 1.0, {1, 3, 2, 4}));
    const int base_ent = gate_counts(base).entanglers;
    for (const int r : {1, 3, 5}) {
        const Circuit folded = amplify_noise(base, r);
        CHECK(gate_counts(folded).entanglers == r * base_ent);
        CHECK((circuit_unitary(folded) - circuit_unitary(base)).norm() < 1e-8);
    }
    CHECK_THROWS(amplify_noise(base, 2));  // folding needs odd r
    CHECK(gate_counts(amplify_noise(base, 3)).entanglers == 54);
}

TEST_CASE("noiseless density run equals the pure state") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const Circuit c = compile_circuit(swap_network_circuit(m, 2.0, {1, 3, 2, 4}));
    const Statevector psi0 = new_basis_state(4, "0011");
    const DensityMatrix rho = run_noisy_density(c, psi0, NoiseModel::off(4));
    Statevector psi = psi0;
    apply_circuit(psi, c);
    const MatX pure = psi.amplitudes * psi.amplitudes.adjoint();
    CHECK((rho.matrix - pure).norm() < 1e-10);
}

TEST_CASE("density stays physical under depolarizing noise") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const Circuit c = compile_circuit(swap_network_circuit(m, 2.0, {1, 3, 2, 4}));
    const Statevector psi0 = new_basis_state(4, "0011");
    const DensityMatrix rho = run_noisy_density(c, psi0, NoiseModel::uniform(4, 0.05, 0.0, 0.0));
    CHECK(std::abs(rho.matrix.trace().real() - 1.0) < 1e-10);
    Eigen::SelfAdjointEigenSolver<MatX> es(rho.matrix);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    // purity strictly below 1 once noise acts
    CHECK((rho.matrix * rho.matrix).trace().real() < 0.999);
}

TEST_CASE("full depolarization drives the state maximally mixed") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const Circuit c = compile_circuit(swap_network_circuit(m, 2.0, {1, 3, 2, 4}));
    const Statevector psi0 = new_basis_state(4, "0011");
    const DensityMatrix rho = run_noisy_density(c, psi0, NoiseModel::uniform(4, 1.0, 0.0, 0.0));
    CHECK((rho.matrix - MatX::Identity(16, 16) / 16.0).norm() < 0.02);
}

TEST_CASE("measurement probabilities rotate per-qubit bases") {
    // |+> measured in X is deterministic, in Z it is 50/50
    Statevector plus = new_basis_state(1, "0");
    apply_1q(plus, rot_y(M_PI / 2.0), 0);
    DensityMatrix rho{1, plus.amplitudes * plus.amplitudes.adjoint()};
    const Eigen::VectorXd px = measurement_probabilities(rho, "X");
    CHECK(px(0) == doctest::Approx(1.0).epsilon(1e-10));
    const Eigen::VectorXd pz = measurement_probabilities(rho, "Z");
    CHECK(pz(0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("corrupt_readout applies the confusion matrices") {
    NoiseModel noise = NoiseModel::off(2);
    noise.readout_e0 << 0.1, 0.0;
    noise.readout_e1 << 0.0, 0.2;
    Eigen::VectorXd ideal(4);
    ideal << 1.0, 0.0, 0.0, 0.0;  // |00>
    const Eigen::VectorXd p = corrupt_readout(ideal, noise);
    CHECK(p(0b00) == doctest::Approx(0.9));
    CHECK(p(0b10) == doctest::Approx(0.1));
    CHECK(p.sum() == doctest::Approx(1.0));
    Eigen::VectorXd one(4);
    one << 0.0, 1.0, 0.0, 0.0;  // |01>
    const Eigen::VectorXd q = corrupt_readout(one, noise);
    CHECK(q(0b00) == doctest::Approx(0.2 * 0.9));
    CHECK(q(0b01) == doctest::Approx(0.8 * 0.9));
}

TEST_CASE("run_noisy sampling is deterministic and respects readout errors") {
    const NeutrinoModel m = build_model(2, 0.195, 0.9, 0.0);
    const Circuit c = compile_circuit(swap_network_circuit(m, 1.0));
    const Statevector psi0 = new_basis_state(2, "01");
    const NoiseModel noise = NoiseModel::uniform(2, 0.01, 0.02, 0.03);
    const CountsRecord a = run_noisy(c, psi0, noise, "ZZ", 4096, 77);
    const CountsRecord b = run_noisy(c, psi0, noise, "ZZ", 4096, 77);
    CHECK(a.counts == b.counts);
    CHECK(a.shots == 4096);
}

TEST_CASE("calibration_run reflects the injected readout rates") {
    const NoiseModel noise = NoiseModel::uniform(3, 0.0, 0.05, 0.08);
    const CalibrationRecord calib = calibration_run(noise, 3, 200000, 11);
    // qubit 0 error rate out of the |000> preparation
    long flips = 0;
    for (const auto& [bits, c] : calib.zeros.counts)
        if (bits[0] == '1') flips += c;
    CHECK(static_cast<double>(flips) / 200000.0 == doctest::Approx(0.05).epsilon(0.05));
    long drops = 0;
    for (const auto& [bits, c] : calib.ones.counts)
        if (bits[2] == '0') drops += c;
    CHECK(static_cast<double>(drops) / 200000.0 == doctest::Approx(0.08).epsilon(0.05));
}
