#include <doctest.h>

#include <nuosc/model.hpp>
#include <nuosc/statevector.hpp>

using namespace nuosc;

TEST_CASE("reference model fields and couplings") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    CHECK(m.b(0) == doctest::Approx(0.380188415123161).epsilon(1e-12));
    CHECK(m.b(1) == 0.0);
    CHECK(m.b(2) == doctest::Approx(-0.924909059857313).epsilon(1e-12));
    CHECK(m.b.norm() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(m.J(0, 1) == doctest::Approx(0.01128012825888891).epsilon(1e-12));
    CHECK(m.J(0, 2) == doctest::Approx(0.044866030448481586).epsilon(1e-12));
    CHECK(m.J(0, 3) == doctest::Approx(0.1).epsilon(1e-12));
    // symmetry, zero diagonal, translation invariance of the angle grid
    CHECK(m.J(1, 0) == m.J(0, 1));
    CHECK(m.J(1, 2) == doctest::Approx(m.J(0, 1)).epsilon(1e-14));
    CHECK(m.J(0, 0) == 0.0);
}

TEST_CASE("matter term shifts only b_z") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.25);
    CHECK(m.b(0) == doctest::Approx(0.380188415123161).epsilon(1e-12));
    CHECK(m.b(2) == doctest::Approx(-0.924909059857313 + 0.25).epsilon(1e-12));
}

TEST_CASE("pair hamiltonian is Hermitian, traceless, with frozen spectrum") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const PairHamiltonian h = pair_hamiltonian(m, 0, 1);
    CHECK((h.h - h.h.adjoint()).norm() < 1e-14);
    CHECK(std::abs(h.h.trace()) < 1e-14);
    Eigen::SelfAdjointEigenSolver<Mat4> es(h.h);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-0.655386538407778).epsilon(1e-9));
    CHECK(es.eigenvalues()(3) == doctest::Approx(0.677946794925556).epsilon(1e-9));
    CHECK_THROWS(pair_hamiltonian(m, 1, 1));
}

TEST_CASE("pure exchange pair: b=0, J=1 gives the sigma.sigma spectrum") {
    NeutrinoModel m = build_model(2, 0.195, 0.9, 0.0);
    m.b.setZero();
    m.J.setConstant(1.0);
    m.J.diagonal().setZero();
    const PairHamiltonian h = pair_hamiltonian(m, 0, 1);
    Eigen::SelfAdjointEigenSolver<Mat4> es(h.h);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("full hamiltonian spectrum endpoints are frozen") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const MatX h = full_hamiltonian(m);
    CHECK((h - h.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<MatX> es(h);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-3.7764275543263692).epsilon(1e-9));
    CHECK(es.eigenvalues()(15) == doctest::Approx(4.223572445673628).epsilon(1e-9));
}

TEST_CASE("pair hamiltonians sum to the full hamiltonian") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    MatX sum = MatX::Zero(16, 16);
    for (int p = 0; p < 4; ++p)
        for (int q = p + 1; q < 4; ++q)
            sum += embed_gate(pair_hamiltonian(m, p, q).h, {p, q}, 4);
    CHECK((sum - full_hamiltonian(m)).norm() < 1e-12);
}

TEST_CASE("exact propagator is unitary and exact_evolve matches it") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const MatX u = exact_propagator(m, 3.1);
    CHECK(is_unitary(u, 1e-10));
    const Statevector psi0 = new_basis_state(4, "0011");
    const Statevector psi = exact_evolve(psi0, m, 3.1);
    CHECK((psi.amplitudes - u * psi0.amplitudes).norm() < 1e-10);
    // group property e(-iH a) e(-iH b) = e(-iH (a+b))
    const MatX u2 = exact_propagator(m, 1.3) * exact_propagator(m, 1.8);
    CHECK((u2 - u).norm() < 1e-10);
}

TEST_CASE("exact inversion probability anchors") {
    // P_inv from the exactly evolved |0011>: frozen dense-oracle values.
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const Statevector psi0 = new_basis_state(4, "0011");
    const Statevector psi = exact_evolve(psi0, m, 4.0);
    const Eigen::VectorXd p = probabilities(psi);
    double p_inv_1 = 0.0;
    for (int idx = 0; idx < 16; ++idx)
        if ((idx >> 3) & 1) p_inv_1 += p(idx);  // neutrino 1 flipped to x
    CHECK(p_inv_1 == doctest::Approx(0.540643274857628).epsilon(1e-9));
}
