#include <doctest.h>

#include <complex>

#include <nuosc/rng.hpp>
#include <nuosc/statevector.hpp>

using namespace nuosc;

namespace {
constexpr std::complex<double> kI(0.0, 1.0);
}

TEST_CASE("basis states follow the MSB-first bitstring convention") {
    const Statevector s = new_basis_state(4, "0011");
    CHECK(s.dim() == 16);
    CHECK(s.amplitudes(0b0011) == std::complex<double>(1.0, 0.0));
    CHECK(s.norm() == doctest::Approx(1.0));
    CHECK(index_to_bits(0b0011, 4) == "0011");
    CHECK(index_to_bits(5, 4) == "0101");
}

TEST_CASE("pauli matrices and rotations") {
    CHECK((pauli_1q('X') * pauli_1q('X') - Mat2::Identity()).norm() == doctest::Approx(0.0));
    CHECK((pauli_1q('X') * pauli_1q('Y') - kI * pauli_1q('Z')).norm() ==
          doctest::Approx(0.0));
    CHECK(is_unitary(rot_x(0.37)));
    CHECK(is_unitary(rot_y(1.2)));
    CHECK(is_unitary(rot_z(-2.5)));
    // rot_a(theta) = exp(-i theta/2 sigma_a)
    const Mat2 expected =
        std::cos(0.37 / 2) * Mat2::Identity() - kI * std::sin(0.37 / 2) * pauli_1q('X');
    CHECK((rot_x(0.37) - expected).norm() == doctest::Approx(0.0));
    CHECK_THROWS(pauli_1q('Q'));
}

TEST_CASE("apply_1q flips the addressed qubit only") {
    Statevector s = new_basis_state(3, "000");
    apply_1q(s, pauli_1q('X'), 0);  // qubit 0 = most significant bit
    CHECK(std::abs(s.amplitudes(0b100)) == doctest::Approx(1.0));
    apply_1q(s, pauli_1q('X'), 2);
    CHECK(std::abs(s.amplitudes(0b101)) == doctest::Approx(1.0));
}

TEST_CASE("apply_2q uses q1 as the high bit of the gate basis") {
    Mat4 cx = Mat4::Zero();  // control = high qubit
    cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
    Statevector s = new_basis_state(3, "100");
    apply_2q(s, cx, 0, 2);  // control qubit 0, target qubit 2
    CHECK(std::abs(s.amplitudes(0b101)) == doctest::Approx(1.0));
    // and with reversed wire roles the control moves
    s = new_basis_state(3, "001");
    apply_2q(s, cx, 2, 0);
    CHECK(std::abs(s.amplitudes(0b101)) == doctest::Approx(1.0));
}

TEST_CASE("expectation_pauli on |0011>") {
    const Statevector s = new_basis_state(4, "0011");
    CHECK(expectation_pauli(s, {"ZIII"}) == doctest::Approx(1.0));
    CHECK(expectation_pauli(s, {"IIIZ"}) == doctest::Approx(-1.0));
    CHECK(expectation_pauli(s, {"XIII"}) == doctest::Approx(0.0));
    CHECK(expectation_pauli(s, {"ZZZZ"}) == doctest::Approx(1.0));
}

TEST_CASE("reduced_density of a Bell pair is maximally mixed") {
    Statevector s = new_basis_state(2, "00");
    Mat2 h;
    h << 1.0, 1.0, 1.0, -1.0;
    h /= std::sqrt(2.0);
    apply_1q(s, h, 0);
    Mat4 cx = Mat4::Zero();
    cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
    apply_2q(s, cx, 0, 1);
    const DensityMatrix r = reduced_density(s, {0});
    CHECK((MatX(r.matrix) - MatX(0.5 * Mat2::Identity())).norm() < 1e-12);
    // keep order sets bit significance
    const DensityMatrix both = reduced_density(s, {1, 0});
    CHECK(both.matrix(0, 0).real() == doctest::Approx(0.5));
    CHECK(both.matrix(0, 3).real() == doctest::Approx(0.5));
}

TEST_CASE("probabilities and sampling agree in the large-shot limit") {
    Statevector s = new_basis_state(1, "0");
    apply_1q(s, rot_y(1.0), 0);
    const Eigen::VectorXd p = probabilities(s);
    CHECK(p.sum() == doctest::Approx(1.0));
    const CountsRecord rec = sample_counts(p, 200000, 5, 1);
    CHECK(rec.shots == 200000);
    long total = 0;
    for (const auto& [bits, c] : rec.counts) total += c;
    CHECK(total == 200000);
    const double f1 = static_cast<double>(rec.counts.at("1")) / 200000.0;
    CHECK(f1 == doctest::Approx(p(1)).epsilon(0.02));
    // determinism
    const CountsRecord again = sample_counts(p, 200000, 5, 1);
    CHECK(again.counts == rec.counts);
}

TEST_CASE("embed_gate places a 2q gate on the chosen wires") {
    Mat4 sw = Mat4::Zero();
    sw(0, 0) = sw(1, 2) = sw(2, 1) = sw(3, 3) = 1.0;
    const MatX full = embed_gate(sw, {0, 2}, 3);
    Statevector s = new_basis_state(3, "100");
    s.amplitudes = full * s.amplitudes;
    CHECK(std::abs(s.amplitudes(0b001)) == doctest::Approx(1.0));
}
