#include <doctest.h>

#include <nuosc/kak.hpp>
#include <nuosc/model.hpp>
#include <nuosc/observables.hpp>
#include <nuosc/rng.hpp>
#include <nuosc/statevector.hpp>

using namespace nuosc;

namespace {

Mat4 bell_dm() {
    VecX v = VecX::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return v * v.adjoint();
}

Mat2 random_su2(Rng& rng) {
    return Mat2(rot_z(rng.normal()) * rot_y(rng.normal()) * rot_z(rng.normal()));
}

}  // namespace

TEST_CASE("inversion probability from counts follows the permutation") {
    CountsRecord rec;
    rec.setting = "ZZ";
    rec.counts = {{"00", 10L}, {"01", 30L}, {"10", 20L}, {"11", 40L}};
    rec.shots = 100;
    const std::vector<int> ident = {0, 1};
    // neutrino 0 started in flavor 0: inverted when its bit reads 1
    CHECK(inversion_probability(rec, 0, 0, ident) == doctest::Approx(0.6));
    CHECK(inversion_probability(rec, 1, 0, ident) == doctest::Approx(0.7));
    CHECK(inversion_probability(rec, 1, 1, ident) == doctest::Approx(0.3));
    // swapped wires: neutrino 0 is carried by physical wire 1
    const std::vector<int> swapped = {1, 0};
    CHECK(inversion_probability(rec, 0, 0, swapped) == doctest::Approx(0.7));
}

TEST_CASE("inversion probability from probability vectors") {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(16);
    p(0b0011) = 1.0;
    const std::vector<int> ident = {0, 1, 2, 3};
    CHECK(inversion_probability(p, 4, 0, 0, ident) == doctest::Approx(0.0));
    CHECK(inversion_probability(p, 4, 3, 0, ident) == doctest::Approx(1.0));
}

TEST_CASE("von Neumann entropy anchors") {
    CHECK(von_neumann_entropy(MatX(Mat2::Identity() / 2.0)) == doctest::Approx(1.0));
    CHECK(von_neumann_entropy(MatX(Mat4::Identity() / 4.0)) == doctest::Approx(2.0));
    CHECK(von_neumann_entropy(bell_dm()) == doctest::Approx(0.0).epsilon(1e-10));
    MatX rho = MatX::Zero(2, 2);
    rho(0, 0) = 0.9;
    rho(1, 1) = 0.1;
    CHECK(von_neumann_entropy(rho) ==
          doctest::Approx(-0.9 * std::log2(0.9) - 0.1 * std::log2(0.1)));
    MatX bad = MatX::Zero(2, 2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    CHECK_THROWS(von_neumann_entropy(bad));
}

TEST_CASE("concurrence anchors") {
    CHECK(concurrence(bell_dm()) == doctest::Approx(1.0));
    // product state
    Mat4 prod = Mat4::Zero();
    prod(0, 0) = 1.0;
    CHECK(concurrence(prod) == doctest::Approx(0.0));
    CHECK(extended_concurrence(Mat4(Mat4::Identity() / 4.0)) == doctest::Approx(-0.5));
    // Werner state: C = max(0, (3w-1)/2)
    for (const double w : {0.2, 0.5, 0.8}) {
        const Mat4 rho = Mat4(w * bell_dm() + (1 - w) * Mat4::Identity() / 4.0);
        CHECK(concurrence(rho) ==
              doctest::Approx(std::max(0.0, (3 * w - 1) / 2)).epsilon(1e-9));
        CHECK(extended_concurrence(rho) == doctest::Approx((3 * w - 1) / 2).epsilon(1e-9));
    }
}

TEST_CASE("concurrence is invariant under local unitaries") {
    Rng rng(71);
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const Statevector psi = exact_evolve(new_basis_state(4, "0011"), m, 4.0);
    const Mat4 rho = Mat4(reduced_density(psi, {0, 1}).matrix);
    const double base = extended_concurrence(rho);
    for (int rep = 0; rep < 20; ++rep) {
        const Mat4 u = kron2(random_su2(rng), random_su2(rng));
        CHECK(extended_concurrence(Mat4(u * rho * u.adjoint())) ==
              doctest::Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("frozen reference-model entanglement values at t=4") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const Statevector psi = exact_evolve(new_basis_state(4, "0011"), m, 4.0);
    const Mat4 r12 = Mat4(reduced_density(psi, {0, 1}).matrix);
    CHECK(von_neumann_entropy(r12) == doctest::Approx(1.1663948945444729).epsilon(1e-9));
    CHECK(concurrence(r12) == doctest::Approx(0.17982034890232712).epsilon(1e-8));
    const Mat4 r24 = Mat4(reduced_density(psi, {1, 3}).matrix);
    CHECK(extended_concurrence(r24) == doctest::Approx(0.36756013248571034).epsilon(1e-8));
    const MatX r1 = reduced_density(psi, {0}).matrix;
    CHECK(von_neumann_entropy(r1) == doctest::Approx(0.9931436097115938).epsilon(1e-9));
}

TEST_CASE("single spin entropy averages three pair reductions") {
    const NeutrinoModel m = build_model(4, 0.195, 0.9, 0.0);
    const Statevector psi = exact_evolve(new_basis_state(4, "0011"), m, 4.0);
    std::vector<PairReduction> pairs;
    for (const int other : {1, 2, 3})
        pairs.push_back({Mat4(reduced_density(psi, {0, other}).matrix), 0.01 * other});
    const ValueWithError v = single_spin_entropy_avg(pairs);
    CHECK(v.value == doctest::Approx(0.9931436097115938).epsilon(1e-9));
    CHECK(v.error == doctest::Approx(0.02));
    CHECK_THROWS(single_spin_entropy_avg({pairs[0]}));
}
