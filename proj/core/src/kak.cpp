#include "nuosc/kak.hpp"

#include <stdexcept>

#include "nuosc/circuit.hpp"

namespace nuosc {

using cplx = std::complex<double>;
namespace {

const cplx I_UNIT(0.0, 1.0);

Mat4 magic_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    Mat4 m;
    m << s, 0, 0, s * I_UNIT,
         0, s * I_UNIT, s, 0,
         0, s * I_UNIT, -s, 0,
         s, 0, 0, -s * I_UNIT;
    return m;
}

// simultaneous orthogonal diagonalization of commuting real symmetric A, B
Eigen::Matrix4d simult_diag(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(a);
    Eigen::Matrix4d q = es.eigenvectors();
    const Eigen::Vector4d w = es.eigenvalues();
    int i = 0;
    while (i < 4) {
        int j = i + 1;
        while (j < 4 && std::abs(w[j] - w[i]) < 1e-7) ++j;
        if (j - i > 1) {
            const Eigen::MatrixXd sub =
                q.middleCols(i, j - i).transpose() * b * q.middleCols(i, j - i);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esb(
                0.5 * (sub + sub.transpose()));
            q.middleCols(i, j - i) = q.middleCols(i, j - i) * esb.eigenvectors();
        }
        i = j;
    }
    return q;
}

// factor a 4x4 tensor product G = phase * (A x B) into unit-determinant A, B
void nearest_kron(const Mat4& g, Mat2& a, Mat2& b, cplx& phase) {
    int i0 = 0, j0 = 0;
    double best = -1.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double n = g.block<2, 2>(2 * i, 2 * j).norm();
            if (n > best) { best = n; i0 = i; j0 = j; }
        }
    b = g.block<2, 2>(2 * i0, 2 * j0);
    b /= std::sqrt(std::abs(b.determinant()));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            a(i, j) = 0.5 * (b.adjoint() * g.block<2, 2>(2 * i, 2 * j)).trace();
    const cplx da = a.determinant();
    phase = std::sqrt(da);
    a /= phase;
    if ((g - phase * kron2(a, b)).cwiseAbs().maxCoeff() > 1e-7)
        throw std::runtime_error("kak: matrix is not a tensor product of 1q unitaries");
}

Mat2 pauli_by_index(int i) {
    return pauli_1q(i == 0 ? 'X' : (i == 1 ? 'Y' : 'Z'));
}

}  // namespace

Mat4 kron2(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Mat4 canonical_gate(double x, double y, double z) {
    Mat4 h = Mat4::Zero();
    const double c[3] = {x, y, z};
    for (int i = 0; i < 3; ++i) {
        const Mat2 p = pauli_by_index(i);
        h += c[i] * kron2(p, p);
    }
    Eigen::SelfAdjointEigenSolver<Mat4> es(h);
    Eigen::Vector4cd phases;
    for (int i = 0; i < 4; ++i) phases[i] = std::exp(I_UNIT * es.eigenvalues()[i]);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

KakDecomposition kak_canonicalize(const Mat4& u) {
    if (!is_unitary(u, 1e-10)) throw std::invalid_argument("kak: input is not unitary");
    const Mat4 magic = magic_basis();

    // phase out the determinant: us in SU(4) up to a residual quartic root
    const cplx det = u.determinant();
    cplx phase = std::pow(det, 0.25);
    const Mat4 us = u / phase;

    const Mat4 um = magic.adjoint() * us * magic;
    const Mat4 m2 = um.transpose() * um;
    Eigen::Matrix4d q = simult_diag(m2.real(), m2.imag());
    if (q.determinant() < 0) q.col(0) *= -1.0;

    const Eigen::Vector4cd d = (q.transpose() * m2 * q).diagonal();
    Eigen::Vector4d theta;
    Eigen::Vector4cd dd;
    for (int i = 0; i < 4; ++i) {
        theta[i] = 0.5 * std::arg(d[i]);
        dd[i] = std::exp(I_UNIT * theta[i]);
    }
    // square roots chosen so that prod(dd) = det(um) = +1
    if (std::real(dd.prod()) < 0.0) {
        dd[0] = -dd[0];
        theta[0] += M_PI;
    }

    Mat4 k1c = um * q * dd.conjugate().asDiagonal();
    if (k1c.imag().cwiseAbs().maxCoeff() > 1e-7)
        throw std::runtime_error("kak: left orthogonal factor not real");
    const Eigen::Matrix4d k1 = k1c.real();
    const Eigen::Matrix4d k2 = q.transpose();

    // magic-basis eigencolumn phases -> interaction coordinates
    double cx = 0.5 * (theta[0] + theta[1]);
    double cy = -0.5 * (theta[0] + theta[2]);
    double cz = -0.5 * (theta[1] + theta[2]);

    const Mat4 l1 = magic * k1.cast<cplx>() * magic.adjoint();
    const Mat4 l2 = magic * k2.cast<cplx>() * magic.adjoint();
    KakDecomposition out;
    cplx p1, p2;
    nearest_kron(l1, out.k1l, out.k1r, p1);
    nearest_kron(l2, out.k2l, out.k2r, p2);
    phase *= p1 * p2;

    // --- canonicalize the coordinates into the Weyl chamber ---
    double c[3] = {cx, cy, cz};
    auto lmul = [&](const Mat2& gl, const Mat2& gr) {
        // N(c_old) = (gl x gr) N(c_new) (gl x gr)^dag
        out.k1l = out.k1l * gl;
        out.k1r = out.k1r * gr;
        out.k2l = gl.adjoint() * out.k2l;
        out.k2r = gr.adjoint() * out.k2r;
    };
    auto shift = [&](int i, int dir) {
        // dir=-1: c[i] -= pi/2, N(old) = +i PP N(new); dir=+1 the inverse
        const Mat2 p = pauli_by_index(i);
        phase *= (dir < 0 ? I_UNIT : -I_UNIT);
        out.k1l = out.k1l * p;
        out.k1r = out.k1r * p;
        c[i] += dir * M_PI / 2;
    };
    auto flip = [&](int i, int j) {
        lmul(pauli_by_index(3 - i - j), Mat2::Identity());
        c[i] = -c[i];
        c[j] = -c[j];
    };
    auto do_swap = [&](int i, int j) {
        const int lo = std::min(i, j), hi = std::max(i, j);
        Mat2 p;
        if (lo == 0 && hi == 1) p = rot_z(M_PI / 2);
        else if (lo == 1 && hi == 2) p = rot_x(M_PI / 2);
        else p = rot_y(M_PI / 2);
        lmul(p, p);
        std::swap(c[i], c[j]);
    };

    for (int i = 0; i < 3; ++i) {
        while (c[i] > M_PI / 4 + 1e-12) shift(i, -1);
        while (c[i] <= -M_PI / 4 + 1e-12) shift(i, +1);
    }
    // order by decreasing magnitude
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int a, int b) { return std::abs(c[a]) > std::abs(c[b]); });
    if (order[0] != 0) do_swap(0, order[0]);
    if (std::abs(c[2]) > std::abs(c[1])) do_swap(1, 2);
    // leading two coordinates nonnegative
    if (c[0] < 0 && c[1] < 0) flip(0, 1);
    else if (c[0] < 0) flip(0, 2);
    else if (c[1] < 0) flip(1, 2);
    // boundary identification (pi/4, y, z) ~ (pi/4, y, -z)
    if (c[0] > M_PI / 4 - 1e-12 && c[2] < -1e-14) {
        shift(0, -1);
        flip(0, 2);
    }

    out.phase = phase;
    out.coords = {c[0], c[1], c[2]};
    return out;
}

namespace {

// 3-CNOT core whose canonical class is (pi/4 - t1/2, pi/4 - t2/2, t3/2 - pi/4)
std::vector<CompiledElement> core3(double t1, double t2, double t3) {
    std::vector<CompiledElement> seq(5);
    seq[0].entangler = true; seq[0].two_q = cnot_gate();
    seq[1].one_q_hi = rot_y(t2); seq[1].one_q_lo = rot_z(t1);
    seq[2].entangler = true; seq[2].two_q = cnot_rev_gate();
    seq[3].one_q_hi = rot_y(t3); seq[3].one_q_lo = Mat2::Identity();
    seq[4].entangler = true; seq[4].two_q = cnot_gate();
    return seq;
}

std::vector<CompiledElement> core2(double x, double y) {
    std::vector<CompiledElement> seq(3);
    seq[0].entangler = true; seq[0].two_q = cnot_gate();
    seq[1].one_q_hi = rot_x(-2 * x); seq[1].one_q_lo = rot_z(-2 * y);
    seq[2].entangler = true; seq[2].two_q = cnot_gate();
    return seq;
}

Mat4 seq_unitary(const std::vector<CompiledElement>& seq) {
    Mat4 u = Mat4::Identity();
    for (const auto& e : seq)
        u = (e.entangler ? e.two_q : kron2(e.one_q_hi, e.one_q_lo)) * u;
    return u;
}

}  // namespace

CompiledGate kak_decompose(const Mat4& u, double tol) {
    const KakDecomposition kd = kak_canonicalize(u);
    const auto [x, y, z] = kd.coords;

    CompiledGate out;
    out.coords = kd.coords;

    if (std::max({std::abs(x), std::abs(y), std::abs(z)}) < tol) {
        out.global_phase = kd.phase;
        out.entangler_count = 0;
        CompiledElement e;
        e.one_q_hi = kd.k1l * kd.k2l;
        e.one_q_lo = kd.k1r * kd.k2r;
        out.elements = {e};
        return out;
    }

    std::vector<CompiledElement> core;
    if (std::abs(x - M_PI / 4) < tol && std::abs(y) < tol && std::abs(z) < tol) {
        CompiledElement e;
        e.entangler = true;
        e.two_q = cnot_gate();
        core = {e};
        out.entangler_count = 1;
    } else if (std::abs(z) < tol) {
        core = core2(x, y);
        out.entangler_count = 2;
    } else {
        core = core3(M_PI / 2 - 2 * x, M_PI / 2 - 2 * y, M_PI / 2 + 2 * z);
        out.entangler_count = 3;
    }

    const KakDecomposition kc = kak_canonicalize(seq_unitary(core));
    for (int i = 0; i < 3; ++i)
        if (std::abs(kc.coords[i] - kd.coords[i]) > 1e-9)
            throw std::runtime_error("kak: core circuit class mismatch");

    // U = (phase_u/phase_c) (k1 kc1^dag) core (kc2^dag k2)
    CompiledElement pre, post;
    pre.one_q_hi = kc.k2l.adjoint() * kd.k2l;
    pre.one_q_lo = kc.k2r.adjoint() * kd.k2r;
    post.one_q_hi = kd.k1l * kc.k1l.adjoint();
    post.one_q_lo = kd.k1r * kc.k1r.adjoint();

    out.global_phase = kd.phase / kc.phase;
    out.elements.clear();
    out.elements.push_back(pre);
    out.elements.insert(out.elements.end(), core.begin(), core.end());
    out.elements.push_back(post);
    return out;
}

Mat4 recompose(const CompiledGate& g) {
    return g.global_phase * seq_unitary(g.elements);
}

}  // namespace nuosc
