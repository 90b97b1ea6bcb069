#pragma once

#include <array>
#include <complex>
#include <vector>

#include "nuosc/statevector.hpp"

namespace nuosc {

// Cartan (KAK) decomposition of a two-qubit unitary:
//   U = phase * (k1l x k1r) * exp(i(x XX + y YY + z ZZ)) * (k2l x k2r)
// with canonical coordinates in the Weyl chamber
//   pi/4 >= x >= y >= |z|, and z >= 0 when x = pi/4.
struct KakDecomposition {
    std::complex<double> phase;
    Mat2 k1l, k1r;  // applied after the canonical gate (left side)
    std::array<double, 3> coords;
    Mat2 k2l, k2r;  // applied first (right side)
};

KakDecomposition kak_canonicalize(const Mat4& u);

Mat4 canonical_gate(double x, double y, double z);

// One element of a synthesized gate sequence, in application order.
struct CompiledElement {
    bool entangler = false;
    Mat4 two_q;          // valid when entangler (CNOT in either direction)
    Mat2 one_q_hi, one_q_lo;  // valid otherwise: local layer (hi x lo)
};

// CNOT-basis synthesis: <= 3 entangling gates plus single-qubit layers.
// Recomposition (product of elements times phase) equals the input exactly.
struct CompiledGate {
    std::complex<double> global_phase = 1.0;
    int entangler_count = 0;
    std::vector<CompiledElement> elements;  // first element is applied first
    std::array<double, 3> coords{};
};

CompiledGate kak_decompose(const Mat4& u, double tol = 1e-8);

Mat4 recompose(const CompiledGate& g);

Mat4 kron2(const Mat2& a, const Mat2& b);

}  // namespace nuosc
