#pragma once

#include <string>
#include <vector>

#include "pstomo/qcore.hpp"

namespace pstomo::bases {

// Analytic construction of the measurement bases used by both protocols.
//
// Conventions fixed here and relied on by circuits/sampling/reconstruct:
//  * A basis over the (N+1)-qubit compound space has dim = 2d = 2^(N+1),
//    with d = 2^N. Labels < d have ancilla bit 0, labels >= d ancilla bit 1.
//  * Elements are listed group-major: group k = 0..d/2-1 contributes four
//    consecutive elements in fixed row order (the Fourier/kept row order of
//    the defining equations).
//  * outcome_label[j] is the canonical-measurement outcome that realizes a
//    projection onto element j once the protocol circuit has been applied.
//    For group k the four rows land on outcomes 2k, 2k+1, 2k+d, 2k+1+d.

struct MeasurementBasis {
    int dim = 0;
    std::string name;                        // one of B0, C1, D1, D2
    std::vector<cvec> elements;              // dim vectors of length dim
    std::vector<std::vector<int>> support;   // nonzero labels per element
    std::vector<int> outcome_label;          // measurement outcome per element
};

enum class ShiftKind { ConditionalT1, GlobalT2, Increment, Decrement };

/// Permutation of basis labels; perm[from] = to.
struct ShiftOperator {
    int dim = 0;
    ShiftKind kind = ShiftKind::Increment;
    std::vector<int> perm;
};

/// Canonical basis: element j = |j>.
MeasurementBasis build_b0(int dim);

/// Protocol-1 basis: for each group k, the 4-point Fourier combinations of
/// {|2k>, |2k+1>, |2k+1+d>, |(2k+2 mod d)+d>}.
MeasurementBasis build_c1(int d);

/// Protocol-2 first basis: 3-point Fourier combinations of
/// {|2k>, |2k+1>, |2k+d>} plus the kept element |2k+1+d>.
MeasurementBasis build_d1(int d);

/// Protocol-2 second basis: the global shift applied to D1; label
/// arithmetic is modulo 2d.
MeasurementBasis build_d2(int d);

ShiftOperator shift_operator(int dim, ShiftKind kind);
qcore::GateMatrix shift_unitary(const ShiftOperator& op);

/// Two-qubit partial Fourier transform of protocol 1 (the 4-point DFT with
/// unit row/column for the group's first label).
qcore::GateMatrix u2_matrix();

/// Two-qubit partial Fourier transform of protocol 2 on three labels.
qcore::GateMatrix u3_matrix();

/// Single-qubit factors of the U3 decomposition.
qcore::GateMatrix v1_matrix();
qcore::GateMatrix v2_matrix();

/// Unitary whose k-th column is the k-th basis element.
qcore::GateMatrix basis_unitary(const MeasurementBasis& basis);

/// Number of elements a preparation with ancilla |0> can collapse onto,
/// i.e. elements whose support intersects the ancilla-0 block.
int achievable_outcome_count(const MeasurementBasis& basis);

/// Gram-matrix deviation from the identity; < 1e-12 for a valid basis.
double orthonormality_residual(const MeasurementBasis& basis);

}  // namespace pstomo::bases
