#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pstomo {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

}  // namespace pstomo

namespace pstomo::qcore {

// Basis-label convention used by every module: for an n-qubit register,
// qubit 0 is the MOST significant bit of the basis label. When an ancilla
// is adjoined (circuits/sampling), it sits above all data qubits, so the
// compound label of ancilla state |j> and data state |k> is j*2^N + k.

/// Unit-norm pure state over 2^n_qubits basis labels.
struct PureState {
    int n_qubits = 0;
    cvec amps;

    std::size_t dim() const { return amps.size(); }
};

/// Dense complex square matrix acting on `arity` qubits, row-major.
struct GateMatrix {
    int arity = 0;
    cvec m;

    std::size_t dim() const { return std::size_t{1} << arity; }
    cplx& at(std::size_t r, std::size_t c) { return m[r * dim() + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return m[r * dim() + c]; }
};

/// Builds a PureState from raw amplitudes. Length must be a power of two
/// >= 2 and the vector nonzero; the result is renormalized. The global
/// phase of the input is preserved.
PureState make_state(cvec amplitudes);

/// Haar-distributed random state: normalized vector of independent standard
/// complex Gaussians. Deterministic for a fixed seed. 1 <= n_qubits <= 12.
PureState haar_random_state(int n_qubits, std::uint64_t seed);

/// Applies `gate` to the given target qubits. targets[0] addresses the most
/// significant bit of the gate's own index space. Pure function; acts as the
/// identity on all other qubits.
PureState apply_gate(const PureState& state, const GateMatrix& gate,
                     const std::vector<int>& targets);

/// In-place strided kernel behind apply_gate; amps has 2^n_qubits entries.
void apply_gate_inplace(cvec& amps, int n_qubits, const GateMatrix& gate,
                        const std::vector<int>& targets);

cplx inner_product(const PureState& a, const PureState& b);

/// |<a|b>|^2. Symmetric, invariant under a global phase of either argument.
double fidelity(const PureState& a, const PureState& b);

GateMatrix identity_matrix(int arity);
GateMatrix matmul(const GateMatrix& a, const GateMatrix& b);
GateMatrix adjoint(const GateMatrix& a);

/// max_ij |(A^dag A - I)_ij|
double unitarity_residual(const GateMatrix& a);

}  // namespace pstomo::qcore
