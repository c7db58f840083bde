#include "pstomo/qcore.hpp"

#include <cmath>
#include <stdexcept>

#include "pstomo/rng.hpp"

namespace pstomo::qcore {

namespace {

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2_of(std::size_t v) {
    int n = 0;
    while ((std::size_t{1} << n) < v) ++n;
    return n;
}

}  // namespace

PureState make_state(cvec amplitudes) {
    if (amplitudes.size() < 2 || !is_pow2(amplitudes.size()))
        throw std::invalid_argument("make_state: length must be a power of two >= 2");
    double norm2 = 0.0;
    for (const cplx& a : amplitudes) norm2 += std::norm(a);
    if (norm2 <= 0.0) throw std::invalid_argument("make_state: zero vector");
    const double inv = 1.0 / std::sqrt(norm2);
    if (inv != 1.0)
        for (cplx& a : amplitudes) a *= inv;
    return PureState{log2_of(amplitudes.size()), std::move(amplitudes)};
}

PureState haar_random_state(int n_qubits, std::uint64_t seed) {
    if (n_qubits < 1 || n_qubits > 12)
        throw std::invalid_argument("haar_random_state: n_qubits out of range [1,12]");
    auto g = rng::make_stream(seed, 0x48'41'41'52ULL);  // stream tag "HAAR"
    cvec v(std::size_t{1} << n_qubits);
    for (cplx& a : v) {
        const double re = rng::normal(g);
        const double im = rng::normal(g);
        a = cplx(re, im);
    }
    return make_state(std::move(v));
}

void apply_gate_inplace(cvec& amps, int n_qubits, const GateMatrix& gate,
                        const std::vector<int>& targets) {
    const int m = gate.arity;
    if (static_cast<int>(targets.size()) != m)
        throw std::invalid_argument("apply_gate: target count must equal gate arity");
    if (amps.size() != (std::size_t{1} << n_qubits))
        throw std::invalid_argument("apply_gate: state size mismatch");

    std::uint64_t tmask = 0;
    std::vector<std::uint64_t> weight(m);
    for (int b = 0; b < m; ++b) {
        const int q = targets[b];
        if (q < 0 || q >= n_qubits)
            throw std::invalid_argument("apply_gate: target out of range");
        weight[b] = std::uint64_t{1} << (n_qubits - 1 - q);
        if (tmask & weight[b])
            throw std::invalid_argument("apply_gate: duplicate target");
        tmask |= weight[b];
    }

    const std::size_t dim = amps.size();

    if (m == 1) {
        // Strided pair iteration: enumerate indices with the target bit
        // cleared by splitting each counter value around the mask position.
        const std::uint64_t mask = weight[0];
        const std::uint64_t lo_mask = mask - 1;
        const std::uint64_t hi_mask = ~lo_mask;
        const cplx g00 = gate.m[0], g01 = gate.m[1], g10 = gate.m[2], g11 = gate.m[3];
        for (std::uint64_t i = 0; i < dim >> 1; ++i) {
            const std::uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
            const std::uint64_t i1 = i0 | mask;
            const cplx t0 = amps[i0];
            const cplx t1 = amps[i1];
            amps[i0] = g00 * t0 + g01 * t1;
            amps[i1] = g10 * t0 + g11 * t1;
        }
        return;
    }

    const std::size_t sub = std::size_t{1} << m;
    std::vector<std::uint64_t> offset(sub, 0);
    for (std::size_t j = 0; j < sub; ++j)
        for (int b = 0; b < m; ++b)
            if ((j >> (m - 1 - b)) & 1) offset[j] |= weight[b];

    cvec in(sub), out(sub);
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & tmask) continue;
        for (std::size_t j = 0; j < sub; ++j) in[j] = amps[i | offset[j]];
        for (std::size_t r = 0; r < sub; ++r) {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < sub; ++c) acc += gate.m[r * sub + c] * in[c];
            out[r] = acc;
        }
        for (std::size_t j = 0; j < sub; ++j) amps[i | offset[j]] = out[j];
    }
}

PureState apply_gate(const PureState& state, const GateMatrix& gate,
                     const std::vector<int>& targets) {
    PureState result = state;
    apply_gate_inplace(result.amps, result.n_qubits, gate, targets);
    return result;
}

cplx inner_product(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("inner_product: dimension mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a.amps[i]) * b.amps[i];
    return acc;
}

double fidelity(const PureState& a, const PureState& b) {
    return std::norm(inner_product(a, b));
}

GateMatrix identity_matrix(int arity) {
    GateMatrix g{arity, cvec((std::size_t{1} << arity) * (std::size_t{1} << arity), 0.0)};
    for (std::size_t i = 0; i < g.dim(); ++i) g.at(i, i) = 1.0;
    return g;
}

GateMatrix matmul(const GateMatrix& a, const GateMatrix& b) {
    if (a.arity != b.arity) throw std::invalid_argument("matmul: arity mismatch");
    const std::size_t d = a.dim();
    GateMatrix out{a.arity, cvec(d * d, 0.0)};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < d; ++j) out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

GateMatrix adjoint(const GateMatrix& a) {
    const std::size_t d = a.dim();
    GateMatrix out{a.arity, cvec(d * d)};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out.at(i, j) = std::conj(a.at(j, i));
    return out;
}

double unitarity_residual(const GateMatrix& a) {
    const GateMatrix p = matmul(adjoint(a), a);
    const std::size_t d = a.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const cplx want = (i == j) ? cplx{1.0, 0.0} : cplx{};
            worst = std::max(worst, std::abs(p.at(i, j) - want));
        }
    return worst;
}

}  // namespace pstomo::qcore
