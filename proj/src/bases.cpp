#include "pstomo/bases.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pstomo::bases {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

// w = exp(i 2pi/3), kept in polar form so w^3 stays at 1 to machine precision.
cplx omega3() { return cplx(std::cos(2.0 * kPi / 3.0), std::sin(2.0 * kPi / 3.0)); }

void push_element(MeasurementBasis& b, const std::vector<int>& labels,
                  const std::vector<cplx>& coeffs, int outcome) {
    cvec v(b.dim, cplx{});
    std::vector<int> supp;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        v[labels[i]] = coeffs[i];
        supp.push_back(labels[i]);
    }
    b.elements.push_back(std::move(v));
    b.support.push_back(std::move(supp));
    b.outcome_label.push_back(outcome);
}

void require_pow2_d(int d) {
    if (d < 2 || !is_pow2(d))
        throw std::invalid_argument("basis construction: d must be a power of two >= 2");
}

}  // namespace

MeasurementBasis build_b0(int dim) {
    if (dim < 2 || !is_pow2(dim))
        throw std::invalid_argument("build_b0: dim must be a power of two >= 2");
    MeasurementBasis b{dim, "B0", {}, {}, {}};
    for (int j = 0; j < dim; ++j) push_element(b, {j}, {cplx{1.0, 0.0}}, j);
    return b;
}

MeasurementBasis build_c1(int d) {
    require_pow2_d(d);
    const int dim = 2 * d;
    MeasurementBasis b{dim, "C1", {}, {}, {}};
    const cplx i1{0.0, 1.0};
    // Row coefficients of the 4-point Fourier combination, in the order
    // (|2k>, |2k+1>, |2k+1+d>, |(2k+2 mod d)+d>).
    const cplx rows[4][4] = {
        {{0.5, 0}, {0.5, 0}, {0.5, 0}, {0.5, 0}},
        {{0.5, 0}, 0.5 * i1, {-0.5, 0}, -0.5 * i1},
        {{0.5, 0}, {-0.5, 0}, {0.5, 0}, {-0.5, 0}},
        {{0.5, 0}, -0.5 * i1, {-0.5, 0}, 0.5 * i1},
    };
    for (int k = 0; k < d / 2; ++k) {
        const std::vector<int> labels = {2 * k, 2 * k + 1, 2 * k + 1 + d,
                                         (2 * k + 2) % d + d};
        const int outcomes[4] = {2 * k, 2 * k + 1, 2 * k + d, 2 * k + 1 + d};
        for (int r = 0; r < 4; ++r)
            push_element(b, labels, {rows[r][0], rows[r][1], rows[r][2], rows[r][3]},
                         outcomes[r]);
    }
    return b;
}

namespace {

// Shared layout of D1/D2: per group, three 3-point Fourier rows over
// `triple` plus one kept canonical element.
void push_d_group(MeasurementBasis& b, const std::vector<int>& triple, int kept,
                  const int outcomes[4]) {
    const cplx w = omega3();
    const cplx w2 = w * w;
    const double s = 1.0 / std::sqrt(3.0);
    push_element(b, triple, {cplx{s, 0}, cplx{s, 0}, cplx{s, 0}}, outcomes[0]);
    push_element(b, triple, {cplx{s, 0}, s * w, s * w2}, outcomes[1]);
    push_element(b, triple, {cplx{s, 0}, s * w2, s * w}, outcomes[2]);
    push_element(b, {kept}, {cplx{1.0, 0.0}}, outcomes[3]);
}

}  // namespace

MeasurementBasis build_d1(int d) {
    require_pow2_d(d);
    MeasurementBasis b{2 * d, "D1", {}, {}, {}};
    for (int k = 0; k < d / 2; ++k) {
        const int outcomes[4] = {2 * k, 2 * k + 1, 2 * k + d, 2 * k + 1 + d};
        push_d_group(b, {2 * k, 2 * k + 1, 2 * k + d}, 2 * k + 1 + d, outcomes);
    }
    return b;
}

MeasurementBasis build_d2(int d) {
    require_pow2_d(d);
    const int dim = 2 * d;
    MeasurementBasis b{dim, "D2", {}, {}, {}};
    for (int k = 0; k < d / 2; ++k) {
        const int outcomes[4] = {2 * k, 2 * k + 1, 2 * k + d, 2 * k + 1 + d};
        push_d_group(b, {2 * k + 1, 2 * k + 2, 2 * k + 1 + d},
                     (2 * k + 2 + d) % dim, outcomes);
    }
    return b;
}

ShiftOperator shift_operator(int dim, ShiftKind kind) {
    if (dim < 2 || !is_pow2(dim))
        throw std::invalid_argument("shift_operator: dim must be a power of two >= 2");
    ShiftOperator op{dim, kind, std::vector<int>(dim)};
    const int d = dim / 2;
    for (int k = 0; k < dim; ++k) {
        switch (kind) {
            case ShiftKind::Increment:
            case ShiftKind::GlobalT2:
                op.perm[k] = (k + 1) % dim;
                break;
            case ShiftKind::Decrement:
                op.perm[k] = (k + dim - 1) % dim;
                break;
            case ShiftKind::ConditionalT1:
                op.perm[k] = (k < d) ? k : d + (k - d + 1) % d;
                break;
            default:
                throw std::invalid_argument("shift_operator: invalid kind");
        }
    }
    return op;
}

qcore::GateMatrix shift_unitary(const ShiftOperator& op) {
    int arity = 0;
    while ((1 << arity) < op.dim) ++arity;
    qcore::GateMatrix g{arity, cvec(static_cast<std::size_t>(op.dim) * op.dim, 0.0)};
    for (int k = 0; k < op.dim; ++k) g.at(op.perm[k], k) = 1.0;
    return g;
}

qcore::GateMatrix u2_matrix() {
    // 4x4 DFT with fourth root i; row/column index pairs (ancilla, q_{N-1})
    // with the ancilla as the high bit.
    const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    qcore::GateMatrix g{2, cvec(16)};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) g.at(r, c) = 0.5 * ipow[(r * c) % 4];
    return g;
}

qcore::GateMatrix u3_matrix() {
    const cplx w = omega3();
    const cplx w2 = w * w;
    const double s = 1.0 / std::sqrt(3.0);
    qcore::GateMatrix g{2, cvec(16, cplx{})};
    const cplx rows[3][3] = {{{1, 0}, {1, 0}, {1, 0}},
                             {{1, 0}, w, w2},
                             {{1, 0}, w2, w}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) g.at(r, c) = s * rows[r][c];
    g.at(3, 3) = 1.0;
    return g;
}

qcore::GateMatrix v1_matrix() {
    const double s = 1.0 / std::sqrt(2.0);
    auto e = [](double a) { return cplx(std::cos(a), std::sin(a)); };
    qcore::GateMatrix g{1, cvec(4)};
    g.at(0, 0) = s * e(kPi / 6.0);
    g.at(0, 1) = s * e(-kPi / 6.0);
    g.at(1, 0) = s * e(-kPi / 3.0);
    g.at(1, 1) = s * e(kPi / 3.0);
    return g;
}

qcore::GateMatrix v2_matrix() {
    const double s = 1.0 / std::sqrt(3.0);
    qcore::GateMatrix g{1, cvec(4)};
    g.at(0, 0) = s * std::sqrt(2.0);
    g.at(0, 1) = s;
    g.at(1, 0) = s;
    g.at(1, 1) = -s * std::sqrt(2.0);
    return g;
}

qcore::GateMatrix basis_unitary(const MeasurementBasis& basis) {
    int arity = 0;
    while ((1 << arity) < basis.dim) ++arity;
    qcore::GateMatrix g{arity, cvec(static_cast<std::size_t>(basis.dim) * basis.dim)};
    for (int c = 0; c < basis.dim; ++c)
        for (int r = 0; r < basis.dim; ++r) g.at(r, c) = basis.elements[c][r];
    return g;
}

int achievable_outcome_count(const MeasurementBasis& basis) {
    const int d = basis.dim / 2;
    int count = 0;
    for (const auto& supp : basis.support)
        for (int label : supp)
            if (label < d) {
                ++count;
                break;
            }
    return count;
}

double orthonormality_residual(const MeasurementBasis& basis) {
    double worst = 0.0;
    const int n = static_cast<int>(basis.elements.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx acc{};
            for (int l : basis.support[i]) acc += std::conj(basis.elements[i][l]) * basis.elements[j][l];
            const cplx want = (i == j) ? cplx{1.0, 0.0} : cplx{};
            worst = std::max(worst, std::abs(acc - want));
        }
    return worst;
}

}  // namespace pstomo::bases
