#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pstomo/bases.hpp"
#include "pstomo/qcore.hpp"

using namespace pstomo;
using bases::MeasurementBasis;
using bases::ShiftKind;

namespace {

std::set<int> support_set(const MeasurementBasis& b, int element) {
    return {b.support[element].begin(), b.support[element].end()};
}

}  // namespace

TEST_CASE("C1 group supports") {
    const MeasurementBasis c1 = bases::build_c1(4);
    CHECK(c1.dim == 8);
    CHECK(c1.elements.size() == 8);
    // group k=0: T1 applied to the pre-shift support {0,1,4,5}
    CHECK(support_set(c1, 0) == std::set<int>{0, 1, 5, 6});
    for (const auto& s : c1.support) CHECK(s.size() == 4);
}

TEST_CASE("basis builders reject non-power-of-two d") {
    CHECK_THROWS_AS(bases::build_c1(3), std::invalid_argument);
    CHECK_THROWS_AS(bases::build_d1(0), std::invalid_argument);
    CHECK_THROWS_AS(bases::build_d2(6), std::invalid_argument);
    CHECK_THROWS_AS(bases::build_b0(5), std::invalid_argument);
}

TEST_CASE("C1 d=2 covers the whole compound space with one group") {
    const MeasurementBasis c1 = bases::build_c1(2);
    CHECK(c1.elements.size() == 4);
    CHECK(support_set(c1, 0) == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("C1 row coefficients follow the four-point Fourier pattern") {
    const MeasurementBasis c1 = bases::build_c1(4);
    // sin-type element of group 0: coefficient i on |1>, -1 on |5>, -i on |6>
    const cvec& e = c1.elements[1];
    CHECK(std::abs(e[0] - cplx{0.5, 0.0}) < 1e-14);
    CHECK(std::abs(e[1] - cplx{0.0, 0.5}) < 1e-14);
    CHECK(std::abs(e[5] - cplx{-0.5, 0.0}) < 1e-14);
    CHECK(std::abs(e[6] - cplx{0.0, -0.5}) < 1e-14);
}

TEST_CASE("D1 first Fourier element and kept elements") {
    const MeasurementBasis d1 = bases::build_d1(4);
    const double s = 1.0 / std::sqrt(3.0);
    const cvec& e = d1.elements[0];  // (|0> + |1> + |4>)/sqrt3
    CHECK(std::abs(e[0] - cplx{s, 0.0}) < 1e-14);
    CHECK(std::abs(e[1] - cplx{s, 0.0}) < 1e-14);
    CHECK(std::abs(e[4] - cplx{s, 0.0}) < 1e-14);
    CHECK(support_set(d1, 3) == std::set<int>{5});
    CHECK(support_set(d1, 7) == std::set<int>{7});
}

TEST_CASE("D2 kept-canonical elements wrap modulo 2d") {
    const MeasurementBasis d2 = bases::build_d2(4);
    CHECK(support_set(d2, 3) == std::set<int>{6});
    CHECK(support_set(d2, 7) == std::set<int>{0});
}

TEST_CASE("D2 equals the global shift applied to D1") {
    for (int d : {2, 4, 8}) {
        const MeasurementBasis d1 = bases::build_d1(d);
        const MeasurementBasis d2 = bases::build_d2(d);
        const auto t2 = bases::shift_operator(2 * d, ShiftKind::GlobalT2);
        for (std::size_t j = 0; j < d1.elements.size(); ++j) {
            cvec shifted(2 * d, cplx{});
            for (int l = 0; l < 2 * d; ++l) shifted[t2.perm[l]] = d1.elements[j][l];
            double worst = 0.0;
            for (int l = 0; l < 2 * d; ++l)
                worst = std::max(worst, std::abs(shifted[l] - d2.elements[j][l]));
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("bases are complete and orthonormal") {
    for (int d : {2, 4, 8, 16, 32}) {
        CHECK(bases::orthonormality_residual(bases::build_c1(d)) < 1e-12);
        CHECK(bases::orthonormality_residual(bases::build_d1(d)) < 1e-12);
        CHECK(bases::orthonormality_residual(bases::build_d2(d)) < 1e-12);
    }
}

TEST_CASE("C1 supports partition the label space; D1 supports cover it") {
    for (int d : {2, 4, 8, 16}) {
        const MeasurementBasis c1 = bases::build_c1(d);
        std::set<int> seen;
        for (int k = 0; k < d / 2; ++k) {
            const auto group = support_set(c1, 4 * k);
            for (int label : group) {
                CHECK(!seen.count(label));
                seen.insert(label);
            }
        }
        CHECK(static_cast<int>(seen.size()) == 2 * d);

        const MeasurementBasis d1 = bases::build_d1(d);
        std::set<int> covered;
        for (const auto& s : d1.support) covered.insert(s.begin(), s.end());
        CHECK(static_cast<int>(covered.size()) == 2 * d);
    }
}

TEST_CASE("zero-collapse: ancilla-0 states never reach kept elements above d") {
    for (int d : {4, 8, 16}) {
        int n = 0;
        while ((1 << n) < d) ++n;
        for (const MeasurementBasis& basis : {bases::build_d1(d), bases::build_d2(d)}) {
            for (int t = 0; t < 25; ++t) {
                const auto phi = qcore::haar_random_state(n, 900 + 31 * d + t);
                const auto probs = oracle::projection_probs(basis.elements, phi.amps, 0, 0.0);
                for (std::size_t j = 0; j < basis.elements.size(); ++j)
                    if (basis.support[j].size() == 1 && basis.support[j][0] >= d)
                        CHECK(probs[j] < 1e-14);
            }
        }
    }
}

TEST_CASE("achievable outcome counts") {
    for (int d : {4, 8, 16}) {
        CHECK(bases::achievable_outcome_count(bases::build_c1(d)) == 2 * d);
        CHECK(bases::achievable_outcome_count(bases::build_d1(d)) == 3 * d / 2);
        // one D2 kept element wraps to label 0 and stays reachable
        CHECK(bases::achievable_outcome_count(bases::build_d2(d)) == 3 * d / 2 + 1);
    }
}

TEST_CASE("u3 matrix rows") {
    const auto u3 = bases::u3_matrix();
    CHECK(u3.at(3, 0) == cplx{0.0, 0.0});
    CHECK(u3.at(3, 1) == cplx{0.0, 0.0});
    CHECK(u3.at(3, 2) == cplx{0.0, 0.0});
    CHECK(u3.at(3, 3) == cplx{1.0, 0.0});
    CHECK(qcore::unitarity_residual(u3) < 1e-12);
    // w^3 folds back to 1
    const cplx w = u3.at(1, 1) * std::sqrt(3.0);
    CHECK(std::abs(w * w * w - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("v1/v2 matrices") {
    const auto v1 = bases::v1_matrix();
    const auto v2 = bases::v2_matrix();
    CHECK(qcore::unitarity_residual(v1) < 1e-12);
    CHECK(qcore::unitarity_residual(v2) < 1e-12);

    const double s3 = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(v2.at(0, 0) - std::sqrt(2.0) * s3) < 1e-14);
    CHECK(std::abs(v2.at(0, 1) - s3) < 1e-14);
    CHECK(std::abs(v2.at(1, 0) - s3) < 1e-14);
    CHECK(std::abs(v2.at(1, 1) + std::sqrt(2.0) * s3) < 1e-14);

    // V1 = e^{i pi/6} U(pi/2, -pi/2, 2pi/3)
    const double pi = std::numbers::pi;
    const double c = std::cos(pi / 4.0), sn = std::sin(pi / 4.0);
    const cvec u = {c, -std::polar(1.0, 2.0 * pi / 3.0) * sn,
                    std::polar(1.0, -pi / 2.0) * sn,
                    std::polar(1.0, -pi / 2.0 + 2.0 * pi / 3.0) * c};
    const cplx ratio = v1.at(0, 0) / u[0];
    CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-12);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(v1.m[i] - ratio * u[i]) < 1e-12);
}

TEST_CASE("u2 matrix is the 4-point Fourier transform") {
    const auto u2 = bases::u2_matrix();
    CHECK(qcore::unitarity_residual(u2) < 1e-12);
    CHECK(std::abs(u2.at(1, 1) - cplx{0.0, 0.5}) < 1e-14);
    CHECK(std::abs(u2.at(2, 1) - cplx{-0.5, 0.0}) < 1e-14);
    CHECK(std::abs(u2.at(2, 2) - cplx{0.5, 0.0}) < 1e-14);
}

TEST_CASE("shift operators") {
    const auto inc = bases::shift_operator(4, ShiftKind::Increment);
    CHECK(inc.perm[3] == 0);
    CHECK(inc.perm[0] == 1);

    const auto t1 = bases::shift_operator(8, ShiftKind::ConditionalT1);
    CHECK(t1.perm[0] == 0);
    CHECK(t1.perm[4] == 5);
    CHECK(t1.perm[7] == 4);

    const auto dec = bases::shift_operator(4, ShiftKind::Decrement);
    for (int k = 0; k < 4; ++k) CHECK(dec.perm[inc.perm[k]] == k);

    const auto u = bases::shift_unitary(inc);
    const auto v = bases::shift_unitary(dec);
    const auto prod = qcore::matmul(u, v);
    const auto id = qcore::identity_matrix(2);
    for (std::size_t i = 0; i < prod.m.size(); ++i) CHECK(prod.m[i] == id.m[i]);

    CHECK_THROWS_AS(bases::shift_operator(3, ShiftKind::Increment), std::invalid_argument);
}

TEST_CASE("basis_unitary columns are the elements") {
    const auto b0 = bases::build_b0(4);
    const auto ub0 = bases::basis_unitary(b0);
    const auto id = qcore::identity_matrix(2);
    for (std::size_t i = 0; i < ub0.m.size(); ++i) CHECK(ub0.m[i] == id.m[i]);

    CHECK(qcore::unitarity_residual(bases::basis_unitary(bases::build_c1(2))) < 1e-12);

    const auto d1 = bases::build_d1(4);
    const auto ud1 = bases::basis_unitary(d1);
    // kept element |5> of group 0 sits at column 3
    for (int r = 0; r < 8; ++r)
        CHECK(ud1.at(r, 3) == (r == 5 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}));
}
