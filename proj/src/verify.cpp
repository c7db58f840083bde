#include "pstomo/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "pstomo/circuits.hpp"
#include "pstomo/reconstruct.hpp"
#include "pstomo/rng.hpp"
#include "pstomo/sampling.hpp"

namespace pstomo::verify {

namespace {

using clock = std::chrono::steady_clock;

void run_one(std::vector<CheckResult>& out, const std::string& name,
             const std::function<std::string()>& body) {
    CheckResult r{name, false, 0.0, {}};
    const auto t0 = clock::now();
    try {
        r.detail = body();  // empty detail = pass
        r.pass = r.detail.empty();
    } catch (const std::exception& e) {
        r.detail = e.what();
    }
    r.millis = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    out.push_back(std::move(r));
}

std::string check_gram(int d) {
    for (const auto& basis :
         {bases::build_c1(d), bases::build_d1(d), bases::build_d2(d)}) {
        const double resid = bases::orthonormality_residual(basis);
        if (resid >= 1e-12)
            return basis.name + " gram residual " + std::to_string(resid);
    }
    return {};
}

std::string check_factorization(int n) {
    const int d = 1 << n;
    const auto p1 = circuits::build_protocol1_circuit(n);
    const auto [d1c, d2c] = circuits::build_protocol2_circuits(n);
    const struct {
        const circuits::Circuit* c;
        bases::MeasurementBasis basis;
    } cases[] = {{&p1, bases::build_c1(d)},
                 {&d1c, bases::build_d1(d)},
                 {&d2c, bases::build_d2(d)}};
    for (const auto& tc : cases) {
        const auto map = circuits::outcome_map(*tc.c, tc.basis);
        if (map.residual >= 1e-10)
            return tc.basis.name + " factorization residual " + std::to_string(map.residual);
        for (std::size_t j = 0; j < tc.basis.elements.size(); ++j)
            if (map.element_of_outcome[tc.basis.outcome_label[j]] != static_cast<int>(j))
                return tc.basis.name + " outcome convention mismatch at element " +
                       std::to_string(j);
    }
    return {};
}

std::string check_increment(int n) {
    for (int dir : {+1, -1}) {
        const auto want = bases::shift_unitary(bases::shift_operator(
            1 << n, dir == 1 ? bases::ShiftKind::Increment : bases::ShiftKind::Decrement));
        for (auto variant : {circuits::IncrementVariant::SolidAscending,
                             circuits::IncrementVariant::HollowDescending}) {
            const auto got =
                circuits::circuit_unitary(circuits::build_increment_circuit(n, dir, variant));
            for (std::size_t i = 0; i < want.m.size(); ++i)
                if (std::abs(got.m[i] - want.m[i]) > 0.0)
                    return "increment n=" + std::to_string(n) + " dir=" + std::to_string(dir) +
                           " is not the exact permutation";
        }
    }
    return {};
}

std::string check_roundtrip(int n, int protocol) {
    const auto pb = sampling::make_protocol_bases(protocol, n);
    for (int t = 0; t < 20; ++t) {
        const auto phi = qcore::haar_random_state(n, rng::derive_seed(77, n, t));
        const auto prep = sampling::make_preparation(phi, 0.0);
        const auto run = sampling::run_protocol(prep, pb, 0, 0);
        const auto rec = reconstruct::reconstruct_run(run);
        const double f = qcore::fidelity(rec.estimate, phi);
        if (f < 1.0 - 1e-9)
            return "protocol " + std::to_string(protocol) + " fidelity " + std::to_string(f);
    }
    return {};
}

std::string check_zero_collapse(int d) {
    int n = 0;
    while ((1 << n) < d) ++n;
    for (const auto& basis : {bases::build_d1(d), bases::build_d2(d)}) {
        for (int t = 0; t < 20; ++t) {
            const auto phi = qcore::haar_random_state(n, rng::derive_seed(78, d, t));
            const auto probs = sampling::outcome_probabilities(
                sampling::make_preparation(phi, 0.0), 0, basis);
            for (std::size_t j = 0; j < basis.elements.size(); ++j) {
                if (basis.support[j].size() != 1 || basis.support[j][0] < d) continue;
                if (probs[j] >= 1e-14)
                    return basis.name + " kept element " +
                           std::to_string(basis.support[j][0]) + " probability " +
                           std::to_string(probs[j]);
            }
        }
    }
    return {};
}

}  // namespace

std::vector<CheckResult> run_checks(int max_n) {
    if (max_n < 1 || max_n > 6)
        throw std::invalid_argument("run_checks: max_n must be in [1,6]");
    std::vector<CheckResult> results;

    for (int d = 2; d <= std::min(1 << max_n, 32); d *= 2)
        run_one(results, "orthonormal_bases_d" + std::to_string(d),
                [d] { return check_gram(d); });
    for (int n = 1; n <= std::min(max_n, 5); ++n)
        run_one(results, "circuit_factorization_N" + std::to_string(n),
                [n] { return check_factorization(n); });
    for (int n = 1; n <= std::min(max_n + 1, 8); ++n)
        run_one(results, "increment_exact_n" + std::to_string(n),
                [n] { return check_increment(n); });
    for (int n = 1; n <= max_n; ++n)
        for (int protocol : {1, 2})
            run_one(results,
                    "roundtrip_p" + std::to_string(protocol) + "_N" + std::to_string(n),
                    [n, protocol] { return check_roundtrip(n, protocol); });
    for (int d = 4; d <= std::min(1 << max_n, 16); d *= 2)
        run_one(results, "zero_collapse_d" + std::to_string(d),
                [d] { return check_zero_collapse(d); });
    return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace pstomo::verify
