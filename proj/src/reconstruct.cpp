#include "pstomo/reconstruct.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace pstomo::reconstruct {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_to_pi(double x) {
    x = std::fmod(x + kPi, 2.0 * kPi);
    if (x < 0.0) x += 2.0 * kPi;
    return x - kPi;
}

double clamp1(double v) { return std::min(1.0, std::max(-1.0, v)); }

// Excess beyond this marks a genuinely infeasible raw value; roundoff-level
// excursions above 1 are not flagged.
constexpr double kFeasibleSlack = 1e-12;

bool infeasible(double v) { return std::abs(v) > 1.0 + kFeasibleSlack; }

// One protocol-1 pair: probabilities of the cos- and sin-type outcomes of a
// group, plus the Z probabilities of the two labels involved.
PhasePairEstimate pair_protocol1(int k_lo, int k_hi, double p_cos, double p_sin,
                                 double pz_lo, double pz_hi,
                                 const ReconstructOptions& opts, std::string setting) {
    PhasePairEstimate e;
    e.k_lo = k_lo;
    e.k_hi = k_hi;
    e.setting = std::move(setting);
    e.conditioning = std::sqrt(std::max(0.0, pz_lo) * std::max(0.0, pz_hi));
    if (e.conditioning < opts.conditioning_floor) {
        e.undetermined = true;
        return e;
    }
    const double denom = 2.0 * e.conditioning;
    e.cos_raw = (4.0 * p_cos - pz_lo - pz_hi) / denom;
    e.sin_raw = (4.0 * p_sin - pz_lo - pz_hi) / denom;
    e.clamped = infeasible(e.cos_raw) || infeasible(e.sin_raw);
    if (opts.convention == PhaseConvention::ClampedComponents)
        e.delta = std::atan2(clamp1(e.sin_raw), clamp1(e.cos_raw));
    else
        e.delta = std::atan2(e.sin_raw, e.cos_raw);
    return e;
}

// One protocol-2 pair. The two measured quantities are cos(delta) and
// cos(delta - 2pi/3); the sine follows from
//   sin(delta) = (2 cos(delta - 2pi/3) + cos(delta)) / sqrt(3).
PhasePairEstimate pair_protocol2(int k_lo, int k_hi, double p_cos, double p_w,
                                 double pz_lo, double pz_hi,
                                 const ReconstructOptions& opts, std::string setting) {
    PhasePairEstimate e;
    e.k_lo = k_lo;
    e.k_hi = k_hi;
    e.setting = std::move(setting);
    e.conditioning = std::sqrt(std::max(0.0, pz_lo) * std::max(0.0, pz_hi));
    if (e.conditioning < opts.conditioning_floor) {
        e.undetermined = true;
        return e;
    }
    const double denom = 2.0 * e.conditioning;
    const double cos_d = (3.0 * p_cos - pz_lo - pz_hi) / denom;
    const double cos_w = (3.0 * p_w - pz_lo - pz_hi) / denom;
    e.cos_raw = cos_d;
    e.sin_raw = (2.0 * cos_w + cos_d) / std::sqrt(3.0);
    e.clamped = infeasible(cos_d) || infeasible(cos_w) || infeasible(e.sin_raw);
    if (opts.convention == PhaseConvention::ClampedComponents) {
        const double cc = clamp1(cos_d), cw = clamp1(cos_w);
        const double sc = clamp1((2.0 * cw + cc) / std::sqrt(3.0));
        e.delta = std::atan2(sc, cc);
    } else {
        e.delta = std::atan2(e.sin_raw, e.cos_raw);
    }
    return e;
}

// Accumulates theta_{k+1} = theta_k + delta_k over the in-chain pairs, which
// must arrive ordered by k_lo covering (0,1), (1,2), ..., (d-2, d-1).
ReconstructionResult finish(int n_qubits, const std::vector<double>& z_probs,
                            std::vector<PhasePairEstimate> pairs,
                            std::optional<double> wrap_delta) {
    const int d = 1 << n_qubits;
    ReconstructionResult r;
    r.n_qubits = n_qubits;
    r.amplitudes = estimate_amplitudes(z_probs);
    r.phases.assign(d, 0.0);
    r.phase_trusted.assign(d, true);
    for (const PhasePairEstimate& e : pairs) {
        if (!e.in_chain) continue;
        r.phases[e.k_hi] = wrap_to_pi(r.phases[e.k_lo] + e.delta);
        r.phase_trusted[e.k_hi] = r.phase_trusted[e.k_lo] && !e.undetermined;
    }
    if (wrap_delta)
        r.wrap_residual = wrap_to_pi(*wrap_delta - (0.0 - r.phases[d - 1]));
    r.pairs = std::move(pairs);
    r.estimate = assemble_state(r.amplitudes, r.phases);
    return r;
}

void check_sizes(int n_qubits, std::size_t z, std::size_t a, std::size_t b) {
    const std::size_t d = std::size_t{1} << n_qubits;
    if (z != d || a != 2 * d || b != 2 * d)
        throw std::invalid_argument("reconstruct: probability vector sizes do not match n_qubits");
}

}  // namespace

std::vector<double> probabilities_from_counts(const sampling::Counts& counts,
                                              int n_outcomes) {
    if (counts.shots < 1) throw std::invalid_argument("counts: shots must be >= 1");
    if (counts.freq.empty()) throw std::invalid_argument("counts: empty");
    std::vector<double> probs(n_outcomes, 0.0);
    for (const auto& [outcome, n] : counts.freq) {
        if (outcome < 0 || outcome >= n_outcomes)
            throw std::invalid_argument("counts: outcome index " + std::to_string(outcome) +
                                        " out of range");
        if (n < 0) throw std::invalid_argument("counts: negative frequency");
        probs[outcome] = static_cast<double>(n) / static_cast<double>(counts.shots);
    }
    return probs;
}

std::vector<double> estimate_amplitudes(const std::vector<double>& z_probs) {
    std::vector<double> a(z_probs.size());
    for (std::size_t k = 0; k < z_probs.size(); ++k) a[k] = std::sqrt(std::max(0.0, z_probs[k]));
    return a;
}

std::vector<double> estimate_amplitudes(const sampling::Counts& z_counts, int n_qubits) {
    return estimate_amplitudes(probabilities_from_counts(z_counts, 1 << n_qubits));
}

ReconstructionResult phases_protocol1(int n_qubits, const std::vector<double>& z_probs,
                                      const std::vector<double>& phi0_probs,
                                      const std::vector<double>& phi1_probs,
                                      const ReconstructOptions& opts) {
    check_sizes(n_qubits, z_probs.size(), phi0_probs.size(), phi1_probs.size());
    const int d = 1 << n_qubits;

    std::vector<PhasePairEstimate> pairs;
    std::optional<double> wrap_delta;
    // Interleave so the chain sees pairs in k order: (0,1) from phi0,
    // (1,2) from phi1, (2,3) from phi0, ...
    for (int k = 0; k < d / 2; ++k) {
        pairs.push_back(pair_protocol1(2 * k, 2 * k + 1, phi0_probs[2 * k],
                                       phi0_probs[2 * k + 1], z_probs[2 * k],
                                       z_probs[2 * k + 1], opts, "c1_phi0"));
        PhasePairEstimate odd = pair_protocol1(
            2 * k + 1, (2 * k + 2) % d, phi1_probs[2 * k], phi1_probs[2 * k + 1],
            z_probs[2 * k + 1], z_probs[(2 * k + 2) % d], opts, "c1_phi1");
        if (k == d / 2 - 1) {
            // Redundant closure (d-1 -> 0): diagnostic only.
            odd.in_chain = false;
            if (!odd.undetermined) wrap_delta = odd.delta;
        }
        pairs.push_back(std::move(odd));
    }
    return finish(n_qubits, z_probs, std::move(pairs), wrap_delta);
}

ReconstructionResult phases_protocol1(int n_qubits, const sampling::Counts& z,
                                      const sampling::Counts& phi0,
                                      const sampling::Counts& phi1,
                                      const ReconstructOptions& opts) {
    const int d = 1 << n_qubits;
    return phases_protocol1(n_qubits, probabilities_from_counts(z, d),
                            probabilities_from_counts(phi0, 2 * d),
                            probabilities_from_counts(phi1, 2 * d), opts);
}

ReconstructionResult phases_protocol2(int n_qubits, const std::vector<double>& z_probs,
                                      const std::vector<double>& d1_probs,
                                      const std::vector<double>& d2_probs,
                                      const ReconstructOptions& opts) {
    check_sizes(n_qubits, z_probs.size(), d1_probs.size(), d2_probs.size());
    const int d = 1 << n_qubits;

    std::vector<PhasePairEstimate> pairs;
    for (int k = 0; k < d / 2; ++k) {
        pairs.push_back(pair_protocol2(2 * k, 2 * k + 1, d1_probs[2 * k],
                                       d1_probs[2 * k + 1], z_probs[2 * k],
                                       z_probs[2 * k + 1], opts, "d1"));
        if (k < d / 2 - 1)
            pairs.push_back(pair_protocol2(2 * k + 1, 2 * k + 2, d2_probs[2 * k],
                                           d2_probs[2 * k + 1], z_probs[2 * k + 1],
                                           z_probs[2 * k + 2], opts, "d2"));
    }
    return finish(n_qubits, z_probs, std::move(pairs), std::nullopt);
}

ReconstructionResult phases_protocol2(int n_qubits, const sampling::Counts& z,
                                      const sampling::Counts& d1,
                                      const sampling::Counts& d2,
                                      const ReconstructOptions& opts) {
    const int d = 1 << n_qubits;
    return phases_protocol2(n_qubits, probabilities_from_counts(z, d),
                            probabilities_from_counts(d1, 2 * d),
                            probabilities_from_counts(d2, 2 * d), opts);
}

ReconstructionResult reconstruct_run(const sampling::ProtocolRun& run,
                                     const ReconstructOptions& opts) {
    if (run.phase_settings.size() != 2)
        throw std::invalid_argument("reconstruct_run: expected two phase settings");
    const int d = 1 << run.n_qubits;
    auto probs_of = [&](const sampling::SettingResult& s, int n_outcomes) {
        if (s.counts) return probabilities_from_counts(*s.counts, n_outcomes);
        return s.probs;
    };
    const auto z = probs_of(run.z, d);
    const auto a = probs_of(run.phase_settings[0], 2 * d);
    const auto b = probs_of(run.phase_settings[1], 2 * d);
    return run.protocol == 1 ? phases_protocol1(run.n_qubits, z, a, b, opts)
                             : phases_protocol2(run.n_qubits, z, a, b, opts);
}

qcore::PureState assemble_state(const std::vector<double>& amplitudes,
                                const std::vector<double>& phases) {
    if (amplitudes.size() != phases.size())
        throw std::invalid_argument("assemble_state: length mismatch");
    cvec amps(amplitudes.size());
    bool any = false;
    for (std::size_t k = 0; k < amplitudes.size(); ++k) {
        if (amplitudes[k] < 0.0)
            throw std::invalid_argument("assemble_state: amplitudes must be nonnegative");
        if (amplitudes[k] > 0.0) any = true;
        amps[k] = amplitudes[k] * cplx(std::cos(phases[k]), std::sin(phases[k]));
    }
    if (!any) throw std::invalid_argument("assemble_state: all-zero amplitudes");
    return qcore::make_state(std::move(amps));
}

sampling::Counts parse_counts_file(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("counts file: malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("shots") || !j.contains("counts"))
        throw std::runtime_error("counts file: expected {\"shots\":..., \"counts\":{...}}");
    sampling::Counts counts;
    if (!j["shots"].is_number_integer() || j["shots"].get<std::int64_t>() < 1)
        throw std::runtime_error("counts file: shots must be a positive integer");
    counts.shots = j["shots"].get<std::int64_t>();
    counts.setting = j.value("setting", std::string{});
    if (!j["counts"].is_object())
        throw std::runtime_error("counts file: counts must be an object");

    // Key format: bitstrings only when every key is a 0/1 string of one
    // common length >= 2 (leading zeros make them unambiguous); decimal
    // otherwise. Bitstrings are read most-significant-first, so the ancilla
    // bit is the leftmost character.
    std::vector<std::pair<std::string, std::int64_t>> raw;
    bool all_binary = !j["counts"].empty();
    std::size_t bin_len = 0;
    for (const auto& [key, value] : j["counts"].items()) {
        if (!value.is_number_integer())
            throw std::runtime_error("counts file: frequencies must be integers");
        raw.emplace_back(key, value.get<std::int64_t>());
        const bool binary = !key.empty() &&
                            key.find_first_not_of("01") == std::string::npos;
        if (!binary) all_binary = false;
        if (bin_len == 0) bin_len = key.size();
        if (key.size() != bin_len) all_binary = false;
    }
    const bool bitstrings = all_binary && bin_len >= 2;

    std::int64_t total = 0;
    for (const auto& [key, value] : raw) {
        if (value < 0) throw std::runtime_error("counts file: negative count");
        int outcome = 0;
        if (bitstrings) {
            for (char ch : key) outcome = outcome * 2 + (ch - '0');
        } else {
            if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
                throw std::runtime_error("counts file: bad outcome key '" + key + "'");
            outcome = std::stoi(key);
        }
        counts.freq[outcome] += value;
        total += value;
    }
    if (total > counts.shots)
        throw std::runtime_error("counts file: frequencies exceed declared shots");
    counts.complete = (total == counts.shots);
    return counts;
}

std::string result_to_json(const ReconstructionResult& result,
                           std::optional<double> fidelity) {
    nlohmann::json j;
    j["n_qubits"] = result.n_qubits;
    j["amplitudes"] = result.amplitudes;
    j["phases"] = result.phases;
    j["phase_trusted"] = result.phase_trusted;
    nlohmann::json pairs = nlohmann::json::array();
    for (const PhasePairEstimate& e : result.pairs) {
        nlohmann::json p;
        p["pair"] = {e.k_lo, e.k_hi};
        p["cos_raw"] = e.cos_raw;
        p["sin_raw"] = e.sin_raw;
        p["clamped"] = e.clamped;
        p["undetermined"] = e.undetermined;
        p["delta"] = e.delta;
        p["conditioning"] = e.conditioning;
        p["in_chain"] = e.in_chain;
        p["setting"] = e.setting;
        pairs.push_back(std::move(p));
    }
    j["pairs"] = std::move(pairs);
    if (result.wrap_residual)
        j["wrap_residual"] = *result.wrap_residual;
    else
        j["wrap_residual"] = nullptr;
    nlohmann::json est = nlohmann::json::array();
    for (const cplx& a : result.estimate.amps) est.push_back({a.real(), a.imag()});
    j["estimate"] = std::move(est);
    if (fidelity) j["fidelity"] = *fidelity;
    return j.dump(2);
}

}  // namespace pstomo::reconstruct
