#include "pstomo/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "pstomo/rng.hpp"

namespace pstomo::sampling {

namespace {

// Setting ids for substream derivation; fixed so results are reproducible
// regardless of evaluation order.
constexpr std::uint64_t kStreamZ = 1, kStreamPhi0 = 2, kStreamPhi1 = 3,
                        kStreamD1 = 4, kStreamD2 = 5;

}  // namespace

NoisyPreparation make_preparation(qcore::PureState ideal, double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("make_preparation: lambda must be in [0,1]");
    return NoisyPreparation{std::move(ideal), lambda};
}

std::vector<double> outcome_probabilities(const NoisyPreparation& prep,
                                          int ancilla_bit,
                                          const bases::MeasurementBasis& basis) {
    const int d = static_cast<int>(prep.ideal.dim());
    if (basis.dim != 2 * d)
        throw std::invalid_argument("outcome_probabilities: basis dimension mismatch");
    if (ancilla_bit != 0 && ancilla_bit != 1)
        throw std::invalid_argument("outcome_probabilities: ancilla_bit must be 0 or 1");

    const int base = ancilla_bit * d;
    std::vector<double> probs(basis.dim, 0.0);
    for (int j = 0; j < basis.dim; ++j) {
        cplx overlap{};
        double block_weight = 0.0;
        for (int label : basis.support[j]) {
            if (label < base || label >= base + d) continue;
            const cplx coeff = basis.elements[j][label];
            overlap += std::conj(coeff) * prep.ideal.amps[label - base];
            block_weight += std::norm(coeff);
        }
        // Kept literal so mixture linearity in lambda holds exactly.
        probs[j] = (1.0 - prep.lambda) * std::norm(overlap) +
                   prep.lambda * (block_weight / d);
    }
    return probs;
}

std::vector<double> z_probabilities(const NoisyPreparation& prep) {
    const int d = static_cast<int>(prep.ideal.dim());
    std::vector<double> probs(d);
    for (int k = 0; k < d; ++k)
        probs[k] = (1.0 - prep.lambda) * std::norm(prep.ideal.amps[k]) +
                   prep.lambda * (1.0 / d);
    return probs;
}

std::vector<double> outcome_indexed(const std::vector<double>& element_probs,
                                    const bases::MeasurementBasis& basis) {
    if (element_probs.size() != basis.elements.size())
        throw std::invalid_argument("outcome_indexed: size mismatch");
    std::vector<double> out(basis.dim, 0.0);
    for (std::size_t j = 0; j < element_probs.size(); ++j)
        out[basis.outcome_label[j]] = element_probs[j];
    return out;
}

Counts sample_counts(const std::vector<double>& probs, std::int64_t shots,
                     std::uint64_t seed, std::string setting) {
    if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
    auto g = rng::make_stream(seed, 0x53'41'4dULL);  // stream tag "SAM"
    const std::vector<std::int64_t> draw = rng::multinomial(probs, shots, g);
    Counts counts{shots, {}, std::move(setting), true};
    for (std::size_t i = 0; i < draw.size(); ++i)
        if (draw[i] > 0) counts.freq[static_cast<int>(i)] = draw[i];
    return counts;
}

ProtocolBases make_protocol_bases(int protocol, int n_qubits) {
    if (protocol != 1 && protocol != 2)
        throw std::invalid_argument("protocol must be 1 or 2");
    if (n_qubits < 1) throw std::invalid_argument("n_qubits must be >= 1");
    const int d = 1 << n_qubits;
    if (protocol == 1)
        return ProtocolBases{1, n_qubits, bases::build_c1(d), bases::build_c1(d)};
    return ProtocolBases{2, n_qubits, bases::build_d1(d), bases::build_d2(d)};
}

namespace {

SettingResult make_setting(const std::vector<double>& probs, std::string name,
                           std::int64_t shots, std::uint64_t seed,
                           std::uint64_t stream) {
    SettingResult s{std::move(name), probs, std::nullopt};
    if (shots > 0)
        s.counts = sample_counts(probs, shots, rng::derive_seed(seed, stream), s.setting);
    return s;
}

}  // namespace

ProtocolRun run_protocol(const NoisyPreparation& prep, const ProtocolBases& pb,
                         std::int64_t shots, std::uint64_t seed) {
    if (prep.ideal.n_qubits != pb.n_qubits)
        throw std::invalid_argument("run_protocol: preparation/basis size mismatch");
    if (shots < 0) throw std::invalid_argument("run_protocol: shots must be >= 0");

    ProtocolRun run;
    run.protocol = pb.protocol;
    run.n_qubits = pb.n_qubits;
    run.shots = shots;
    run.z = make_setting(z_probabilities(prep), "z", shots, seed, kStreamZ);

    if (pb.protocol == 1) {
        const auto p0 = outcome_indexed(outcome_probabilities(prep, 0, pb.first), pb.first);
        const auto p1 = outcome_indexed(outcome_probabilities(prep, 1, pb.second), pb.second);
        run.phase_settings.push_back(make_setting(p0, "c1_phi0", shots, seed, kStreamPhi0));
        run.phase_settings.push_back(make_setting(p1, "c1_phi1", shots, seed, kStreamPhi1));
    } else {
        const auto p1 = outcome_indexed(outcome_probabilities(prep, 0, pb.first), pb.first);
        const auto p2 = outcome_indexed(outcome_probabilities(prep, 0, pb.second), pb.second);
        run.phase_settings.push_back(make_setting(p1, "d1", shots, seed, kStreamD1));
        run.phase_settings.push_back(make_setting(p2, "d2", shots, seed, kStreamD2));
    }
    return run;
}

ProtocolRun run_protocol(const NoisyPreparation& prep, int protocol,
                         std::int64_t shots, std::uint64_t seed) {
    return run_protocol(prep, make_protocol_bases(protocol, prep.ideal.n_qubits),
                        shots, seed);
}

std::string counts_to_json(const Counts& counts) {
    nlohmann::json j;
    j["shots"] = counts.shots;
    j["setting"] = counts.setting;
    nlohmann::json freq = nlohmann::json::object();
    for (const auto& [outcome, n] : counts.freq) freq[std::to_string(outcome)] = n;
    j["counts"] = freq;
    return j.dump();
}

}  // namespace pstomo::sampling
