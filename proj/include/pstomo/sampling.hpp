#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pstomo/bases.hpp"
#include "pstomo/qcore.hpp"

namespace pstomo::sampling {

/// Ideal N-qubit state prepared through a white-noise channel of scale
/// lambda: rho = (1-lambda)|phi><phi| + (lambda/2^N) I. The mixed state is
/// never materialized; probabilities use the rank-(d+1) decomposition.
struct NoisyPreparation {
    qcore::PureState ideal;
    double lambda = 0.0;
};

NoisyPreparation make_preparation(qcore::PureState ideal, double lambda);

/// Shot histogram for one measurement setting. freq may omit outcomes (the
/// remaining shots are attributed to unlisted outcomes collectively, with
/// complete = false); shots is always the denominator for probabilities.
struct Counts {
    std::int64_t shots = 0;
    std::map<int, std::int64_t> freq;
    std::string setting;
    bool complete = true;
};

/// Exact probabilities of collapsing onto each basis element (element-list
/// order) when the preparation is adjoined to ancilla |b>:
///   P_j = (1-lambda) |<e_j|Phi_b>|^2 + (lambda/2^N) sum_k |<e_j|b*2^N+k>|^2.
std::vector<double> outcome_probabilities(const NoisyPreparation& prep,
                                          int ancilla_bit,
                                          const bases::MeasurementBasis& basis);

/// Canonical Z-measurement probabilities of the data register alone.
std::vector<double> z_probabilities(const NoisyPreparation& prep);

/// Reindexes element-ordered probabilities by measurement outcome.
std::vector<double> outcome_indexed(const std::vector<double>& element_probs,
                                    const bases::MeasurementBasis& basis);

/// Multinomial draw over outcome indices; deterministic for a fixed seed.
Counts sample_counts(const std::vector<double>& probs, std::int64_t shots,
                     std::uint64_t seed, std::string setting = {});

/// One measurement setting of a protocol run. Exact mode (shots = 0) fills
/// only `probs`; sampled mode additionally fills `counts`.
struct SettingResult {
    std::string setting;
    std::vector<double> probs;  // outcome-indexed
    std::optional<Counts> counts;
};

struct ProtocolRun {
    int protocol = 1;
    int n_qubits = 0;
    std::int64_t shots = 0;  // 0 = exact mode
    SettingResult z;
    std::vector<SettingResult> phase_settings;  // {c1_phi0, c1_phi1} or {d1, d2}
};

/// Prebuilt bases so sweeps do not reconstruct them per trial.
struct ProtocolBases {
    int protocol = 1;
    int n_qubits = 0;
    bases::MeasurementBasis first;   // C1 or D1
    bases::MeasurementBasis second;  // C1 (reused) or D2
};

ProtocolBases make_protocol_bases(int protocol, int n_qubits);

/// Runs all settings of one protocol. shots = 0 returns exact probability
/// vectors; otherwise each setting draws `shots` samples from an independent
/// substream keyed by (seed, setting id), so distinct settings and trials may
/// be sampled concurrently with identical results.
ProtocolRun run_protocol(const NoisyPreparation& prep, const ProtocolBases& pb,
                         std::int64_t shots, std::uint64_t seed);
ProtocolRun run_protocol(const NoisyPreparation& prep, int protocol,
                         std::int64_t shots, std::uint64_t seed);

/// JSON per the shared schema:
/// {"shots": int, "setting": str, "counts": {"<outcome>": int}}
std::string counts_to_json(const Counts& counts);

}  // namespace pstomo::sampling
