#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pstomo/qcore.hpp"
#include "pstomo/sampling.hpp"

namespace pstomo::reconstruct {

/// How a phase difference is extracted from raw (cos, sin) estimates that
/// sampling noise may push outside the feasible region.
///  * RawAtan2 (default): atan2 of the raw pair; equivalent to the tangent
///    ratio with quadrant taken from the signs.
///  * ClampedComponents: clamp each component to [-1,1] before atan2. For
///    protocol 2 the two cosines are clamped before the sine inversion.
enum class PhaseConvention { RawAtan2, ClampedComponents };

struct ReconstructOptions {
    PhaseConvention convention = PhaseConvention::RawAtan2;
    /// Pairs with sqrt(P_k * P_{k+1}) below this are flagged undetermined
    /// (their delta defaults to 0) and downstream phases become untrusted.
    double conditioning_floor = 1e-6;
};

struct PhasePairEstimate {
    int k_lo = 0, k_hi = 0;      // estimates theta_{k_hi} - theta_{k_lo}
    double cos_raw = 0.0;        // before any clamping
    double sin_raw = 0.0;        // protocol 2: derived from the two cosines
    bool clamped = false;        // a raw component exceeded magnitude 1
    bool undetermined = false;   // conditioning below floor
    double delta = 0.0;          // in [-pi, pi)
    double conditioning = 0.0;   // sqrt(P_{k_lo} * P_{k_hi})
    bool in_chain = true;        // false for the protocol-1 closure pair
    std::string setting;
};

struct ReconstructionResult {
    int n_qubits = 0;
    std::vector<double> amplitudes;  // nonnegative, from the Z setting
    std::vector<double> phases;      // theta_0 = 0, wrapped to [-pi, pi)
    std::vector<bool> phase_trusted;
    std::vector<PhasePairEstimate> pairs;
    /// Protocol 1 only: defect of the redundant closure pair, i.e. the
    /// measured wrap delta minus the chain-implied theta_0 - theta_{d-1}.
    /// Reported as a diagnostic, never used to correct phases.
    std::optional<double> wrap_residual;
    qcore::PureState estimate;
};

/// Converts a histogram to probabilities n_k / shots over [0, n_outcomes).
/// Unlisted outcomes get probability 0; outcome indices >= n_outcomes are
/// rejected.
std::vector<double> probabilities_from_counts(const sampling::Counts& counts,
                                              int n_outcomes);

/// a_k = sqrt(P_k) from the canonical Z setting.
std::vector<double> estimate_amplitudes(const std::vector<double>& z_probs);
std::vector<double> estimate_amplitudes(const sampling::Counts& z_counts, int n_qubits);

/// Protocol-1 phase estimation from the two C1 settings plus Z. Probability
/// vectors are outcome-indexed (exact mode); the Counts overload divides by
/// each setting's declared shot count.
ReconstructionResult phases_protocol1(int n_qubits, const std::vector<double>& z_probs,
                                      const std::vector<double>& phi0_probs,
                                      const std::vector<double>& phi1_probs,
                                      const ReconstructOptions& opts = {});
ReconstructionResult phases_protocol1(int n_qubits, const sampling::Counts& z,
                                      const sampling::Counts& phi0,
                                      const sampling::Counts& phi1,
                                      const ReconstructOptions& opts = {});

/// Protocol-2 phase estimation from the D1/D2 settings plus Z. The final D2
/// pair (d-1, d) carries no information and is excluded.
ReconstructionResult phases_protocol2(int n_qubits, const std::vector<double>& z_probs,
                                      const std::vector<double>& d1_probs,
                                      const std::vector<double>& d2_probs,
                                      const ReconstructOptions& opts = {});
ReconstructionResult phases_protocol2(int n_qubits, const sampling::Counts& z,
                                      const sampling::Counts& d1,
                                      const sampling::Counts& d2,
                                      const ReconstructOptions& opts = {});

/// Reconstructs from a protocol run; uses counts when present, exact
/// probabilities otherwise.
ReconstructionResult reconstruct_run(const sampling::ProtocolRun& run,
                                     const ReconstructOptions& opts = {});

/// Unit-norm state with amplitudes a_k e^{i theta_k}.
qcore::PureState assemble_state(const std::vector<double>& amplitudes,
                                const std::vector<double>& phases);

/// Parses the shared counts JSON schema. Keys are decimal outcome indices,
/// or bitstrings (ancilla bit leftmost) when every key is a 0/1 string of
/// one common length >= 2.
sampling::Counts parse_counts_file(const std::string& text);

std::string result_to_json(const ReconstructionResult& result,
                           std::optional<double> fidelity = std::nullopt);

}  // namespace pstomo::reconstruct
