#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pstomo/bases.hpp"
#include "pstomo/qcore.hpp"

namespace pstomo::circuits {

// Gate-level circuits for both protocols. Data qubits are q_0..q_{N-1} with
// q_0 the most significant label bit; the ancilla has index N and is the
// most significant bit overall, matching the bases module's label space.

enum class GateKind {
    X,        // NOT; with controls this is CX / CCX / multi-controlled X
    H,
    Sdg,
    V1,       // protocol-2 factor gates
    V2,
    Phase,    // diag(1, e^{i param})
    U1,       // generic single-qubit matrix
    U2,       // generic two-qubit matrix (targets[0] = high bit)
};

struct Control {
    int qubit = 0;
    bool positive = true;  // false = hollow (triggers on |0>)
    bool operator==(const Control&) const = default;
};

struct Gate {
    GateKind kind = GateKind::X;
    std::vector<int> targets;
    std::vector<Control> controls;
    double param = 0.0;  // Phase angle
    cvec matrix;         // U1: 4 entries, U2: 16 entries
    bool operator==(const Gate&) const = default;
};

struct Circuit {
    int n_data = 0;
    bool has_ancilla = false;
    std::vector<Gate> gates;

    int n_qubits() const { return n_data + (has_ancilla ? 1 : 0); }
    int ancilla() const { return n_data; }
    /// Label-space weight of a qubit (ancilla above all data qubits).
    std::uint64_t bit_weight(int qubit) const;
};

enum class IncrementVariant { SolidAscending, HollowDescending };

/// Cascade of multi-controlled X gates realizing k -> (k + direction) mod 2^n
/// on an n-qubit register. Both drawn variants are available and produce the
/// same unitary.
Circuit build_increment_circuit(int n, int direction,
                                IncrementVariant variant = IncrementVariant::SolidAscending);

/// Protocol-1 measurement circuit: ancilla-controlled data decrement, then
/// the conjugate two-qubit partial Fourier transform on (q_{N-1}, ancilla).
/// Measuring the output in the canonical basis realizes the C1 measurement.
/// The N+1 circuit is the N circuit prefixed by one multi-controlled X on
/// the new qubit.
Circuit build_protocol1_circuit(int n_data);

/// Protocol-2 circuits: first the D1 circuit (conjugate three-point Fourier
/// transform on (q_{N-1}, ancilla)), then the D2 circuit (label-space
/// decrement followed by the D1 gates).
std::pair<Circuit, Circuit> build_protocol2_circuits(int n_data);

/// Applies the circuit's gates in order. The state must have n_qubits()
/// qubits laid out in the circuit's label convention.
qcore::PureState apply_circuit(const Circuit& c, const qcore::PureState& state);

/// Product of the gate embeddings in listed order. Requires n_qubits() <= 10.
qcore::GateMatrix circuit_unitary(const Circuit& c);

struct CircuitBasisMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reconciles circuit measurement outcomes with basis-element indices:
/// applying the circuit and measuring outcome m projects onto basis element
/// element_of_outcome[m], up to the recorded unit phase. Throws
/// CircuitBasisMismatch when a column fails to match any element within 1e-9.
struct OutcomeMap {
    std::vector<int> element_of_outcome;
    cvec phase;
    double residual = 0.0;  // worst column deviation
};

OutcomeMap outcome_map(const Circuit& c, const bases::MeasurementBasis& basis);

/// One line of lowered QASM; params_text, when set, is the exact text
/// emitted for the parameter list.
struct QasmOp {
    std::string name;
    std::vector<int> qubits;
    std::vector<double> params;
    std::string params_text;
};

/// Lowers to the gate set {x, h, sdg, cx, ccx, u(theta,phi,lambda)}; larger
/// multi-controlled X gates are expanded ancilla-free. Throws
/// std::invalid_argument for gate kinds with no expansion (generic two-qubit
/// matrices).
std::vector<QasmOp> lower_to_qasm_ops(const Circuit& c);

/// Deterministic OpenQASM 2.0 text; one classical bit per qubit, measurement
/// lines appended when requested.
std::string emit_qasm(const Circuit& c, bool with_measurements = true);

}  // namespace pstomo::circuits
