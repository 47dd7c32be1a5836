#pragma once

#include <string>

#include "mqc/protocols.hpp"

// Compiles gate circuits over {J(theta), CZ, H, ...} into adaptive
// measurement programs restricted to a chosen observable set, and executes
// and verifies them.
namespace mqc {

struct GateApp {
    GateSpec gate;
    std::vector<int> targets;
};

struct CircuitIR {
    int num_qubits = 0;
    std::vector<GateApp> gates;

    /// Full 2^n x 2^n unitary of the circuit (test/verification oracle only).
    CMat unitary() const;
    StateVector apply_to(StateVector state) const;

    static CircuitIR parse(std::string_view text);
};

/// Four-factor form U = e^{i phi} J(0) J(alpha) J(beta) J(gamma).
struct JDecomposition {
    double phi = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    CMat reconstruct() const;
    /// J angles in application order (first applied first).
    std::vector<double> j_angles_applied() const { return {gamma, beta, alpha, 0.0}; }
};

JDecomposition decompose_1q(const CMat& u);

struct ProgramStep {
    enum class Kind { Measure, Correction, Relocation };
    Kind kind = Kind::Measure;
    // Measure
    ObservableSpec obs;
    std::vector<int> targets;  // physical qubits
    // Correction
    char pauli = 'Z';
    int logical = 0;
    int max_rounds = 0;
    // Relocation
    int physical = 0;
};

struct MeasurementProgram {
    int num_physical = 0;  // logical qubits + 1 ancilla
    ObservableSet mode;
    std::vector<ProgramStep> steps;

    int num_logical() const { return num_physical - 1; }
    /// True iff every Measure step's observable is in the declared set.
    bool audit_mode() const;
    int measure_count() const;

    std::string to_text() const;
    static MeasurementProgram parse(std::string_view text);
};

struct CompileOptions {
    int max_rounds = 64;
};

MeasurementProgram compile(const CircuitIR& circuit, ObservableSet mode,
                           const CompileOptions& opts = {});

struct ExecutionResult {
    StateVector state;                 // num_logical + 1 physical qubits
    std::vector<int> logical_to_phys;  // [logical-1] -> physical
    int free_phys = 0;                 // the reusable ancilla slot
    OutcomeTranscript transcript;
    std::vector<std::string> byproduct_labels;  // one per simulation step
};

/// Runs the program. The input occupies the logical qubits; one ancilla in
/// |0> is appended as the last physical qubit.
ExecutionResult execute(const MeasurementProgram& program, const StateVector& input,
                        OutcomeSource& source);
ExecutionResult execute(const MeasurementProgram& program, const StateVector& input,
                        std::mt19937_64& rng);

/// |<oracle (x) a|state>| maximized over the ancilla state a, after mapping
/// logical qubits back into order; 1 iff state = oracle (x) (ancilla state).
double logical_fidelity(const ExecutionResult& result, const StateVector& oracle);

struct VerifyReport {
    int trials = 0;
    double min_fidelity = 1.0;
    bool mode_ok = true;
    std::map<std::string, int> byproduct_counts;  // per sim-step class
    int byproduct_total = 0;
};

VerifyReport verify_program(const CircuitIR& circuit, ObservableSet mode, int trials,
                            std::uint64_t seed);

}  // namespace mqc
