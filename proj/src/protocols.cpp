#include "mqc/protocols.hpp"

namespace mqc {
namespace {

MeasurementOutcome step(StateVector& state, const ObservableSpec& obs,
                        std::initializer_list<int> targets, OutcomeSource& source,
                        OutcomeTranscript& transcript) {
    std::span<const int> tg(targets.begin(), targets.size());
    MeasurementOutcome out = measure_with(state, obs, tg, source);
    transcript.entries.push_back({obs, {tg.begin(), tg.end()}, out.value, out.probability});
    state = out.post_state;
    return out;
}

void check_distinct(const StateVector& state, std::initializer_list<int> qubits) {
    std::vector<int> seen;
    for (int q : qubits) {
        if (q < 1 || q > state.num_qubits()) throw InputError("protocol: qubit out of range");
        for (int s : seen)
            if (s == q) throw InputError("protocol: qubits must be distinct");
        seen.push_back(q);
    }
}

}  // namespace

StateVector apply_byproduct(StateVector state, const ByproductRecord& record) {
    for (const auto& [qubit, mask] : record.paulis) {
        if (mask.x) state = apply_gate(std::move(state), GateSpec::pauli_x(), {qubit});
        if (mask.z) state = apply_gate(std::move(state), GateSpec::pauli_z(), {qubit});
    }
    return state;
}

TransferResult state_transfer(StateVector state, int src, int anc, OutcomeSource& source) {
    check_distinct(state, {src, anc});
    TransferResult r;
    const int s1 = step(state, ObservableSpec::minus_y(), {anc}, source, r.transcript).value;
    const int s2 = step(state, ObservableSpec::zz(), {src, anc}, source, r.transcript).value;
    const int s3 = step(state, ObservableSpec::y(), {src}, source, r.transcript).value;
    // Derived by branch enumeration (no closed form is given for this
    // sequence): x-exponent (1-s2)/2, z-exponent (1+s1*s2*s3)/2.
    PauliMask mask;
    mask.x = s2 == -1;
    mask.z = s1 * s2 * s3 == +1;
    r.byproduct.paulis[anc] = mask;
    r.byproduct.sources = {s1, s2, s3};
    r.state = std::move(state);
    return r;
}

SimJResult sim_j(StateVector state, double theta, int input, int anc, OutcomeSource& source) {
    check_distinct(state, {input, anc});
    SimJResult r;
    const int s1 = step(state, ObservableSpec::y(), {anc}, source, r.transcript).value;
    const int s2 = step(state, ObservableSpec::zx(), {input, anc}, source, r.transcript).value;
    const int s3 =
        step(state, ObservableSpec::planar(kPi / 2 - theta), {input}, source, r.transcript).value;
    PauliMask mask;
    mask.z = s2 == -1;
    mask.x = s1 * s2 * s3 == +1;
    r.byproduct.paulis[anc] = mask;
    r.byproduct.sources = {s1, s2, s3};
    r.output_qubit = anc;
    r.state = std::move(state);
    return r;
}

SimCzResult sim_cz_variant(StateVector state, int q1, int q2, int anc, OutcomeSource& source) {
    check_distinct(state, {q1, q2, anc});
    SimCzResult r;
    const int s1 = step(state, ObservableSpec::y(), {anc}, source, r.transcript).value;
    const int s2 = step(state, ObservableSpec::zx(), {q1, anc}, source, r.transcript).value;
    const int s3 = step(state, ObservableSpec::zx(), {anc, q2}, source, r.transcript).value;
    const int s4 = step(state, ObservableSpec::y(), {anc}, source, r.transcript).value;
    r.byproduct.paulis[q1] = {false, s1 * s2 * s3 == -1};
    r.byproduct.paulis[q2] = {s2 * s3 * s4 == -1, false};
    r.byproduct.sources = {s1, s2, s3, s4};
    r.state = std::move(state);
    return r;
}

CorrectionResult correct_x_round(StateVector state, int q, int anc, OutcomeSource& source) {
    check_distinct(state, {q, anc});
    CorrectionResult r;
    const int s1 = step(state, ObservableSpec::y(), {anc}, source, r.transcript).value;
    // X on q, Z on anc: the ZX observable applied to the reversed pair.
    const int s2 = step(state, ObservableSpec::zx(), {anc, q}, source, r.transcript).value;
    (void)s2;
    const int s3 = step(state, ObservableSpec::y(), {anc}, source, r.transcript).value;
    r.success = s1 * s3 == -1;
    r.state = std::move(state);
    return r;
}

CorrectionResult correct_z_round(StateVector state, int q, int anc, OutcomeSource& source) {
    check_distinct(state, {q, anc});
    CorrectionResult r;
    const int s1 = step(state, ObservableSpec::y(), {anc}, source, r.transcript).value;
    const int s2 = step(state, ObservableSpec::zx(), {q, anc}, source, r.transcript).value;
    (void)s2;
    const int s3 = step(state, ObservableSpec::y(), {anc}, source, r.transcript).value;
    r.success = s1 * s3 == -1;
    r.state = std::move(state);
    return r;
}

namespace {

void repeat_until_success(StateVector& state, char pauli, int q, int anc, OutcomeSource& source,
                          int max_rounds, ApplyPauliResult& result) {
    auto round = pauli == 'X' ? correct_x_round : correct_z_round;
    for (int i = 0; i < max_rounds; ++i) {
        CorrectionResult r = round(std::move(state), q, anc, source);
        state = std::move(r.state);
        result.transcript.append(r.transcript);
        ++result.rounds_used;
        if (r.success) return;
    }
    throw NonTerminationError(std::string("sigma_") + static_cast<char>(pauli + 32) +
                                  " correction did not succeed within max_rounds",
                              result.transcript);
}

}  // namespace

ApplyPauliResult apply_pauli(StateVector state, char pauli, int q, int anc,
                             OutcomeSource& source, int max_rounds) {
    if (pauli != 'X' && pauli != 'Y' && pauli != 'Z')
        throw InputError("apply_pauli: pauli must be X, Y or Z");
    ApplyPauliResult result;
    if (pauli == 'Y') {
        // sigma_y = i sigma_x sigma_z: a sigma_z success then a sigma_x success.
        repeat_until_success(state, 'Z', q, anc, source, max_rounds, result);
        repeat_until_success(state, 'X', q, anc, source, max_rounds, result);
    } else {
        repeat_until_success(state, pauli, q, anc, source, max_rounds, result);
    }
    result.state = std::move(state);
    return result;
}

ApplyPauliResult apply_pauli(StateVector state, char pauli, int q, int anc,
                             std::mt19937_64& rng, int max_rounds) {
    SampledSource source(rng);
    return apply_pauli(std::move(state), pauli, q, anc, source, max_rounds);
}

}  // namespace mqc
