#pragma once

#include <map>

#include "mqc/measurement.hpp"

// Measurement-only procedures: state transfer, J(theta) simulation, the
// two-qubit gate simulation, Pauli correction rounds, and repeat-until-
// success composition. Byproduct conventions follow the closed forms the
// sequences produce:
//   transfer:   sigma_x^{(1-s2)/2} sigma_z^{(1+s1*s2*s3)/2} on the ancilla
//   sim_j:      sigma_z^{(1-s2)/2} sigma_x^{(1+s1*s2*s3)/2} on the ancilla
//   sim_cz:     sigma_z^{(1-s1*s2*s3)/2} on q1, sigma_x^{(1-s2*s3*s4)/2} on q2
//   corrections: the target Pauli lands iff s1*s3 = -1
namespace mqc {

struct PauliMask {
    bool x = false;
    bool z = false;
    bool identity() const { return !x && !z; }
    std::string label() const {
        if (x && z) return "ZX";
        if (x) return "X";
        if (z) return "Z";
        return "I";
    }
};

struct ByproductRecord {
    std::map<int, PauliMask> paulis;  // qubit -> byproduct component
    std::vector<int> sources;         // the s-values that determined it

    PauliMask on(int qubit) const {
        auto it = paulis.find(qubit);
        return it == paulis.end() ? PauliMask{} : it->second;
    }
};

/// Apply a recorded byproduct to a state (used by verification oracles).
StateVector apply_byproduct(StateVector state, const ByproductRecord& record);

struct TransferResult {
    StateVector state;
    ByproductRecord byproduct;
    OutcomeTranscript transcript;
};

/// Fig-0-style state transfer: moves |phi> from src to anc up to a Pauli.
/// Sequence: -Y on anc, ZZ on (src, anc), Y on src.
TransferResult state_transfer(StateVector state, int src, int anc, OutcomeSource& source);

struct SimJResult {
    StateVector state;
    ByproductRecord byproduct;
    OutcomeTranscript transcript;
    int output_qubit = 0;  // the logical qubit relocates here (== anc)
};

/// Simulation step of J(theta). Sequence: Y on anc, ZX on (input, anc),
/// Planar(pi/2 - theta) on input. The logical qubit moves to anc.
SimJResult sim_j(StateVector state, double theta, int input, int anc, OutcomeSource& source);

struct SimCzResult {
    StateVector state;
    ByproductRecord byproduct;
    OutcomeTranscript transcript;
};

/// Simulation step of (P^-1 (x) H P^-1) CZ (I (x) H) on (q1, q2).
/// Sequence: Y on anc, ZX on (q1, anc), ZX on (anc, q2), Y on anc.
SimCzResult sim_cz_variant(StateVector state, int q1, int q2, int anc, OutcomeSource& source);

struct CorrectionResult {
    StateVector state;
    bool success = false;
    OutcomeTranscript transcript;
};

/// One sigma_x correction round: Y on anc, XZ on (q, anc), Y on anc.
CorrectionResult correct_x_round(StateVector state, int q, int anc, OutcomeSource& source);

/// One sigma_z correction round: Y on anc, ZX on (q, anc), Y on anc.
CorrectionResult correct_z_round(StateVector state, int q, int anc, OutcomeSource& source);

struct ApplyPauliResult {
    StateVector state;
    int rounds_used = 0;
    OutcomeTranscript transcript;
};

/// Repeat correction rounds until the target Pauli ('X', 'Y' or 'Z') is
/// applied; sigma_y is a sigma_z success followed by a sigma_x success.
/// Throws NonTerminationError when a component exhausts max_rounds.
ApplyPauliResult apply_pauli(StateVector state, char pauli, int q, int anc,
                             OutcomeSource& source, int max_rounds = 64);

ApplyPauliResult apply_pauli(StateVector state, char pauli, int q, int anc,
                             std::mt19937_64& rng, int max_rounds = 64);

}  // namespace mqc
