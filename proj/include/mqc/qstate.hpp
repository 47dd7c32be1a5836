#pragma once

#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "mqc/errors.hpp"
#include "mqc/linalg.hpp"

// Dense pure-state simulator.
//
// Qubit ordering convention: qubit 1 is the most significant bit of the
// basis index, so |q1 q2 ... qn> maps to index (q1 q2 ... qn) read as
// binary. Qubits are 1-indexed throughout the public API.
namespace mqc {

class StateVector {
public:
    StateVector() = default;
    StateVector(int num_qubits, std::vector<cplx> amplitudes);

    int num_qubits() const { return nq_; }
    std::size_t dim() const { return amp_.size(); }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    cplx amplitude(std::size_t index) const { return amp_[index]; }

    double norm_sq() const;
    void normalize();

    /// Basis-index bit mask of 1-indexed qubit q.
    std::size_t mask(int qubit) const;

    void apply_matrix1(const CMat& m, int qubit);
    void apply_matrix2(const CMat& m, int qubit_a, int qubit_b);

private:
    int nq_ = 0;
    std::vector<cplx> amp_;
    void check_qubit(int q) const;
};

struct GateSpec {
    enum class Kind {
        Identity,
        H,
        Zrot,
        P,
        Pinv,
        PauliX,
        PauliY,
        PauliZ,
        J,
        CZ,
        CzVariant,  // (P^-1 (x) H P^-1) CZ (I (x) H)
        Custom1Q,
    };

    Kind kind = Kind::Identity;
    double theta = 0.0;  // Zrot / J only
    CMat custom;         // Custom1Q only

    int arity() const;
    CMat matrix() const;
    std::string name() const;

    static GateSpec identity() { return {Kind::Identity}; }
    static GateSpec h() { return {Kind::H}; }
    static GateSpec zrot(double theta) { return {Kind::Zrot, wrap_angle(theta)}; }
    static GateSpec p() { return {Kind::P}; }
    static GateSpec pinv() { return {Kind::Pinv}; }
    static GateSpec pauli_x() { return {Kind::PauliX}; }
    static GateSpec pauli_y() { return {Kind::PauliY}; }
    static GateSpec pauli_z() { return {Kind::PauliZ}; }
    static GateSpec j(double theta) { return {Kind::J, wrap_angle(theta)}; }
    static GateSpec cz() { return {Kind::CZ}; }
    static GateSpec cz_variant() { return {Kind::CzVariant}; }
    static GateSpec custom1q(CMat m);
};

StateVector make_basis_state(int num_qubits, std::string_view bits);

/// (|0> + e^{i theta}|1>)/sqrt(2), or the minus-sign companion.
StateVector plus_theta_state(double theta, bool minus = false);

StateVector apply_gate(StateVector state, const GateSpec& gate, std::span<const int> targets);
StateVector apply_gate(StateVector state, const GateSpec& gate, std::initializer_list<int> targets);

cplx overlap(const StateVector& a, const StateVector& b);
bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol);

StateVector tensor(const StateVector& a, const StateVector& b);

/// Reorder qubits: new qubit position i holds what old qubit perm[i-1] held.
StateVector permute_qubits(const StateVector& s, std::span<const int> perm);

/// Haar-ish random state (normalized complex Gaussian amplitudes).
StateVector random_state(int num_qubits, std::mt19937_64& rng);

/// Random 2x2 unitary via Gram-Schmidt on a random complex matrix.
CMat random_unitary2(std::mt19937_64& rng);

}  // namespace mqc
