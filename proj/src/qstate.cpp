#include "mqc/qstate.hpp"

#include <algorithm>
#include <cmath>

#include "mqc/errors.hpp"
#include "mqc/kernels.hpp"

namespace mqc {

StateVector::StateVector(int num_qubits, std::vector<cplx> amplitudes)
    : nq_(num_qubits), amp_(std::move(amplitudes)) {
    if (nq_ < 1) throw InputError("StateVector: need at least one qubit");
    if (amp_.size() != (std::size_t{1} << nq_))
        throw InputError("StateVector: amplitude count must be 2^num_qubits");
}

double StateVector::norm_sq() const { return kernels::active().norm_sq(amp_.data(), amp_.size()); }

void StateVector::normalize() {
    const double n2 = norm_sq();
    if (n2 <= 0.0) throw InputError("StateVector: cannot normalize zero vector");
    kernels::active().scale(amp_.data(), amp_.size(), 1.0 / std::sqrt(n2));
}

std::size_t StateVector::mask(int qubit) const {
    check_qubit(qubit);
    return std::size_t{1} << (nq_ - qubit);
}

void StateVector::check_qubit(int q) const {
    if (q < 1 || q > nq_) throw InputError("qubit index out of range");
}

void StateVector::apply_matrix1(const CMat& m, int qubit) {
    if (m.rows() != 2 || m.cols() != 2) throw InputError("apply_matrix1: matrix must be 2x2");
    kernels::active().apply_1q(amp_.data(), amp_.size(), mask(qubit), m.data());
}

void StateVector::apply_matrix2(const CMat& m, int qubit_a, int qubit_b) {
    if (m.rows() != 4 || m.cols() != 4) throw InputError("apply_matrix2: matrix must be 4x4");
    if (qubit_a == qubit_b) throw InputError("apply_matrix2: targets must be distinct");
    kernels::active().apply_2q(amp_.data(), amp_.size(), mask(qubit_a), mask(qubit_b), m.data());
}

int GateSpec::arity() const {
    switch (kind) {
        case Kind::CZ:
        case Kind::CzVariant:
            return 2;
        default:
            return 1;
    }
}

GateSpec GateSpec::custom1q(CMat m) {
    if (m.rows() != 2 || m.cols() != 2) throw InputError("custom1q: matrix must be 2x2");
    if (!is_unitary(m, 1e-10)) throw InputError("custom1q: matrix is not unitary");
    GateSpec g;
    g.kind = Kind::Custom1Q;
    g.custom = std::move(m);
    return g;
}

CMat GateSpec::matrix() const {
    const cplx i{0.0, 1.0};
    switch (kind) {
        case Kind::Identity:
            return CMat::identity(2);
        case Kind::H:
            return CMat(2, 2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2});
        case Kind::Zrot:
            return CMat(2, 2, {1.0, 0.0, 0.0, std::exp(i * theta)});
        case Kind::P:
            return GateSpec::zrot(kPi / 2).matrix();
        case Kind::Pinv:
            return GateSpec::zrot(3 * kPi / 2).matrix();
        case Kind::PauliX:
            return CMat(2, 2, {0.0, 1.0, 1.0, 0.0});
        case Kind::PauliY:
            return CMat(2, 2, {0.0, -i, i, 0.0});
        case Kind::PauliZ:
            return CMat(2, 2, {1.0, 0.0, 0.0, -1.0});
        case Kind::J:
            return GateSpec::h().matrix() * GateSpec::zrot(theta).matrix();
        case Kind::CZ: {
            CMat m = CMat::identity(4);
            m(3, 3) = -1.0;
            return m;
        }
        case Kind::CzVariant: {
            const CMat id2 = CMat::identity(2);
            const CMat h = GateSpec::h().matrix();
            const CMat pinv = GateSpec::pinv().matrix();
            return kron(pinv, h * pinv) * GateSpec::cz().matrix() * kron(id2, h);
        }
        case Kind::Custom1Q:
            return custom;
    }
    throw InputError("GateSpec: unknown kind");
}

std::string GateSpec::name() const {
    switch (kind) {
        case Kind::Identity: return "I";
        case Kind::H: return "H";
        case Kind::Zrot: return "Z(" + std::to_string(theta) + ")";
        case Kind::P: return "P";
        case Kind::Pinv: return "Pinv";
        case Kind::PauliX: return "X";
        case Kind::PauliY: return "Y";
        case Kind::PauliZ: return "Z";
        case Kind::J: return "J(" + std::to_string(theta) + ")";
        case Kind::CZ: return "CZ";
        case Kind::CzVariant: return "UCZ";
        case Kind::Custom1Q: return "U1";
    }
    return "?";
}

StateVector make_basis_state(int num_qubits, std::string_view bits) {
    if (num_qubits < 1) throw InputError("make_basis_state: need at least one qubit");
    if (static_cast<int>(bits.size()) != num_qubits)
        throw InputError("make_basis_state: bitstring length must equal num_qubits");
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw InputError("make_basis_state: bitstring must be 0/1");
        index = (index << 1) | static_cast<std::size_t>(c - '0');
    }
    std::vector<cplx> amp(std::size_t{1} << num_qubits);
    amp[index] = 1.0;
    return StateVector(num_qubits, std::move(amp));
}

StateVector plus_theta_state(double theta, bool minus) {
    const cplx phase = std::exp(cplx{0.0, 1.0} * wrap_angle(theta));
    std::vector<cplx> amp{kInvSqrt2, (minus ? -1.0 : 1.0) * kInvSqrt2 * phase};
    return StateVector(1, std::move(amp));
}

StateVector apply_gate(StateVector state, const GateSpec& gate, std::span<const int> targets) {
    if (static_cast<int>(targets.size()) != gate.arity())
        throw InputError("apply_gate: target count does not match gate arity");
    const CMat m = gate.matrix();
    if (gate.arity() == 1) {
        state.apply_matrix1(m, targets[0]);
    } else {
        state.apply_matrix2(m, targets[0], targets[1]);
    }
    return state;
}

StateVector apply_gate(StateVector state, const GateSpec& gate, std::initializer_list<int> targets) {
    return apply_gate(std::move(state), gate, std::span<const int>(targets.begin(), targets.size()));
}

cplx overlap(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) throw InputError("overlap: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amplitude(i)) * b.amplitude(i);
    return s;
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol) {
    return std::abs(overlap(a, b)) >= 1.0 - tol;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    std::vector<cplx> amp(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) amp[i * b.dim() + j] = a.amplitude(i) * b.amplitude(j);
    return StateVector(a.num_qubits() + b.num_qubits(), std::move(amp));
}

StateVector permute_qubits(const StateVector& s, std::span<const int> perm) {
    const int n = s.num_qubits();
    if (static_cast<int>(perm.size()) != n) throw InputError("permute_qubits: bad permutation size");
    std::vector<cplx> amp(s.dim());
    for (std::size_t old_idx = 0; old_idx < s.dim(); ++old_idx) {
        std::size_t new_idx = 0;
        for (int pos = 1; pos <= n; ++pos) {
            const int src = perm[pos - 1];
            const std::size_t bit = (old_idx >> (n - src)) & 1u;
            new_idx |= bit << (n - pos);
        }
        amp[new_idx] = s.amplitude(old_idx);
    }
    return StateVector(n, std::move(amp));
}

StateVector random_state(int num_qubits, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> amp(std::size_t{1} << num_qubits);
    for (auto& a : amp) a = cplx{g(rng), g(rng)};
    StateVector s(num_qubits, std::move(amp));
    s.normalize();
    return s;
}

CMat random_unitary2(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    // first column: normalized random vector; second: orthonormal complement
    cplx a{g(rng), g(rng)}, b{g(rng), g(rng)};
    double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    // random phase on the second column
    const cplx phase = std::exp(cplx{0.0, 1.0} * std::uniform_real_distribution<double>(0, 2 * kPi)(rng));
    return CMat(2, 2, {a, -std::conj(b) * phase, b, std::conj(a) * phase});
}

}  // namespace mqc
