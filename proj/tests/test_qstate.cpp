#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqc/qstate.hpp"
#include "oracles.hpp"

using namespace mqc;

TEST_CASE("basis states and qubit ordering") {
    // qubit 1 is the most significant index bit
    StateVector s = make_basis_state(3, "011");
    CHECK(s.dim() == 8);
    CHECK(std::abs(s.amplitude(0b011) - 1.0) < 1e-15);
    CHECK(s.mask(1) == 4);
    CHECK(s.mask(3) == 1);
    CHECK_THROWS_AS(make_basis_state(2, "012"), InputError);
    CHECK_THROWS_AS(make_basis_state(2, "0"), InputError);
}

TEST_CASE("plus_theta_state") {
    StateVector p = plus_theta_state(0.7);
    CHECK(std::abs(p.amplitude(0) - kInvSqrt2) < 1e-15);
    CHECK(std::abs(p.amplitude(1) - kInvSqrt2 * std::exp(cplx{0.0, 0.7})) < 1e-15);
    StateVector m = plus_theta_state(0.7, true);
    CHECK(std::abs(m.amplitude(1) + kInvSqrt2 * std::exp(cplx{0.0, 0.7})) < 1e-15);
    // the two are orthogonal
    CHECK(std::abs(overlap(p, m)) < 1e-15);
}

TEST_CASE("gate matrices match dense oracles") {
    CHECK(max_abs_diff(GateSpec::h().matrix(), oracles::hadamard()) < 1e-15);
    CHECK(max_abs_diff(GateSpec::pauli_x().matrix(), oracles::pauli_x()) < 1e-15);
    CHECK(max_abs_diff(GateSpec::pauli_y().matrix(), oracles::pauli_y()) < 1e-15);
    CHECK(max_abs_diff(GateSpec::pauli_z().matrix(), oracles::pauli_z()) < 1e-15);
    CHECK(max_abs_diff(GateSpec::p().matrix(), oracles::phase_gate()) < 1e-15);
    CHECK(max_abs_diff(GateSpec::zrot(1.1).matrix(), oracles::zrot(1.1)) < 1e-15);
    CHECK(max_abs_diff(GateSpec::cz().matrix(), oracles::cz4()) < 1e-15);
    // J(theta) = H Z(theta)
    CHECK(max_abs_diff(GateSpec::j(0.9).matrix(), oracles::hadamard() * oracles::zrot(0.9)) <
          1e-15);
    // P^-1 = adjoint of P, and equals Z(3*pi/2)
    CHECK(max_abs_diff(GateSpec::pinv().matrix(), oracles::phase_gate().adjoint()) < 1e-15);
    CHECK(max_abs_diff(GateSpec::pinv().matrix(), oracles::zrot(3 * kPi / 2)) < 1e-12);
    for (auto g : {GateSpec::h(), GateSpec::j(0.3), GateSpec::cz(), GateSpec::cz_variant(),
                   GateSpec::p(), GateSpec::pinv()})
        CHECK(is_unitary(g.matrix(), 1e-14));
}

TEST_CASE("cz variant equals its defining product") {
    const CMat lhs = GateSpec::cz_variant().matrix();
    const CMat pinv = oracles::phase_gate().adjoint();
    const CMat rhs = kron(pinv, oracles::hadamard() * pinv) * oracles::cz4() *
                     kron(CMat::identity(2), oracles::hadamard());
    CHECK(max_abs_diff(lhs, rhs) < 1e-14);
}

TEST_CASE("apply_gate matches embedding oracle on random states") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        StateVector s = random_state(4, rng);
        const int q = 1 + static_cast<int>(rng() % 4);
        StateVector got = apply_gate(s, GateSpec::j(1.3), {q});
        StateVector want = oracles::embed_apply(s, GateSpec::j(1.3).matrix(), {q});
        CHECK(std::abs(overlap(got, want) - 1.0) < 1e-12);

        int q2 = 1 + static_cast<int>(rng() % 4);
        if (q2 == q) q2 = q % 4 + 1;
        got = apply_gate(s, GateSpec::cz_variant(), {q, q2});
        want = oracles::embed_apply(s, GateSpec::cz_variant().matrix(), {q, q2});
        CHECK(std::abs(overlap(got, want) - 1.0) < 1e-12);
    }
}

TEST_CASE("tensor and permute_qubits") {
    std::mt19937_64 rng(5);
    StateVector a = random_state(2, rng);
    StateVector b = random_state(1, rng);
    StateVector ab = tensor(a, b);
    CHECK(ab.num_qubits() == 3);
    // amplitude factorizes
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(std::abs(ab.amplitude(i * 2 + j) - a.amplitude(i) * b.amplitude(j)) < 1e-15);

    // moving qubit 3 to position 1 on a basis state
    StateVector s = make_basis_state(3, "001");
    const int perm[3] = {3, 1, 2};
    StateVector t = permute_qubits(s, perm);
    CHECK(std::abs(t.amplitude(0b100) - 1.0) < 1e-15);

    // permutation round trip on a random state
    StateVector r = random_state(3, rng);
    const int fwd[3] = {2, 3, 1};
    const int back[3] = {3, 1, 2};
    StateVector rt = permute_qubits(permute_qubits(r, fwd), back);
    CHECK(std::abs(overlap(r, rt) - 1.0) < 1e-14);
}

TEST_CASE("equal_up_to_global_phase") {
    std::mt19937_64 rng(9);
    StateVector s = random_state(3, rng);
    StateVector t{3, [&] {
                      auto a = s.amplitudes();
                      for (auto& c : a) c *= std::exp(cplx{0.0, 2.1});
                      return a;
                  }()};
    CHECK(equal_up_to_global_phase(s, t, 1e-12));
    StateVector u = random_state(3, rng);
    CHECK_FALSE(equal_up_to_global_phase(s, u, 1e-3));
}

TEST_CASE("random_unitary2 is unitary") {
    std::mt19937_64 rng(123);
    for (int i = 0; i < 50; ++i) CHECK(is_unitary(random_unitary2(rng), 1e-12));
}
