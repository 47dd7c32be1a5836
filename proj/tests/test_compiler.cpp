#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqc/compiler.hpp"
#include "oracles.hpp"

using namespace mqc;

TEST_CASE("circuit parsing") {
    const char* text =
        "qubits 2\n"
        "# a comment\n"
        "H 1\n"
        "J 2 0.75\n"
        "CZ 1 2\n"
        "UCZ 2 1\n";
    CircuitIR c = CircuitIR::parse(text);
    CHECK(c.num_qubits == 2);
    REQUIRE(c.gates.size() == 4);
    CHECK(c.gates[0].gate.kind == GateSpec::Kind::H);
    CHECK(c.gates[1].gate.theta == doctest::Approx(0.75));
    CHECK(c.gates[2].gate.kind == GateSpec::Kind::CZ);
    CHECK(c.gates[3].gate.kind == GateSpec::Kind::CzVariant);

    CHECK_THROWS_AS(CircuitIR::parse(""), ParseError);
    CHECK_THROWS_AS(CircuitIR::parse("qubits 1\nH 2\n"), ParseError);
    CHECK_THROWS_AS(CircuitIR::parse("qubits 2\nCZ 1 1\n"), ParseError);
    CHECK_THROWS_AS(CircuitIR::parse("qubits 1\nFOO 1\n"), ParseError);
    CHECK_THROWS_AS(CircuitIR::parse("qubits 1\nJ 1 abc\n"), ParseError);
    // non-unitary U1
    CHECK_THROWS_AS(CircuitIR::parse("qubits 1\nU1 1 1 0 0 0 0 0 2 0\n"), ParseError);
    try {
        CircuitIR::parse("qubits 2\nH 1\nH 3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("circuit unitary matches dense composition") {
    CircuitIR c = CircuitIR::parse("qubits 2\nH 1\nCZ 1 2\nJ 2 0.4\n");
    const CMat want = kron(CMat::identity(2), oracles::hadamard() * oracles::zrot(0.4)) *
                      oracles::cz4() * kron(oracles::hadamard(), CMat::identity(2));
    CHECK(max_abs_diff(c.unitary(), want) < 1e-13);
}

TEST_CASE("decompose_1q reconstructs random unitaries") {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const CMat u = random_unitary2(rng);
        const JDecomposition d = decompose_1q(u);
        worst = std::max(worst, max_abs_diff(d.reconstruct(), u));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("decompose_1q on structured gates") {
    // diagonal: beta = 0 and the rotation folds into alpha
    JDecomposition d = decompose_1q(oracles::zrot(kPi / 4));
    CHECK(d.beta == doctest::Approx(0.0));
    CHECK(d.gamma == doctest::Approx(0.0));
    CHECK(d.alpha == doctest::Approx(kPi / 4));
    CHECK(d.phi == doctest::Approx(0.0));

    d = decompose_1q(CMat::identity(2));
    CHECK(d.alpha == doctest::Approx(0.0));
    CHECK(d.beta == doctest::Approx(0.0));

    // antidiagonal: beta = pi
    d = decompose_1q(oracles::pauli_x());
    CHECK(d.beta == doctest::Approx(kPi));
    CHECK(max_abs_diff(d.reconstruct(), oracles::pauli_x()) < 1e-12);

    d = decompose_1q(oracles::hadamard());
    CHECK(max_abs_diff(d.reconstruct(), oracles::hadamard()) < 1e-12);

    CHECK_THROWS_AS(decompose_1q(CMat(3, 3)), InputError);
    CMat bad(2, 2, {1.0, 0.0, 0.0, 2.0});
    CHECK_THROWS_AS(decompose_1q(bad), InputError);
}

TEST_CASE("compile legality per observable set") {
    const CircuitIR j_generic = CircuitIR::parse("qubits 1\nJ 1 0.3\n");
    const CircuitIR j_quarter = CircuitIR::parse("qubits 1\nJ 1 0.7853981633974483\n");
    const CircuitIR h_only = CircuitIR::parse("qubits 1\nH 1\n");
    const CircuitIR cz = CircuitIR::parse("qubits 2\nCZ 1 2\n");
    const CircuitIR ucz = CircuitIR::parse("qubits 2\nUCZ 1 2\n");

    CHECK_NOTHROW(compile(j_generic, ObservableSet::s1()));
    CHECK_THROWS_AS(compile(j_generic, ObservableSet::s2()), LegalityError);
    CHECK_THROWS_AS(compile(j_generic, ObservableSet::s3()), LegalityError);

    CHECK_NOTHROW(compile(j_quarter, ObservableSet::s2()));
    CHECK_THROWS_AS(compile(j_quarter, ObservableSet::s3()), LegalityError);

    CHECK_NOTHROW(compile(h_only, ObservableSet::s3()));
    CHECK_NOTHROW(compile(ucz, ObservableSet::s3()));

    CHECK_NOTHROW(compile(cz, ObservableSet::s1()));
    // restoring the phase gates after CZ needs an X measurement
    CHECK_THROWS_AS(compile(cz, ObservableSet::s2()), LegalityError);

    // the error names the offending gate
    try {
        compile(j_generic, ObservableSet::s3());
        FAIL("expected LegalityError");
    } catch (const LegalityError& e) {
        CHECK(std::string(e.what()).find("J(") != std::string::npos);
    }
}

TEST_CASE("compiled programs pass their own mode audit") {
    const CircuitIR c = CircuitIR::parse("qubits 2\nH 1\nJ 2 0.7853981633974483\nUCZ 1 2\n");
    for (auto mode : {ObservableSet::s1(), ObservableSet::s2()}) {
        MeasurementProgram p = compile(c, mode);
        CHECK(p.audit_mode());
        CHECK(p.num_physical == 3);
        CHECK(p.measure_count() == 10);  // 3 + 3 + 4
    }
}

TEST_CASE("program text round trip") {
    const CircuitIR c = CircuitIR::parse("qubits 2\nJ 1 0.31\nCZ 1 2\n");
    MeasurementProgram p = compile(c, ObservableSet::s1());
    const std::string text = p.to_text();
    MeasurementProgram q = MeasurementProgram::parse(text);
    CHECK(q.to_text() == text);
    CHECK(q.num_physical == p.num_physical);
    CHECK(q.steps.size() == p.steps.size());
    CHECK(q.measure_count() == p.measure_count());

    CHECK_THROWS_AS(MeasurementProgram::parse("physical 3\n"), ParseError);
    CHECK_THROWS_AS(MeasurementProgram::parse("physical 3\nmode S1\nM ZX 1 9\n"), ParseError);
    CHECK_THROWS_AS(MeasurementProgram::parse("physical 3\nmode S1\nM Y 1 2\n"), ParseError);
    CHECK_THROWS_AS(MeasurementProgram::parse("physical 3\nmode S1\nCORR Q 1 4\n"), ParseError);
}

TEST_CASE("execution tracks relocation and reaches unit fidelity") {
    const CircuitIR c = CircuitIR::parse("qubits 2\nJ 1 0.5\n");
    MeasurementProgram p = compile(c, ObservableSet::s1());
    std::mt19937_64 rng(6);
    const StateVector input = random_state(2, rng);
    ExecutionResult r = execute(p, input, rng);
    // qubit 1 relocated into the old ancilla slot
    CHECK(r.logical_to_phys == std::vector<int>{3, 2});
    CHECK(r.free_phys == 1);
    CHECK(logical_fidelity(r, c.apply_to(input)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.byproduct_labels.size() == 1);
}

TEST_CASE("execution is deterministic per seed") {
    const CircuitIR c = CircuitIR::parse("qubits 2\nH 1\nCZ 1 2\nJ 2 1.1\n");
    MeasurementProgram p = compile(c, ObservableSet::s1());
    auto outcomes = [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        const StateVector input = random_state(2, rng);
        ExecutionResult r = execute(p, input, rng);
        std::vector<int> out;
        for (const auto& e : r.transcript.entries) out.push_back(e.outcome);
        return out;
    };
    CHECK(outcomes(99) == outcomes(99));
    CHECK(outcomes(99) != outcomes(100));
}

TEST_CASE("verify_program across gate inventory and modes") {
    struct Case {
        const char* text;
        ObservableSet mode;
    } cases[] = {
        {"qubits 1\nH 1\n", ObservableSet::s3()},
        {"qubits 1\nJ 1 0.7853981633974483\nH 1\n", ObservableSet::s2()},
        {"qubits 2\nH 1\nCZ 1 2\nJ 2 2.2\n", ObservableSet::s1()},
        {"qubits 2\nUCZ 1 2\nH 2\n", ObservableSet::s3()},
        {"qubits 1\nU1 1 0.8253356149096783 0 0 -0.5646424733950354 "
         "0.5646424733950354 0 0 0.8253356149096783\n",
         ObservableSet::s1()},
    };
    for (const auto& cs : cases) {
        const CircuitIR c = CircuitIR::parse(cs.text);
        VerifyReport rep = verify_program(c, cs.mode, 25, 1234);
        CHECK(rep.trials == 25);
        CHECK(rep.mode_ok);
        CHECK(rep.min_fidelity >= 1.0 - 1e-9);
        CHECK(rep.byproduct_total > 0);
    }
}

TEST_CASE("exhaustive branches of a single-gate program with bounded retries") {
    // With max_rounds = 2 the branch tree is finite: every completed branch
    // must output the exact gate action, and total probability mass is 1.
    const CircuitIR c = CircuitIR::parse("qubits 1\nJ 1 1.234\n");
    CompileOptions opts;
    opts.max_rounds = 2;
    MeasurementProgram p = compile(c, ObservableSet::s1(), opts);
    std::mt19937_64 rng(17);
    const StateVector input = random_state(1, rng);
    const StateVector want = c.apply_to(input);
    double total = 0.0, completed_mass = 0.0;
    int completed = 0, truncated = 0;
    for_each_branch(
        [&](OutcomeSource& src) {
            ExecutionResult r = execute(p, input, src);
            CHECK(logical_fidelity(r, want) >= 1.0 - 1e-9);
        },
        [&](const BranchRun& run) {
            total += run.probability;
            if (run.completed) {
                ++completed;
                completed_mass += run.probability;
            } else {
                ++truncated;
            }
        },
        40);
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(completed > 0);
    CHECK(truncated > 0);  // the all-failure correction paths
    // each needed correction fails outright with probability 1/4
    CHECK(completed_mass > 0.5);
}

TEST_CASE("exhaustive branches of a single cz-variant program") {
    const CircuitIR c = CircuitIR::parse("qubits 2\nUCZ 1 2\n");
    CompileOptions opts;
    opts.max_rounds = 2;
    MeasurementProgram p = compile(c, ObservableSet::s3(), opts);
    std::mt19937_64 rng(18);
    const StateVector input = random_state(2, rng);
    const StateVector want = c.apply_to(input);
    double total = 0.0;
    for_each_branch(
        [&](OutcomeSource& src) {
            ExecutionResult r = execute(p, input, src);
            CHECK(logical_fidelity(r, want) >= 1.0 - 1e-9);
        },
        [&](const BranchRun& run) { total += run.probability; }, 40);
    CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("non-termination carries the full transcript") {
    const CircuitIR c = CircuitIR::parse("qubits 1\nJ 1 0.4\n");
    CompileOptions opts;
    opts.max_rounds = 1;
    MeasurementProgram p = compile(c, ObservableSet::s1(), opts);
    const StateVector input = plus_theta_state(0.2);
    // choose sim outcomes that need a Z correction (s2 = -1), then fail it
    std::vector<int> seq = {+1, -1, +1, +1, +1, +1};
    ForcedSource src(seq);
    try {
        (void)execute(p, input, src);
        // the chosen branch might not need the correction on this input;
        // but with s2 = -1 the z byproduct is always set, so:
        FAIL("expected NonTerminationError");
    } catch (const NonTerminationError& e) {
        CHECK(e.transcript.entries.size() == 6);
    }
}
