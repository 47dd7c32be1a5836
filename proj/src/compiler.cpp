#include "mqc/compiler.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace mqc {
namespace {

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream is{std::string(line)};
    std::string tok;
    while (is >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

double parse_real(const std::string& tok, int line_no) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + tok + "'", line_no);
    }
}

int parse_int(const std::string& tok, int line_no) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + tok + "'", line_no);
    }
}

std::string fmt_real(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

CMat CircuitIR::unitary() const {
    const std::size_t dim = std::size_t{1} << num_qubits;
    CMat u(static_cast<int>(dim), static_cast<int>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        std::vector<cplx> amp(dim);
        amp[col] = 1.0;
        StateVector s = apply_to(StateVector(num_qubits, std::move(amp)));
        for (std::size_t row = 0; row < dim; ++row)
            u(static_cast<int>(row), static_cast<int>(col)) = s.amplitude(row);
    }
    return u;
}

StateVector CircuitIR::apply_to(StateVector state) const {
    if (state.num_qubits() != num_qubits) throw InputError("CircuitIR: state dimension mismatch");
    for (const auto& g : gates) state = apply_gate(std::move(state), g.gate, g.targets);
    return state;
}

CircuitIR CircuitIR::parse(std::string_view text) {
    CircuitIR circ;
    bool have_header = false;
    std::istringstream is{std::string(text)};
    std::string line;
    int line_no = 0;
    auto check_qubit = [&](int q) {
        if (q < 1 || q > circ.num_qubits) throw ParseError("qubit out of range", line_no);
        return q;
    };
    while (std::getline(is, line)) {
        ++line_no;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        if (!have_header) {
            if (tok[0] != "qubits" || tok.size() != 2)
                throw ParseError("expected 'qubits N' header", line_no);
            circ.num_qubits = parse_int(tok[1], line_no);
            if (circ.num_qubits < 1 || circ.num_qubits > 24)
                throw ParseError("qubit count out of range", line_no);
            have_header = true;
            continue;
        }
        if (tok[0] == "J" && tok.size() == 3) {
            circ.gates.push_back({GateSpec::j(parse_real(tok[2], line_no)),
                                  {check_qubit(parse_int(tok[1], line_no))}});
        } else if (tok[0] == "H" && tok.size() == 2) {
            circ.gates.push_back({GateSpec::h(), {check_qubit(parse_int(tok[1], line_no))}});
        } else if (tok[0] == "CZ" && tok.size() == 3) {
            int a = check_qubit(parse_int(tok[1], line_no));
            int b = check_qubit(parse_int(tok[2], line_no));
            if (a == b) throw ParseError("CZ targets must be distinct", line_no);
            circ.gates.push_back({GateSpec::cz(), {a, b}});
        } else if (tok[0] == "UCZ" && tok.size() == 3) {
            int a = check_qubit(parse_int(tok[1], line_no));
            int b = check_qubit(parse_int(tok[2], line_no));
            if (a == b) throw ParseError("UCZ targets must be distinct", line_no);
            circ.gates.push_back({GateSpec::cz_variant(), {a, b}});
        } else if (tok[0] == "U1" && tok.size() == 10) {
            int q = check_qubit(parse_int(tok[1], line_no));
            double r[8];
            for (int i = 0; i < 8; ++i) r[i] = parse_real(tok[2 + i], line_no);
            CMat m(2, 2, {cplx{r[0], r[1]}, cplx{r[2], r[3]}, cplx{r[4], r[5]}, cplx{r[6], r[7]}});
            if (!is_unitary(m, 1e-10)) throw ParseError("U1 matrix is not unitary", line_no);
            circ.gates.push_back({GateSpec::custom1q(std::move(m)), {q}});
        } else {
            throw ParseError("unrecognized gate line '" + tok[0] + "'", line_no);
        }
    }
    if (!have_header) throw ParseError("empty circuit file", 0);
    return circ;
}

CMat JDecomposition::reconstruct() const {
    const cplx i{0.0, 1.0};
    return std::exp(i * phi) * (GateSpec::j(0).matrix() * GateSpec::j(alpha).matrix() *
                                GateSpec::j(beta).matrix() * GateSpec::j(gamma).matrix());
}

JDecomposition decompose_1q(const CMat& u) {
    if (u.rows() != 2 || u.cols() != 2) throw InputError("decompose_1q: matrix must be 2x2");
    if (!is_unitary(u, 1e-10)) throw InputError("decompose_1q: matrix is not unitary");
    // J(0)J(a)J(b)J(g) = Z(a) H Z(b) H Z(g)
    //                  = e^{i b/2} [[cos(b/2), -i sin(b/2) e^{i g}],
    //                               [-i sin(b/2) e^{i a}, cos(b/2) e^{i(a+g)}]]
    JDecomposition d;
    const double c = std::abs(u(0, 0));
    const double s = std::abs(u(0, 1));
    constexpr double eps = 1e-9;
    if (s <= eps) {  // diagonal: beta = 0, fold gamma into alpha
        d.beta = 0.0;
        d.gamma = 0.0;
        d.phi = std::arg(u(0, 0));
        d.alpha = wrap_angle(std::arg(u(1, 1)) - d.phi);
    } else if (c <= eps) {  // antidiagonal: beta = pi, fold gamma into alpha
        d.beta = kPi;
        d.gamma = 0.0;
        d.phi = wrap_angle(std::arg(u(0, 1)));
        d.alpha = wrap_angle(std::arg(u(1, 0)) - d.phi);
    } else {
        d.beta = 2.0 * std::atan2(s, c);
        const double psi = std::arg(u(0, 0));  // phi + beta/2
        d.phi = wrap_angle(psi - d.beta / 2.0);
        d.alpha = wrap_angle(std::arg(u(1, 0)) - psi + kPi / 2.0);
        d.gamma = wrap_angle(std::arg(u(0, 1)) - psi + kPi / 2.0);
    }
    d.phi = wrap_angle(d.phi);
    return d;
}

bool MeasurementProgram::audit_mode() const {
    for (const auto& s : steps)
        if (s.kind == ProgramStep::Kind::Measure && !mode.contains(s.obs)) return false;
    return true;
}

int MeasurementProgram::measure_count() const {
    int n = 0;
    for (const auto& s : steps)
        if (s.kind == ProgramStep::Kind::Measure) ++n;
    return n;
}

std::string MeasurementProgram::to_text() const {
    std::ostringstream os;
    os << "physical " << num_physical << "\n";
    os << "mode " << mode.label() << "\n";
    for (const auto& s : steps) {
        switch (s.kind) {
            case ProgramStep::Kind::Measure: {
                os << "M ";
                if (s.obs.arity() == 2) {
                    os << "ZX";
                } else if (s.obs.factors[0].kind == FactorKind::Y) {
                    os << "Y";
                } else {
                    os << "PLANAR " << fmt_real(s.obs.factors[0].planar_angle().value());
                }
                for (int t : s.targets) os << " " << t;
                os << "\n";
                break;
            }
            case ProgramStep::Kind::Correction:
                os << "CORR " << s.pauli << " " << s.logical << " " << s.max_rounds << "\n";
                break;
            case ProgramStep::Kind::Relocation:
                os << "RELOC " << s.logical << " " << s.physical << "\n";
                break;
        }
    }
    return os.str();
}

MeasurementProgram MeasurementProgram::parse(std::string_view text) {
    MeasurementProgram prog;
    std::istringstream is{std::string(text)};
    std::string line;
    int line_no = 0;
    bool have_physical = false, have_mode = false;
    while (std::getline(is, line)) {
        ++line_no;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        if (!have_physical) {
            if (tok[0] != "physical" || tok.size() != 2)
                throw ParseError("expected 'physical N' header", line_no);
            prog.num_physical = parse_int(tok[1], line_no);
            if (prog.num_physical < 2) throw ParseError("need at least two physical qubits", line_no);
            have_physical = true;
            continue;
        }
        if (!have_mode) {
            if (tok[0] != "mode" || tok.size() != 2)
                throw ParseError("expected 'mode ...' header", line_no);
            prog.mode = ObservableSet::parse(tok[1]);
            have_mode = true;
            continue;
        }
        ProgramStep step;
        if (tok[0] == "M") {
            step.kind = ProgramStep::Kind::Measure;
            std::size_t first_target;
            if (tok.size() >= 2 && tok[1] == "Y") {
                step.obs = ObservableSpec::y();
                first_target = 2;
            } else if (tok.size() >= 3 && tok[1] == "PLANAR") {
                step.obs = ObservableSpec::planar(parse_real(tok[2], line_no));
                first_target = 3;
            } else if (tok.size() >= 2 && tok[1] == "ZX") {
                step.obs = ObservableSpec::zx();
                first_target = 2;
            } else {
                throw ParseError("bad measurement line", line_no);
            }
            for (std::size_t i = first_target; i < tok.size(); ++i)
                step.targets.push_back(parse_int(tok[i], line_no));
            if (static_cast<int>(step.targets.size()) != step.obs.arity())
                throw ParseError("target count does not match observable arity", line_no);
            for (int t : step.targets)
                if (t < 1 || t > prog.num_physical)
                    throw ParseError("physical qubit out of range", line_no);
        } else if (tok[0] == "CORR" && tok.size() == 4) {
            step.kind = ProgramStep::Kind::Correction;
            if (tok[1].size() != 1 || (tok[1][0] != 'X' && tok[1][0] != 'Y' && tok[1][0] != 'Z'))
                throw ParseError("correction pauli must be X, Y or Z", line_no);
            step.pauli = tok[1][0];
            step.logical = parse_int(tok[2], line_no);
            step.max_rounds = parse_int(tok[3], line_no);
        } else if (tok[0] == "RELOC" && tok.size() == 3) {
            step.kind = ProgramStep::Kind::Relocation;
            step.logical = parse_int(tok[1], line_no);
            step.physical = parse_int(tok[2], line_no);
        } else {
            throw ParseError("unrecognized program line '" + tok[0] + "'", line_no);
        }
        prog.steps.push_back(std::move(step));
    }
    if (!have_physical || !have_mode) throw ParseError("missing program header", 0);
    return prog;
}

namespace {

struct Emitter {
    MeasurementProgram prog;
    std::vector<int> phys;  // [logical-1] -> physical
    int free_slot;
    ObservableSet mode;
    int max_rounds;

    Emitter(int num_logical, ObservableSet mode, int max_rounds)
        : free_slot(num_logical + 1), mode(mode), max_rounds(max_rounds) {
        prog.num_physical = num_logical + 1;
        prog.mode = mode;
        for (int i = 1; i <= num_logical; ++i) phys.push_back(i);
    }

    void measure(ObservableSpec obs, std::vector<int> targets) {
        ProgramStep s;
        s.kind = ProgramStep::Kind::Measure;
        s.obs = std::move(obs);
        s.targets = std::move(targets);
        prog.steps.push_back(std::move(s));
    }

    void corr(char pauli, int logical) {
        ProgramStep s;
        s.kind = ProgramStep::Kind::Correction;
        s.pauli = pauli;
        s.logical = logical;
        s.max_rounds = max_rounds;
        prog.steps.push_back(s);
    }

    void sim_j_gate(double theta, int logical, const std::string& gate_label) {
        const ObservableSpec planar = ObservableSpec::planar(kPi / 2 - theta);
        if (!mode.contains(planar))
            throw LegalityError("gate " + gate_label + " needs observable " + planar.token() +
                                ", which is not in " + mode.label());
        const int p = phys[logical - 1];
        const int f = free_slot;
        measure(ObservableSpec::y(), {f});
        measure(ObservableSpec::zx(), {p, f});
        measure(planar, {p});
        ProgramStep reloc;
        reloc.kind = ProgramStep::Kind::Relocation;
        reloc.logical = logical;
        reloc.physical = f;
        prog.steps.push_back(reloc);
        corr('Z', logical);
        corr('X', logical);
        phys[logical - 1] = f;
        free_slot = p;
    }

    void cz_variant_gate(int l1, int l2) {
        const int p1 = phys[l1 - 1], p2 = phys[l2 - 1], f = free_slot;
        measure(ObservableSpec::y(), {f});
        measure(ObservableSpec::zx(), {p1, f});
        measure(ObservableSpec::zx(), {f, p2});
        measure(ObservableSpec::y(), {f});
        corr('Z', l1);
        corr('X', l2);
    }
};

}  // namespace

MeasurementProgram compile(const CircuitIR& circuit, ObservableSet mode,
                           const CompileOptions& opts) {
    if (circuit.num_qubits < 1) throw InputError("compile: circuit has no qubits");
    Emitter em(circuit.num_qubits, mode, opts.max_rounds);
    for (const auto& g : circuit.gates) {
        const std::string label = g.gate.name();
        switch (g.gate.kind) {
            case GateSpec::Kind::Identity:
                break;
            case GateSpec::Kind::H:
                em.sim_j_gate(0.0, g.targets[0], label);
                break;
            case GateSpec::Kind::J:
                em.sim_j_gate(g.gate.theta, g.targets[0], label);
                break;
            case GateSpec::Kind::Zrot:
                em.sim_j_gate(g.gate.theta, g.targets[0], label);
                em.sim_j_gate(0.0, g.targets[0], label);
                break;
            case GateSpec::Kind::P:
                em.sim_j_gate(kPi / 2, g.targets[0], label);
                em.sim_j_gate(0.0, g.targets[0], label);
                break;
            case GateSpec::Kind::Pinv:
                em.sim_j_gate(3 * kPi / 2, g.targets[0], label);
                em.sim_j_gate(0.0, g.targets[0], label);
                break;
            case GateSpec::Kind::PauliX:
                em.sim_j_gate(0.0, g.targets[0], label);
                em.sim_j_gate(kPi, g.targets[0], label);
                break;
            case GateSpec::Kind::PauliZ:
                em.sim_j_gate(kPi, g.targets[0], label);
                em.sim_j_gate(0.0, g.targets[0], label);
                break;
            case GateSpec::Kind::PauliY:
                for (double t : {0.0, kPi, kPi, 0.0}) em.sim_j_gate(t, g.targets[0], label);
                break;
            case GateSpec::Kind::Custom1Q: {
                const JDecomposition d = decompose_1q(g.gate.matrix());
                for (double t : d.j_angles_applied()) em.sim_j_gate(t, g.targets[0], label);
                break;
            }
            case GateSpec::Kind::CzVariant:
                em.cz_variant_gate(g.targets[0], g.targets[1]);
                break;
            case GateSpec::Kind::CZ: {
                // CZ = (P (x) P) (P^-1 (x) P^-1) CZ, and
                // (P^-1 (x) P^-1) CZ = (I (x) H) U (I (x) H) with U the
                // cz-variant. P restoration needs J(pi/2), S1 only.
                em.sim_j_gate(0.0, g.targets[1], label);
                em.cz_variant_gate(g.targets[0], g.targets[1]);
                em.sim_j_gate(0.0, g.targets[1], label);
                for (int t : g.targets) {
                    em.sim_j_gate(kPi / 2, t, label);
                    em.sim_j_gate(0.0, t, label);
                }
                break;
            }
        }
    }
    return em.prog;
}

namespace {

bool is_y_on(const ProgramStep& s, int q) {
    return s.kind == ProgramStep::Kind::Measure && s.obs.arity() == 1 &&
           s.obs.factors[0].kind == FactorKind::Y && s.targets[0] == q;
}

bool is_zx(const ProgramStep& s) {
    return s.kind == ProgramStep::Kind::Measure && s.obs.arity() == 2;
}

bool is_planar(const ProgramStep& s) {
    return s.kind == ProgramStep::Kind::Measure && s.obs.arity() == 1 &&
           s.obs.factors[0].planar_angle().has_value();
}

}  // namespace

ExecutionResult execute(const MeasurementProgram& program, const StateVector& input,
                        OutcomeSource& source) {
    const int n = program.num_logical();
    if (input.num_qubits() != n) throw InputError("execute: input qubit count mismatch");
    ExecutionResult res;
    res.state = tensor(input, make_basis_state(1, "0"));
    for (int i = 1; i <= n; ++i) res.logical_to_phys.push_back(i);
    res.free_phys = n + 1;
    std::map<int, PauliMask> pending;  // logical -> uncorrected byproduct
    auto logical_at = [&](int phys) {
        for (int l = 1; l <= n; ++l)
            if (res.logical_to_phys[l - 1] == phys) return l;
        throw InputError("execute: no logical qubit at physical slot " + std::to_string(phys));
    };

    const auto& steps = program.steps;
    std::size_t i = 0;
    try {
        while (i < steps.size()) {
            const ProgramStep& s = steps[i];
            if (s.kind == ProgramStep::Kind::Relocation) {
                const int old = res.logical_to_phys[s.logical - 1];
                res.logical_to_phys[s.logical - 1] = s.physical;
                res.free_phys = old;
                ++i;
                continue;
            }
            if (s.kind == ProgramStep::Kind::Correction) {
                PauliMask& mask = pending[s.logical];
                const bool needed = s.pauli == 'Z' ? mask.z : s.pauli == 'X' ? mask.x : (mask.x && mask.z);
                if (needed) {
                    ApplyPauliResult r =
                        apply_pauli(std::move(res.state), s.pauli, res.logical_to_phys[s.logical - 1],
                                    res.free_phys, source, s.max_rounds);
                    res.state = std::move(r.state);
                    res.transcript.append(r.transcript);
                    if (s.pauli == 'Z' || s.pauli == 'Y') mask.z = false;
                    if (s.pauli == 'X' || s.pauli == 'Y') mask.x = false;
                }
                ++i;
                continue;
            }
            // Measure: recognize the canonical simulation-step groups so
            // byproducts can be tracked for the following correction blocks.
            const int anc = s.targets.back();
            if (is_y_on(s, anc) && i + 2 < steps.size() && is_zx(steps[i + 1]) &&
                steps[i + 1].targets[1] == anc) {
                if (i + 3 < steps.size() && is_zx(steps[i + 2]) && steps[i + 2].targets[0] == anc &&
                    is_y_on(steps[i + 3], anc)) {
                    // cz-variant group
                    const int p1 = steps[i + 1].targets[0];
                    const int p2 = steps[i + 2].targets[1];
                    SimCzResult r = sim_cz_variant(std::move(res.state), p1, p2, anc, source);
                    res.state = std::move(r.state);
                    res.transcript.append(r.transcript);
                    const int l1 = logical_at(p1), l2 = logical_at(p2);
                    res.byproduct_labels.push_back(r.byproduct.on(p1).label() + "." +
                                                   r.byproduct.on(p2).label());
                    pending[l1].z = pending[l1].z != r.byproduct.on(p1).z;
                    pending[l2].x = pending[l2].x != r.byproduct.on(p2).x;
                    i += 4;
                    continue;
                }
                if (is_planar(steps[i + 2]) && steps[i + 2].targets[0] == steps[i + 1].targets[0]) {
                    // sim_j group
                    const int p = steps[i + 1].targets[0];
                    const double theta =
                        wrap_angle(kPi / 2 - steps[i + 2].obs.factors[0].planar_angle().value());
                    SimJResult r = sim_j(std::move(res.state), theta, p, anc, source);
                    res.state = std::move(r.state);
                    res.transcript.append(r.transcript);
                    const int l = logical_at(p);
                    const PauliMask b = r.byproduct.on(anc);
                    res.byproduct_labels.push_back(b.label());
                    pending[l].z = pending[l].z != b.z;
                    pending[l].x = pending[l].x != b.x;
                    i += 3;
                    continue;
                }
            }
            // Plain measurement outside any recognized group.
            MeasurementOutcome out = measure_with(res.state, s.obs, s.targets, source);
            res.transcript.entries.push_back({s.obs, s.targets, out.value, out.probability});
            res.state = std::move(out.post_state);
            ++i;
        }
    } catch (NonTerminationError& e) {
        OutcomeTranscript full = res.transcript;
        full.append(e.transcript);
        throw NonTerminationError(e.what(), std::move(full));
    }
    return res;
}

ExecutionResult execute(const MeasurementProgram& program, const StateVector& input,
                        std::mt19937_64& rng) {
    SampledSource source(rng);
    return execute(program, input, source);
}

double logical_fidelity(const ExecutionResult& result, const StateVector& oracle) {
    const int n = oracle.num_qubits();
    if (result.state.num_qubits() != n + 1) throw InputError("logical_fidelity: dimension mismatch");
    std::vector<int> perm = result.logical_to_phys;
    perm.push_back(result.free_phys);
    const StateVector ordered = permute_qubits(result.state, perm);
    double fid_sq = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < oracle.dim(); ++i)
            acc += std::conj(oracle.amplitude(i)) * ordered.amplitude(2 * i + j);
        fid_sq += std::norm(acc);
    }
    return std::sqrt(fid_sq);
}

VerifyReport verify_program(const CircuitIR& circuit, ObservableSet mode, int trials,
                            std::uint64_t seed) {
    VerifyReport report;
    const MeasurementProgram program = compile(circuit, mode);
    report.mode_ok = program.audit_mode();
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        const StateVector input = random_state(circuit.num_qubits, rng);
        ExecutionResult exec = execute(program, input, rng);
        const double fid = logical_fidelity(exec, circuit.apply_to(input));
        report.min_fidelity = std::min(report.min_fidelity, fid);
        for (const auto& e : exec.transcript.entries)
            if (!mode.contains(e.obs)) report.mode_ok = false;
        for (const auto& label : exec.byproduct_labels) {
            ++report.byproduct_counts[label];
            ++report.byproduct_total;
        }
        ++report.trials;
    }
    return report;
}

}  // namespace mqc
