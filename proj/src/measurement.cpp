#include "mqc/measurement.hpp"

#include <cctype>
#include <cmath>

namespace mqc {

CMat Factor::matrix() const {
    const cplx i{0.0, 1.0};
    switch (kind) {
        case FactorKind::X:
            return CMat(2, 2, {0.0, 1.0, 1.0, 0.0});
        case FactorKind::Y:
            return CMat(2, 2, {0.0, -i, i, 0.0});
        case FactorKind::Z:
            return CMat(2, 2, {1.0, 0.0, 0.0, -1.0});
        case FactorKind::Planar:
            // (cos t)X + (sin t)Y = [[0, e^{-it}], [e^{it}, 0]]
            return CMat(2, 2, {0.0, std::exp(-i * theta), std::exp(i * theta), 0.0});
    }
    throw InputError("Factor: unknown kind");
}

std::optional<double> Factor::planar_angle() const {
    switch (kind) {
        case FactorKind::X:
            return 0.0;
        case FactorKind::Y:
            return kPi / 2;
        case FactorKind::Planar:
            return wrap_angle(theta);
        case FactorKind::Z:
            return std::nullopt;
    }
    return std::nullopt;
}

CMat ObservableSpec::matrix() const {
    if (arity() == 1) return factors[0].matrix();
    if (arity() == 2) return kron(factors[0].matrix(), factors[1].matrix());
    throw InputError("ObservableSpec: arity must be 1 or 2");
}

std::string ObservableSpec::token() const {
    auto one = [](const Factor& f) -> std::string {
        switch (f.kind) {
            case FactorKind::X: return "X";
            case FactorKind::Y: return "Y";
            case FactorKind::Z: return "Z";
            case FactorKind::Planar: return "PLANAR " + std::to_string(f.theta);
        }
        return "?";
    };
    if (arity() == 1) return one(factors[0]);
    return one(factors[0]) + one(factors[1]);
}

namespace {

bool angle_close(double a, double b) {
    double d = std::abs(wrap_angle(a) - wrap_angle(b));
    if (d > kPi) d = 2 * kPi - d;
    return d <= 1e-12;
}

bool is_zx_pair(const ObservableSpec& obs) {
    if (obs.arity() != 2) return false;
    const FactorKind a = obs.factors[0].kind;
    const FactorKind b = obs.factors[1].kind;
    return (a == FactorKind::Z && b == FactorKind::X) ||
           (a == FactorKind::X && b == FactorKind::Z);
}

}  // namespace

bool ObservableSet::contains(const ObservableSpec& obs) const {
    if (name == Name::Unrestricted) return obs.arity() == 1 || obs.arity() == 2;
    if (obs.arity() == 2) return is_zx_pair(obs);
    const auto angle = obs.factors[0].planar_angle();
    if (!angle) return false;  // bare Z is in no restricted set
    switch (name) {
        case Name::S1:
            return true;
        case Name::S2:
            return angle_close(*angle, kPi / 2) || angle_close(*angle, kPi / 4);
        case Name::S3:
            return angle_close(*angle, kPi / 2);
        default:
            return true;
    }
}

std::string ObservableSet::label() const {
    switch (name) {
        case Name::S1: return "S1";
        case Name::S2: return "S2";
        case Name::S3: return "S3";
        case Name::Unrestricted: return "UNRESTRICTED";
    }
    return "?";
}

ObservableSet ObservableSet::parse(std::string_view text) {
    std::string t(text);
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "s1") return s1();
    if (t == "s2") return s2();
    if (t == "s3") return s3();
    if (t == "any" || t == "unrestricted") return unrestricted();
    throw InputError("unknown observable set: " + std::string(text));
}

std::pair<CMat, CMat> eigenprojectors(const ObservableSpec& obs) {
    const CMat m = obs.matrix();
    const CMat id = CMat::identity(m.rows());
    const cplx half{0.5, 0.0};
    return {half * (id + m), half * (id - m)};
}

int SampledSource::next(double p_plus) {
    if (p_plus >= 1.0 - kProbCutoff) return +1;
    if (p_plus <= kProbCutoff) return -1;
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return u < p_plus ? +1 : -1;
}

int ForcedSource::next(double p_plus) {
    if (pos >= seq.size()) throw InputError("ForcedSource: outcome sequence exhausted");
    const int out = seq[pos++];
    const double p = out == +1 ? p_plus : 1.0 - p_plus;
    if (p < kProbCutoff) throw ImpossibleBranch("forced outcome has zero probability");
    return out;
}

double OutcomeTranscript::joint_probability() const {
    double p = 1.0;
    for (const auto& e : entries) p *= e.probability;
    return p;
}

void OutcomeTranscript::append(const OutcomeTranscript& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

namespace {

void check_targets(const StateVector& state, const ObservableSpec& obs,
                   std::span<const int> targets) {
    if (static_cast<int>(targets.size()) != obs.arity())
        throw InputError("measure: target count does not match observable arity");
    if (obs.arity() == 2 && targets[0] == targets[1])
        throw InputError("measure: targets must be distinct");
    for (int t : targets)
        if (t < 1 || t > state.num_qubits()) throw InputError("measure: qubit out of range");
}

StateVector project(StateVector state, const CMat& proj, std::span<const int> targets) {
    if (targets.size() == 1) {
        state.apply_matrix1(proj, targets[0]);
    } else {
        state.apply_matrix2(proj, targets[0], targets[1]);
    }
    return state;
}

}  // namespace

MeasurementOutcome measure_with(const StateVector& state, const ObservableSpec& obs,
                                std::span<const int> targets, OutcomeSource& source) {
    check_targets(state, obs, targets);
    auto [p_pos, p_neg] = eigenprojectors(obs);
    StateVector plus = project(state, p_pos, targets);
    const double prob_plus = plus.norm_sq();
    const int outcome = source.next(prob_plus);
    MeasurementOutcome result;
    result.value = outcome;
    if (outcome == +1) {
        result.probability = prob_plus;
        result.post_state = std::move(plus);
    } else {
        result.probability = 1.0 - prob_plus;
        result.post_state = project(state, p_neg, targets);
    }
    result.post_state.normalize();
    return result;
}

MeasurementOutcome measure(const StateVector& state, const ObservableSpec& obs,
                           std::span<const int> targets, std::mt19937_64& rng) {
    SampledSource source(rng);
    return measure_with(state, obs, targets, source);
}

ForcedResult measure_forced(const StateVector& state, const ObservableSpec& obs,
                            std::span<const int> targets, int forced) {
    check_targets(state, obs, targets);
    auto [p_pos, p_neg] = eigenprojectors(obs);
    StateVector post = project(state, forced == +1 ? p_pos : p_neg, targets);
    ForcedResult r;
    r.probability = post.norm_sq();
    if (r.probability >= kProbCutoff) {
        post.normalize();
        r.post_state = std::move(post);
    } else {
        r.probability = 0.0;
    }
    return r;
}

namespace {

/// DFS source: replays a recorded prefix, then explores +1 before -1 at
/// every genuine branch point.
struct EnumSource final : OutcomeSource {
    struct Step {
        int outcome;
        bool branch_point;
    };
    std::vector<Step>& path;
    std::size_t pos = 0;
    double probability = 1.0;
    int limit;

    EnumSource(std::vector<Step>& p, int limit) : path(p), limit(limit) {}

    int next(double p_plus) override {
        int out;
        if (pos < path.size()) {
            out = path[pos].outcome;
        } else {
            if (static_cast<int>(pos) >= limit)
                throw ResourceError("branch enumeration limit exceeded");
            bool branch = false;
            if (p_plus >= 1.0 - kProbCutoff) {
                out = +1;
            } else if (p_plus <= kProbCutoff) {
                out = -1;
            } else {
                out = +1;
                branch = true;
            }
            path.push_back({out, branch});
        }
        probability *= out == +1 ? p_plus : 1.0 - p_plus;
        ++pos;
        return out;
    }
};

}  // namespace

void for_each_branch(const std::function<void(OutcomeSource&)>& body,
                     const std::function<void(const BranchRun&)>& visit, int limit) {
    std::vector<EnumSource::Step> path;
    while (true) {
        EnumSource source(path, limit);
        BranchRun run;
        try {
            body(source);
        } catch (const NonTerminationError&) {
            run.completed = false;
        }
        run.probability = source.probability;
        run.outcomes.reserve(path.size());
        for (const auto& s : path) run.outcomes.push_back(s.outcome);
        visit(run);
        // backtrack to the deepest unexplored branch point
        while (!path.empty() && !(path.back().branch_point && path.back().outcome == +1))
            path.pop_back();
        if (path.empty()) break;
        path.back().outcome = -1;
    }
}

std::vector<Branch> enumerate_branches(const StateVector& state,
                                       std::span<const Instruction> instructions,
                                       int limit) {
    if (static_cast<int>(instructions.size()) > limit)
        throw ResourceError("enumerate_branches: instruction count exceeds limit");
    std::vector<Branch> branches;
    StateVector final_state;
    for_each_branch(
        [&](OutcomeSource& src) {
            StateVector s = state;
            for (const auto& ins : instructions)
                s = measure_with(s, ins.obs, ins.targets, src).post_state;
            final_state = std::move(s);
        },
        [&](const BranchRun& run) {
            branches.push_back({run.outcomes, run.probability, final_state});
        },
        limit);
    return branches;
}

}  // namespace mqc
