#pragma once

#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mqc/errors.hpp"
#include "mqc/qstate.hpp"

// Projective-measurement semantics for +/-1-eigenvalue observables.
namespace mqc {

/// Branch probabilities below this are treated as analytically zero.
inline constexpr double kProbCutoff = 1e-14;

enum class FactorKind { X, Y, Z, Planar };

struct Factor {
    FactorKind kind = FactorKind::Z;
    double theta = 0.0;  // Planar only

    CMat matrix() const;
    /// Angle of the (X,Y)-plane measurement this factor performs, if any.
    std::optional<double> planar_angle() const;
};

struct ObservableSpec {
    std::vector<Factor> factors;  // one or two

    int arity() const { return static_cast<int>(factors.size()); }
    CMat matrix() const;
    std::string token() const;

    static ObservableSpec x() { return {{{FactorKind::X, 0.0}}}; }
    static ObservableSpec y() { return {{{FactorKind::Y, 0.0}}}; }
    static ObservableSpec z() { return {{{FactorKind::Z, 0.0}}}; }
    static ObservableSpec planar(double theta) { return {{{FactorKind::Planar, wrap_angle(theta)}}}; }
    static ObservableSpec minus_y() { return planar(3 * kPi / 2); }
    static ObservableSpec zx() { return {{{FactorKind::Z, 0.0}, {FactorKind::X, 0.0}}}; }
    static ObservableSpec xz() { return {{{FactorKind::X, 0.0}, {FactorKind::Z, 0.0}}}; }
    static ObservableSpec zz() { return {{{FactorKind::Z, 0.0}, {FactorKind::Z, 0.0}}}; }
};

struct ObservableSet {
    enum class Name { S1, S2, S3, Unrestricted };
    Name name = Name::Unrestricted;

    bool contains(const ObservableSpec& obs) const;
    std::string label() const;
    static ObservableSet s1() { return {Name::S1}; }
    static ObservableSet s2() { return {Name::S2}; }
    static ObservableSet s3() { return {Name::S3}; }
    static ObservableSet unrestricted() { return {Name::Unrestricted}; }
    static ObservableSet parse(std::string_view text);
};

std::pair<CMat, CMat> eigenprojectors(const ObservableSpec& obs);

struct MeasurementOutcome {
    int value = 0;  // +1 or -1
    double probability = 0.0;
    StateVector post_state;
};

/// Supplies measurement outcomes: sampled, forced, or enumerated.
struct OutcomeSource {
    virtual ~OutcomeSource() = default;
    /// Called with the Born probability of the +1 branch; returns +1 or -1.
    virtual int next(double p_plus) = 0;
};

/// Draws outcomes from a seeded deterministic stream; one draw per measurement.
struct SampledSource final : OutcomeSource {
    explicit SampledSource(std::mt19937_64& rng) : rng(rng) {}
    std::mt19937_64& rng;
    int next(double p_plus) override;
};

/// Replays a fixed outcome sequence; throws ImpossibleBranch on a
/// zero-probability step and InputError when the sequence runs out.
struct ForcedSource final : OutcomeSource {
    explicit ForcedSource(std::vector<int> outcomes) : seq(std::move(outcomes)) {}
    std::vector<int> seq;
    std::size_t pos = 0;
    int next(double p_plus) override;
};

struct TranscriptEntry {
    ObservableSpec obs;
    std::vector<int> targets;
    int outcome = 0;
    double probability = 0.0;
};

struct OutcomeTranscript {
    std::vector<TranscriptEntry> entries;
    double joint_probability() const;
    void append(const OutcomeTranscript& other);
};

/// Correction retries exhausted; carries the transcript so far.
struct NonTerminationError : Error {
    NonTerminationError(const std::string& msg, OutcomeTranscript t)
        : Error(msg), transcript(std::move(t)) {}
    OutcomeTranscript transcript;
};

MeasurementOutcome measure_with(const StateVector& state, const ObservableSpec& obs,
                                std::span<const int> targets, OutcomeSource& source);

MeasurementOutcome measure(const StateVector& state, const ObservableSpec& obs,
                           std::span<const int> targets, std::mt19937_64& rng);

struct ForcedResult {
    double probability = 0.0;
    std::optional<StateVector> post_state;  // empty when probability ~ 0
};

ForcedResult measure_forced(const StateVector& state, const ObservableSpec& obs,
                            std::span<const int> targets, int forced);

struct Instruction {
    ObservableSpec obs;
    std::vector<int> targets;
};

struct Branch {
    std::vector<int> outcomes;
    double probability = 0.0;
    StateVector state;
};

std::vector<Branch> enumerate_branches(const StateVector& state,
                                       std::span<const Instruction> instructions,
                                       int limit = 20);

struct BranchRun {
    std::vector<int> outcomes;
    double probability = 0.0;
    bool completed = true;  // false when body raised NonTerminationError
};

/// Depth-first enumeration of every nonzero-probability outcome path of a
/// randomized procedure. `body` is run once per path against the supplied
/// source; `visit` is then called with the path's outcomes and joint
/// probability. Paths longer than `limit` raise ResourceError.
void for_each_branch(const std::function<void(OutcomeSource&)>& body,
                     const std::function<void(const BranchRun&)>& visit, int limit = 24);

}  // namespace mqc
