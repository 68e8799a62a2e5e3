#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace frog {

/// Outcome scale for local survival and for infinite activation.
enum class LocalOutcome { SurvivesAS, SurvivesWP, Dies, Inconclusive };

enum class GlobalOutcome { Survives, Dies, Trivial, Inconclusive };

inline const char* to_string(LocalOutcome o) {
    switch (o) {
    case LocalOutcome::SurvivesAS: return "SurvivesAS";
    case LocalOutcome::SurvivesWP: return "SurvivesWP";
    case LocalOutcome::Dies: return "Dies";
    case LocalOutcome::Inconclusive: return "Inconclusive";
    }
    return "?";
}

inline const char* to_string(GlobalOutcome o) {
    switch (o) {
    case GlobalOutcome::Survives: return "Survives";
    case GlobalOutcome::Dies: return "Dies";
    case GlobalOutcome::Trivial: return "Trivial";
    case GlobalOutcome::Inconclusive: return "Inconclusive";
    }
    return "?";
}

inline bool survives(LocalOutcome o) { return o == LocalOutcome::SurvivesAS || o == LocalOutcome::SurvivesWP; }
inline bool survives(GlobalOutcome o) { return o == GlobalOutcome::Survives || o == GlobalOutcome::Trivial; }

/// Tags naming the result that justifies a verdict. They are data, printed in reports.
namespace cite {
inline constexpr const char* kZeroOneLaw = "Theorem 2.1(1)";
inline constexpr const char* kLeftDriftEquivalence = "Theorem 2.1(2)";
inline constexpr const char* kCorBounded = "Corollary 2.2(1)";
inline constexpr const char* kCorBelowLog = "Corollary 2.2(2)";
inline constexpr const char* kCorAboveLog = "Corollary 2.2(3)";
inline constexpr const char* kMixed = "Remark 2.3";
inline constexpr const char* kSequenceTest = "Remark 2.4";
inline constexpr const char* kFirework = "Proposition 2.5";
inline constexpr const char* kRightPowerExample = "Example 2.6";
inline constexpr const char* kBlocks = "Theorem 2.7";
inline constexpr const char* kLeftPowerExample = "Example 2.8";
inline constexpr const char* kStaircaseExample = "Example 2.9";
inline constexpr const char* kGenerationChain = "Proposition 2.10";
inline constexpr const char* kSlowStaircaseExample = "Example 2.11";
inline constexpr const char* kImmortalGlobal = "immortal particles survive globally";
inline constexpr const char* kRightDriftActivation = "a right-drift particle activates every site to its right";
inline constexpr const char* kCriticalSite = "recurrent immortal particle";
inline constexpr const char* kFiniteOccupation = "finitely many particles";
inline constexpr const char* kSomeImmortal = "some particle is immortal";
inline constexpr const char* kMonotoneCoupling = "monotone coupling in p_n";
inline constexpr const char* kGlobalExtinction = "Proposition 3.2";
inline constexpr const char* kGlobalSurvival = "Theorem 3.3";
inline constexpr const char* kLocalExtinction = "Theorem 3.4";
inline constexpr const char* kLocalExtinction1 = "Theorem 3.4(1)";
inline constexpr const char* kLocalExtinction2 = "Theorem 3.4(2)";
inline constexpr const char* kLocalExtinction3 = "Theorem 3.4(3)";
inline constexpr const char* kLocalSurvival1 = "Theorem 3.5(1)";
inline constexpr const char* kLocalSurvival2 = "Theorem 3.5(2)";
inline constexpr const char* kLocalSurvival3 = "Theorem 3.5(3)";
inline constexpr const char* kPowerPhase = "Corollary 3.6";
inline constexpr const char* kPowerPhaseLeft = "Corollary 3.6(1)";
inline constexpr const char* kPowerPhaseRight = "Corollary 3.6(2)";
inline constexpr const char* kEnvironment1 = "Theorem 4.1(1)";
inline constexpr const char* kEnvironment2 = "Theorem 4.1(2)";
inline constexpr const char* kEnvironment3 = "Theorem 4.1(3)";
} // namespace cite

/// Classifier outcome with the results that justify it.
struct Verdict {
    LocalOutcome local = LocalOutcome::Inconclusive;
    GlobalOutcome global = GlobalOutcome::Inconclusive;
    LocalOutcome infinite_activation = LocalOutcome::Inconclusive;
    std::vector<std::string> citations;
    std::map<std::string, double> diagnostics;
    std::vector<std::string> notes;

    void cite(const std::string& tag) {
        for (const auto& c : citations)
            if (c == tag) return;
        citations.push_back(tag);
    }
    bool cites(const std::string& tag) const {
        for (const auto& c : citations)
            if (c == tag) return true;
        return false;
    }
    bool decisive() const { return local != LocalOutcome::Inconclusive; }

    /// local survival implies global survival and positive-probability activation; citations present when decided.
    bool consistent() const {
        if (survives(local)) {
            if (!survives(global)) return false;
            if (!survives(infinite_activation)) return false;
        }
        const bool decided = local != LocalOutcome::Inconclusive || global != GlobalOutcome::Inconclusive ||
                             infinite_activation != LocalOutcome::Inconclusive;
        return !decided || !citations.empty();
    }
};

inline constexpr const char* kVerdictSchema = "frog-verdict/1";

inline nlohmann::json to_json(const Verdict& v) {
    nlohmann::json j;
    j["schema"] = kVerdictSchema;
    j["local"] = to_string(v.local);
    j["global"] = to_string(v.global);
    j["infinite_activation"] = to_string(v.infinite_activation);
    j["citations"] = v.citations;
    j["diagnostics"] = v.diagnostics;
    j["notes"] = v.notes;
    return j;
}

/// One-line human summary, e.g. "local SurvivesAS, per Theorem 2.1(1)/Example 2.6".
inline std::string summary(const Verdict& v) {
    std::string out = "local " + std::string(to_string(v.local)) + ", global " + to_string(v.global) +
                      ", infinite activation " + to_string(v.infinite_activation);
    if (!v.citations.empty()) {
        out += ", per ";
        for (std::size_t i = 0; i < v.citations.size(); ++i) out += (i ? "/" : "") + v.citations[i];
    }
    return out;
}

} // namespace frog
