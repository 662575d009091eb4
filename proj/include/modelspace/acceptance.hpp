#pragma once
// Acceptance suite: nine property-based criteria covering distances, duality,
// transition, connections, Pogorelov maps, surfaces and rigidity transport.
// Every tolerance is pinned in acceptance.cpp; each criterion is a list of
// named checks and passes only when all of them hold.

#include <cstdint>
#include <string>
#include <vector>

namespace modelspace {

// One measured quantity compared against a pinned limit.
struct AcceptanceCheck {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool upper = true;  // value < limit (true) or value > limit (false)
    bool ok() const { return upper ? value < limit : value > limit; }
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<AcceptanceCheck> checks;
    double seconds = 0.0;
    std::string error;  // non-empty when the criterion threw

    bool passed() const;
    // The failing check with the largest violation, else the tightest passing one.
    const AcceptanceCheck* worst() const;
};

inline constexpr int kCriteriaCount = 9;

// Runs criterion id (1..9) with a deterministic seed.
CriterionResult run_criterion(int id, std::uint64_t seed = 0);
// Runs the given criteria (all when empty).
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {}, std::uint64_t seed = 0);

// "PASS  3  transition (1-d) ...  worst: name = value < limit  [0.12 s]"; the
// timing suffix is omitted when `timing` is false (reproducible output).
std::string format_result(const CriterionResult& r, bool timing = true);
// Multi-line listing of every check of a criterion.
std::string format_details(const CriterionResult& r);

}  // namespace modelspace
