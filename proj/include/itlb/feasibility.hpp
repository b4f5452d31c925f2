#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace itlb {

// Strict preference: `better` must score higher than `worse`.
struct Preference {
    std::string better;
    std::string worse;
};

struct FeasibilityResult {
    bool feasible = false;
    // Longest-path potential per node, in first-appearance order (feasible only).
    std::vector<std::pair<std::string, std::int64_t>> assignment;
    // Directed cycle better -> worse -> ... -> first node again (infeasible only).
    std::vector<std::string> witness;
};

// A real-valued score consistent with every preference exists iff the
// preference digraph is acyclic.
FeasibilityResult potential_feasibility(std::span<const Preference> edges);

}  // namespace itlb
