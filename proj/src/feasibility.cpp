#include "itlb/feasibility.hpp"

#include <algorithm>
#include <map>

namespace itlb {

FeasibilityResult potential_feasibility(std::span<const Preference> edges) {
    std::vector<std::string> names;
    std::map<std::string, int> ids;
    auto id_of = [&](const std::string& name) {
        auto [it, inserted] = ids.try_emplace(name, static_cast<int>(names.size()));
        if (inserted) names.push_back(name);
        return it->second;
    };
    std::vector<std::pair<int, int>> arcs;
    for (const auto& e : edges) {
        const int a = id_of(e.better);
        const int b = id_of(e.worse);
        arcs.emplace_back(a, b);
    }
    const int n = static_cast<int>(names.size());
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    for (auto [a, b] : arcs) {
        out[a].push_back(b);
        ++indegree[b];
    }

    // Kahn
    std::vector<int> order;
    std::vector<int> ready;
    for (int v = n - 1; v >= 0; --v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (int w : out[v]) {
            if (--indegree[w] == 0) ready.push_back(w);
        }
    }

    FeasibilityResult result;
    if (static_cast<int>(order.size()) == n) {
        std::vector<std::int64_t> value(static_cast<std::size_t>(n), 0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            for (int w : out[*it]) value[*it] = std::max(value[*it], value[w] + 1);
        }
        result.feasible = true;
        for (int v = 0; v < n; ++v) result.assignment.emplace_back(names[v], value[v]);
        return result;
    }

    // Nodes left with positive indegree all lie on or downstream of a cycle;
    // walk predecessors inside that set until a node repeats.
    std::vector<std::vector<int>> in(static_cast<std::size_t>(n));
    for (auto [a, b] : arcs) {
        if (indegree[a] > 0 && indegree[b] > 0) in[b].push_back(a);
    }
    int start = 0;
    while (indegree[start] == 0) ++start;
    std::vector<int> seen_at(static_cast<std::size_t>(n), -1);
    std::vector<int> walk;
    int v = start;
    while (seen_at[v] < 0) {
        seen_at[v] = static_cast<int>(walk.size());
        walk.push_back(v);
        v = *std::min_element(in[v].begin(), in[v].end());
    }
    // walk[seen_at[v]..] followed backwards is the cycle
    std::vector<int> cycle(walk.begin() + seen_at[v], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
    for (int c : cycle) result.witness.push_back(names[c]);
    result.witness.push_back(names[cycle.front()]);
    return result;
}

}  // namespace itlb
