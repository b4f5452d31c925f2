#include <doctest.h>

#include <map>

#include "itlb/feasibility.hpp"

using namespace itlb;

namespace {

bool respects(const FeasibilityResult& r, const std::vector<Preference>& edges) {
    std::map<std::string, std::int64_t> v(r.assignment.begin(), r.assignment.end());
    for (const auto& e : edges) {
        if (!(v.at(e.better) > v.at(e.worse))) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("chain of preferences is feasible") {
    const std::vector<Preference> e{{"A", "B"}, {"B", "C"}, {"C", "D"}};
    const auto r = potential_feasibility(e);
    REQUIRE(r.feasible);
    CHECK(r.witness.empty());
    CHECK(r.assignment == std::vector<std::pair<std::string, std::int64_t>>{{"A", 3}, {"B", 2}, {"C", 1}, {"D", 0}});
    CHECK(respects(r, e));
}

TEST_CASE("four-cycle is infeasible with the cycle as witness") {
    const std::vector<Preference> e{{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "A"}};
    const auto r = potential_feasibility(e);
    CHECK_FALSE(r.feasible);
    CHECK(r.witness == std::vector<std::string>{"A", "B", "C", "D", "A"});
}

TEST_CASE("empty edge set") {
    const auto r = potential_feasibility({});
    CHECK(r.feasible);
    CHECK(r.assignment.empty());
}

TEST_CASE("isolated nodes get zero and sources sit highest") {
    const std::vector<Preference> e{{"A", "B"}, {"C", "B"}, {"C", "D"}, {"A", "D"}};
    const auto r = potential_feasibility(e);
    REQUIRE(r.feasible);
    CHECK(respects(r, e));
}

TEST_CASE("witness is a real cycle inside a larger graph") {
    const std::vector<Preference> e{{"X", "A"}, {"A", "B"}, {"B", "C"}, {"C", "A"}, {"C", "Y"}};
    const auto r = potential_feasibility(e);
    REQUIRE_FALSE(r.feasible);
    REQUIRE(r.witness.size() == 4);
    CHECK(r.witness.front() == r.witness.back());
    for (std::size_t i = 0; i + 1 < r.witness.size(); ++i) {
        bool found = false;
        for (const auto& p : e) found |= p.better == r.witness[i] && p.worse == r.witness[i + 1];
        CHECK(found);
    }
}

TEST_CASE("self preference is a one-node cycle") {
    const std::vector<Preference> e{{"A", "A"}};
    const auto r = potential_feasibility(e);
    CHECK_FALSE(r.feasible);
    CHECK(r.witness == std::vector<std::string>{"A", "A"});
}
