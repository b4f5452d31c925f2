#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "itlb/board.hpp"
#include "itlb/feasibility.hpp"
#include "itlb/solver.hpp"

namespace itlb {

enum class BeatsResult { XBeats, YBeats, Neither };

std::string_view to_string(BeatsResult r);

// Superposes whichever of x, y is White with the other (White to move) and
// reports whose color wins. Superposition errors propagate.
BeatsResult beats(Solver& solver, const HalfPosition& x, const HalfPosition& y);

// Half-positions alternating White, Black, ... of even length >= 4 on one
// board; every wraparound neighbour pair superposes legally.
class Chain {
public:
    // Throws ChainInvariantViolation.
    static Chain make(std::vector<HalfPosition> members);

    const std::vector<HalfPosition>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    const BoardSpec& board() const { return members_.front().board(); }
    // Superposition of members i and i+1 (mod n).
    WholePosition edge_position(std::size_t i) const;
    // "A", "B", ... for members in order.
    static std::string label(std::size_t i);

private:
    std::vector<HalfPosition> members_;
};

struct EdgeResult {
    std::size_t from = 0;
    std::size_t to = 0;
    Outcome outcome;
};

enum class Direction { Forward, Reverse };

std::string_view to_string(Direction d);

// Chain plus per-edge solved outcomes; Forward means member i beats member
// i+1 on every edge, Reverse means member i+1 beats member i on every edge.
struct CycleCertificate {
    Chain chain;
    std::vector<EdgeResult> edges;
    Direction direction = Direction::Forward;
};

enum class ChainClass { Intransitive, TransitiveDecisive, DrawDegenerate };

std::string_view to_string(ChainClass c);

struct ChainClassification {
    ChainClass kind = ChainClass::DrawDegenerate;
    std::vector<EdgeResult> edges;
    std::optional<CycleCertificate> certificate;
};

ChainClassification classify_chain(Solver& solver, const Chain& chain);

// Oriented strict preferences (winner over loser) over the chain members,
// labelled A, B, C, ...; only decisive edges contribute.
std::vector<Preference> oriented_edges(const Chain& chain, std::span<const EdgeResult> edges);

// Self-contained text block; parse accepts exactly what serialize writes.
std::string serialize_certificate(const CycleCertificate& cert);
CycleCertificate parse_certificate(std::string_view text);

struct EdgeCheck {
    EdgeResult stored;
    Outcome recomputed;
    bool pass = false;
};

struct CertificateCheck {
    std::vector<EdgeCheck> edges;
    bool orientation_ok = false;
    bool pass = false;
};

// Re-solves every edge independently and re-checks the orientation.
CertificateCheck verify_certificate(Solver& solver, const CycleCertificate& cert);

// ---------------------------------------------------------------- Monte-Carlo

struct McParams {
    BoardSpec board;
    // One material per chain slot; even slots are White, odd slots Black.
    std::vector<std::vector<Kind>> slots;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 1;
    int workers = 1;
    // Consecutive illegal draws tolerated for one sample before giving up.
    std::uint64_t max_attempts = 100000;
};

struct McCounts {
    std::uint64_t intransitive = 0;
    std::uint64_t transitive_decisive = 0;
    std::uint64_t draw_degenerate = 0;
    std::uint64_t rejected_illegal = 0;

    friend bool operator==(const McCounts&, const McCounts&) = default;
};

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval for a binomial proportion (z = 1.96 for 95%).
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct McReport {
    McParams params;
    McCounts counts;
    double intransitive_share = 0.0;
    WilsonInterval wilson;
    // Lowest-index sample that produced a cycle, if any.
    std::optional<CycleCertificate> first_certificate;
    std::uint64_t first_certificate_sample = 0;
};

// Cycles a per-slot material list out to `length` slots.
std::vector<std::vector<Kind>> expand_slots(const std::vector<std::vector<Kind>>& pattern, std::size_t length);

// Material pairs superposed by a chain of these slots; build them up front
// before concurrent probing.
void prepare_tables(Solver& solver, const BoardSpec& board, const std::vector<std::vector<Kind>>& slots);

McReport monte_carlo(Solver& solver, const McParams& params);

// ---------------------------------------------------------- exhaustive search

struct SearchCursor {
    std::uint64_t a = 0;  // index into slot 0 half-positions
    std::uint64_t c = 0;  // index into slot 2 half-positions
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(SearchCursor cursor, std::uint64_t nodes);
    SearchCursor cursor() const { return cursor_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    SearchCursor cursor_;
    std::uint64_t nodes_;
};

struct ExhaustiveParams {
    BoardSpec board;
    std::vector<std::vector<Kind>> slots;  // exactly 4
    std::uint64_t budget_nodes = 2'000'000'000;
    SearchCursor start;
};

struct ExhaustiveResult {
    std::optional<CycleCertificate> certificate;
    // True when the whole space was enumerated without finding a cycle.
    bool exhaustive = false;
    std::uint64_t nodes = 0;
    SearchCursor cursor;
    std::vector<std::uint64_t> slot_sizes;
};

// Every legal half-position of the material, in lexicographic square order.
std::vector<HalfPosition> enumerate_halves(std::span<const Kind> material, Color color, const BoardSpec& board);

// Deterministic search for a 4-cycle; throws BudgetExceeded with the cursor to
// resume from.
ExhaustiveResult exhaustive_search(Solver& solver, const ExhaustiveParams& params);

}  // namespace itlb
