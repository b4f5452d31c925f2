#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "itlb/rng.hpp"

namespace itlb::magicians {

enum class Face : std::uint8_t { Good, Bad };  // X, O

constexpr int kMinColumns = 2;
constexpr int kMaxColumns = 10;

// Two full rows of N cards. Bit i of a row mask is set when cell i shows Good.
class MagBoard {
public:
    // Throws InvariantViolation for N outside [2, 10] or unequal rows.
    MagBoard(std::vector<Face> upper, std::vector<Face> lower);
    static MagBoard from_masks(int columns, std::uint32_t upper, std::uint32_t lower);
    // "XOX/OXO"; ParseError with offset.
    static MagBoard parse(std::string_view text);

    int columns() const { return n_; }
    Face upper(int col) const { return bit(upper_, col); }
    Face lower(int col) const { return bit(lower_, col); }
    std::uint32_t upper_mask() const { return upper_; }
    std::uint32_t lower_mask() const { return lower_; }
    // upper | lower << N; dense index into 2^(2N) states.
    std::uint32_t state() const { return upper_ | (lower_ << n_); }
    static MagBoard from_state(int columns, std::uint32_t state);

    int good_count() const;
    int bad_count() const { return 2 * n_ - good_count(); }
    bool all_good() const { return good_count() == 2 * n_; }
    bool all_bad() const { return good_count() == 0; }
    // Upper and lower rows exchanged.
    MagBoard rows_swapped() const { return from_masks(n_, lower_, upper_); }

    std::string to_string() const;

    friend bool operator==(const MagBoard&, const MagBoard&) = default;

private:
    MagBoard() = default;
    static Face bit(std::uint32_t mask, int col) { return (mask >> col) & 1u ? Face::Good : Face::Bad; }

    int n_ = 0;
    std::uint32_t upper_ = 0;
    std::uint32_t lower_ = 0;
};

struct Swap {
    int upper_col = 0;
    int lower_col = 0;

    // "u1 l0"
    std::string to_string() const;
    static Swap parse(std::string_view text);

    friend bool operator==(const Swap&, const Swap&) = default;
};

// The two cards exchange cells; each moved card turns over iff both of its
// new horizontal neighbours exist and show the opposite face. Throws
// IndexOutOfRange.
MagBoard apply_swap(const MagBoard& b, Swap s);

// All N^2 swaps, upper column major.
std::vector<Swap> all_swaps(int columns);

// Fewest swaps from b to all-Good; nullopt when unreachable.
std::optional<int> perfect_value(const MagBoard& b);
// One shortest swap sequence to all-Good (empty when already there or unreachable).
std::vector<Swap> perfect_line(const MagBoard& b);
// perfect_value for every state of an N-column board, indexed by state(); -1
// marks unreachable. Practical up to N = 8.
std::vector<int> perfect_values(int columns);

enum class Side { Good, Bad };

std::string_view to_string(Side s);

// Heuristic scores are exact integers in units of 1/kScoreUnit.
constexpr std::int64_t kScoreUnit = 27720;

struct Weights {
    std::int64_t working_pair = 8;
    std::int64_t friendly = 4;
    std::int64_t pair_distance = 1;
    // Each friendly card adds centrality / (2 + |2i - (N-1)|).
    std::int64_t centrality = 2;
};

// Friendly cells in a row mask (bit set = Good) from `side`'s point of view.
std::uint32_t friendly_mask(std::uint32_t good_mask, int columns, Side side);

// Cells i, i+2 both friendly. Rows shorter than 3 have none.
int working_pairs(std::uint32_t friendly, int columns);
// Fewest cell changes that would create a working pair. Throws RowTooShort for N < 3.
int pair_distance(std::uint32_t friendly, int columns);
int pair_distance(std::string_view row);

// Row score in 1/kScoreUnit units; pair terms are dropped for N < 3.
std::int64_t row_score(std::uint32_t friendly, int columns, const Weights& w = {});
double row_value(std::string_view row, const Weights& w = {});

std::int64_t heuristic_score(const MagBoard& b, Side side, const Weights& w = {});
double heuristic_value(const MagBoard& b, Side side, const Weights& w = {});

// Swaps whose resulting heuristic is maximal for `side`, in all_swaps order.
std::vector<Swap> argmax_swaps(const MagBoard& b, Side side, const Weights& w = {});
// Uniform choice among argmax_swaps.
Swap best_swap(const MagBoard& b, Side side, Rng& rng, const Weights& w = {});

// The 2^N rows of length N sorted by row_value, joined with " < " (or " = "
// for ties), X as friendly.
std::string induced_row_order(int columns, const Weights& w = {});

// Puzzle starts rebuilt from their card counts; the exact layouts are not
// known, so each is one layout consistent with its description.
struct Problem {
    std::string name;
    std::string description;
    MagBoard start;
};
std::vector<Problem> reconstructed_problems();

struct TransitivityReport {
    std::uint64_t boards = 0;
    std::uint64_t triples = 0;
    std::uint64_t violations = 0;
};

// Checks u>=v, v>=w => u>=w under heuristic_score for every triple of boards.
TransitivityReport verify_transitivity(const std::vector<MagBoard>& boards, Side side = Side::Good);
// Same check on `triples` triples drawn uniformly from the boards.
TransitivityReport verify_transitivity_sampled(const std::vector<MagBoard>& boards, std::uint64_t triples,
                                               Rng& rng, Side side = Side::Good);

// Every board with N columns.
std::vector<MagBoard> all_boards(int columns);

// Match protocol (an extension; the game itself only fixes the Good goal):
// Good moves first, Good wins on all-Good, Bad wins on all-Bad, and a repeated
// (board, side to move) is a draw.
enum class GameResult { GoodWins, BadWins, Draw };

std::string_view to_string(GameResult r);

struct GameRecord {
    std::vector<Swap> moves;
    std::vector<MagBoard> boards;  // boards[0] is the start
    GameResult result = GameResult::Draw;
};

class Game {
public:
    explicit Game(MagBoard start);

    const MagBoard& board() const { return board_; }
    Side to_move() const { return to_move_; }
    bool over() const { return result_.has_value(); }
    std::optional<GameResult> result() const { return result_; }
    const GameRecord& record() const { return record_; }

    // Throws IllegalMove once the game is over, IndexOutOfRange for bad columns.
    void play(Swap s);

private:
    void settle();

    MagBoard board_;
    Side to_move_ = Side::Good;
    std::optional<GameResult> result_;
    GameRecord record_;
    std::unordered_set<std::uint64_t> seen_;
};

// Both sides play best_swap.
GameRecord ai_match(const MagBoard& start, Rng& rng, const Weights& w = {});

}  // namespace itlb::magicians
