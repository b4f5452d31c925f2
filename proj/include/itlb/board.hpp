#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "itlb/error.hpp"

namespace itlb {

class Rng;

enum class Topology : std::uint8_t { Planar, Cylinder, Torus };

std::string_view to_string(Topology t);
Topology parse_topology(std::string_view text);

constexpr int kMinBoardDim = 3;
constexpr int kMaxBoardDim = 8;
constexpr int kMaxSquares = kMaxBoardDim * kMaxBoardDim;

// Board size and topology. Cylinder wraps files only, Torus wraps both axes.
class BoardSpec {
public:
    BoardSpec() = default;
    BoardSpec(int files, int ranks, Topology topology = Topology::Planar);

    int files() const { return files_; }
    int ranks() const { return ranks_; }
    Topology topology() const { return topology_; }
    int squares() const { return files_ * ranks_; }
    bool wraps_files() const { return topology_ != Topology::Planar; }
    bool wraps_ranks() const { return topology_ == Topology::Torus; }
    bool allows_pawns() const { return topology_ != Topology::Torus; }

    // "8x8,planar"
    std::string to_string() const;
    // Accepts "8x8,planar", "8x8:torus" or a bare "8x8" (planar).
    static BoardSpec parse(std::string_view text);

    friend bool operator==(const BoardSpec&, const BoardSpec&) = default;

private:
    std::uint8_t files_ = 8;
    std::uint8_t ranks_ = 8;
    Topology topology_ = Topology::Planar;
};

struct Square {
    int file = 0;
    int rank = 0;

    friend auto operator<=>(const Square&, const Square&) = default;
};

inline int index_of(const BoardSpec& board, Square s) { return s.rank * board.files() + s.file; }
inline Square square_at(const BoardSpec& board, int index) {
    return Square{index % board.files(), index / board.files()};
}
bool on_board(const BoardSpec& board, Square s);

std::string square_name(Square s);
// Parses "e4" against the board's extent; ParseError if malformed or off-board.
Square parse_square(std::string_view text, const BoardSpec& board, std::size_t offset = 0);

enum class Color : std::uint8_t { White, Black };
constexpr Color opposite(Color c) { return c == Color::White ? Color::Black : Color::White; }
std::string_view to_string(Color c);

enum class Kind : std::uint8_t { King, Queen, Rook, Bishop, Knight, Pawn };
constexpr int kKindCount = 6;
char kind_letter(Kind k);
std::optional<Kind> kind_from_letter(char c);

struct Piece {
    Color color = Color::White;
    Kind kind = Kind::King;

    friend auto operator<=>(const Piece&, const Piece&) = default;
};

// Mailbox cell: 0 is empty, otherwise 1 + kind + 6 * color.
using Cell = std::uint8_t;
constexpr Cell kEmpty = 0;
constexpr Cell cell_of(Piece p) {
    return static_cast<Cell>(1 + static_cast<int>(p.kind) + kKindCount * static_cast<int>(p.color));
}
constexpr Cell cell_of(Color c, Kind k) { return cell_of(Piece{c, k}); }
constexpr Piece piece_of(Cell c) {
    return Piece{static_cast<Color>((c - 1) / kKindCount), static_cast<Kind>((c - 1) % kKindCount)};
}
constexpr Color color_of(Cell c) { return static_cast<Color>((c - 1) / kKindCount); }
constexpr Kind kind_of(Cell c) { return static_cast<Kind>((c - 1) % kKindCount); }

struct Placement {
    Square square;
    Piece piece;

    friend bool operator==(const Placement&, const Placement&) = default;
};

using Cells = std::array<Cell, kMaxSquares>;

// One side's pieces: exactly one King, distinct squares, no pawn on a
// promotion or home edge rank, no pawns at all on a torus.
class HalfPosition {
public:
    static HalfPosition make(const BoardSpec& board, Color color, std::vector<Placement> placements);

    const BoardSpec& board() const { return board_; }
    Color color() const { return color_; }
    // Sorted by square index.
    const std::vector<Placement>& placements() const { return placements_; }

    friend bool operator==(const HalfPosition&, const HalfPosition&) = default;

private:
    HalfPosition() = default;

    BoardSpec board_;
    Color color_ = Color::White;
    std::vector<Placement> placements_;
};

// Both sides plus side to move.
class WholePosition {
public:
    // Validates every invariant; throws Error with Overlap, KingsAdjacent,
    // IllegalCheck or InvariantViolation.
    static WholePosition make(const BoardSpec& board, const std::vector<Placement>& placements,
                              Color to_move);
    // No validation; for callers that construct legal positions by design.
    static WholePosition unchecked(const BoardSpec& board, const Cells& cells, Color to_move);

    const BoardSpec& board() const { return board_; }
    Color to_move() const { return to_move_; }
    const Cells& cells() const { return cells_; }
    Cell at(int index) const { return cells_[static_cast<std::size_t>(index)]; }
    Cell at(Square s) const { return at(index_of(board_, s)); }

    std::vector<Placement> placements() const;
    int piece_count() const;
    std::optional<int> king_square(Color c) const;

    friend bool operator==(const WholePosition&, const WholePosition&) = default;

private:
    WholePosition() = default;

    BoardSpec board_;
    Cells cells_{};
    Color to_move_ = Color::White;
};

struct Violation {
    ErrorCode code;
    std::string invariant;
};

// First violated WholePosition invariant, if any.
std::optional<Violation> find_violation(const BoardSpec& board, const Cells& cells, Color to_move);

// White half and Black half on one board, White to move.
WholePosition superpose(const HalfPosition& white, const HalfPosition& black);
// Non-throwing variant: nullopt when the halves cannot be legally superposed.
std::optional<WholePosition> try_superpose(const HalfPosition& white, const HalfPosition& black);

// Uniform over all legal half-positions with the given material (rejection
// sampling over square tuples). Material must contain exactly one King.
HalfPosition random_half(std::span<const Kind> material, Color color, const BoardSpec& board, Rng& rng);

// Text codec. Half: "W:Ke1,Qd1" (King first, then the rest by square index).
// Whole: "W:Ke1,Qd1 | B:Ke8 | wtm | board=8x8,planar".
std::string encode(const HalfPosition& half);
std::string encode(const WholePosition& pos);
HalfPosition decode_half(std::string_view text, const BoardSpec& board);
WholePosition decode_whole(std::string_view text);
WholePosition decode_whole(std::string_view text, const BoardSpec& board);

// Material as piece letters, e.g. "KQ". Case-insensitive on input.
std::vector<Kind> parse_material(std::string_view text);
std::string material_string(std::span<const Kind> kinds);

}  // namespace itlb
