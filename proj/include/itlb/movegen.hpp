#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itlb/board.hpp"
#include "itlb/geometry.hpp"

namespace itlb {

struct Move {
    Square from;
    Square to;
    std::optional<Kind> promotion;

    // "e2e4", "e7e8q"
    std::string to_string() const;
    static Move parse(std::string_view text, const BoardSpec& board);

    friend auto operator<=>(const Move&, const Move&) = default;
};

class SquareSet {
public:
    SquareSet() = default;
    explicit SquareSet(std::uint64_t bits) : bits_(bits) {}

    void insert(int index) { bits_ |= std::uint64_t{1} << index; }
    bool contains(int index) const { return (bits_ >> index) & 1u; }
    int size() const { return std::popcount(bits_); }
    bool empty() const { return bits_ == 0; }
    std::uint64_t bits() const { return bits_; }
    std::vector<int> indices() const;

    friend bool operator==(const SquareSet&, const SquareSet&) = default;

private:
    std::uint64_t bits_ = 0;
};

// Squares attacked by `color` under the board topology.
SquareSet attacks(const WholePosition& pos, Color color);

std::vector<Move> legal_moves(const WholePosition& pos);

// Throws IllegalMove unless m is in legal_moves(pos).
WholePosition apply(const WholePosition& pos, const Move& m);

bool in_check(const WholePosition& pos, Color color);

// Short algebraic rendering ("Qg7#", "exd8=Q+") for reports.
std::string describe_move(const WholePosition& pos, const Move& m);

// Low-level helpers over raw cells, shared with the table builder.
namespace detail {

struct RawMove {
    std::uint8_t from;
    std::uint8_t to;
    Cell promotion;  // kEmpty when none
};

bool square_attacked(const Geometry& geo, const Cells& cells, int sq, Color by);
std::uint64_t attack_bits(const Geometry& geo, const Cells& cells, Color by);
// Pseudo-legal moves for `side`, deduplicated by (from, to, promotion).
void pseudo_moves(const Geometry& geo, const Cells& cells, Color side, std::vector<RawMove>& out);
// Legal moves (own king not left attacked).
void legal_moves(const Geometry& geo, const Cells& cells, Color side, std::vector<RawMove>& out);
void make_move(Cells& cells, const RawMove& m);
int find_king(const Geometry& geo, const Cells& cells, Color c);

}  // namespace detail

}  // namespace itlb
