#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "itlb/board.hpp"

namespace itlb {

// Precomputed per-board move geometry. Directions 0-3 are orthogonal, 4-7
// diagonal. Wrapped axes use modular arithmetic; a ray stops at a board edge
// or just before revisiting its origin square.
class Geometry {
public:
    static constexpr int kOrthogonal[4] = {0, 1, 2, 3};
    static constexpr int kDiagonal[4] = {4, 5, 6, 7};

    // Shared immutable instance per BoardSpec.
    static const Geometry& of(const BoardSpec& board);

    explicit Geometry(const BoardSpec& board);

    const BoardSpec& board() const { return board_; }
    int squares() const { return board_.squares(); }

    std::span<const std::uint8_t> king_targets(int sq) const { return get(king_[sq]); }
    std::span<const std::uint8_t> knight_targets(int sq) const { return get(knight_[sq]); }
    std::span<const std::uint8_t> ray(int sq, int dir) const { return get(rays_[sq][dir]); }
    // Squares a pawn of `c` on `sq` attacks.
    std::span<const std::uint8_t> pawn_captures(Color c, int sq) const {
        return get(pawn_caps_[static_cast<int>(c)][sq]);
    }
    // Squares from which a pawn of `c` attacks `sq`.
    std::span<const std::uint8_t> pawn_attackers(Color c, int sq) const {
        return get(pawn_attackers_[static_cast<int>(c)][sq]);
    }
    // Forward step of a pawn of `c`, or -1.
    int pawn_push(Color c, int sq) const { return pawn_push_[static_cast<int>(c)][sq]; }
    // Square a pawn of `c` now on `sq` was pushed from, or -1.
    int pawn_unpush(Color c, int sq) const { return pawn_unpush_[static_cast<int>(c)][sq]; }

    bool is_last_rank(Color c, int sq) const {
        const int rank = sq / board_.files();
        return c == Color::White ? rank == board_.ranks() - 1 : rank == 0;
    }
    bool is_edge_rank(int sq) const {
        const int rank = sq / board_.files();
        return rank == 0 || rank == board_.ranks() - 1;
    }
    bool kings_touch(int a, int b) const { return (king_mask_[a] >> b) & 1u; }
    std::uint64_t king_mask(int sq) const { return king_mask_[sq]; }

    // Single step with wrapping; -1 when it leaves a non-wrapping edge.
    int step(int sq, int dfile, int drank) const;

private:
    struct Range {
        std::uint32_t begin = 0;
        std::uint32_t size = 0;
    };
    std::span<const std::uint8_t> get(Range r) const {
        return std::span<const std::uint8_t>(pool_.data() + r.begin, r.size);
    }
    Range store(const std::vector<std::uint8_t>& squares);

    BoardSpec board_;
    std::vector<std::uint8_t> pool_;
    std::array<Range, kMaxSquares> king_{};
    std::array<Range, kMaxSquares> knight_{};
    std::array<std::array<Range, 8>, kMaxSquares> rays_{};
    std::array<std::array<Range, kMaxSquares>, 2> pawn_caps_{};
    std::array<std::array<Range, kMaxSquares>, 2> pawn_attackers_{};
    std::array<std::array<int, kMaxSquares>, 2> pawn_push_{};
    std::array<std::array<int, kMaxSquares>, 2> pawn_unpush_{};
    std::array<std::uint64_t, kMaxSquares> king_mask_{};
};

}  // namespace itlb
