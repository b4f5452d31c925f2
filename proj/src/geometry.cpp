#include "itlb/geometry.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

namespace itlb {

namespace {

constexpr int kDirs[8][2] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}, {1, 1}, {1, -1}, {-1, -1}, {-1, 1}};
constexpr int kKnight[8][2] = {{1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};

constexpr int kSpecSlots = (kMaxBoardDim - kMinBoardDim + 1) * (kMaxBoardDim - kMinBoardDim + 1) * 3;

int slot_of(const BoardSpec& b) {
    return ((b.files() - kMinBoardDim) * (kMaxBoardDim - kMinBoardDim + 1) + (b.ranks() - kMinBoardDim)) * 3 +
           static_cast<int>(b.topology());
}

}  // namespace

const Geometry& Geometry::of(const BoardSpec& board) {
    static std::array<std::once_flag, kSpecSlots> once;
    static std::array<std::unique_ptr<Geometry>, kSpecSlots> cache;
    const int slot = slot_of(board);
    std::call_once(once[slot], [&] { cache[slot] = std::make_unique<Geometry>(board); });
    return *cache[slot];
}

int Geometry::step(int sq, int dfile, int drank) const {
    const int files = board_.files();
    const int ranks = board_.ranks();
    int f = sq % files + dfile;
    int r = sq / files + drank;
    if (board_.wraps_files()) {
        f = ((f % files) + files) % files;
    } else if (f < 0 || f >= files) {
        return -1;
    }
    if (board_.wraps_ranks()) {
        r = ((r % ranks) + ranks) % ranks;
    } else if (r < 0 || r >= ranks) {
        return -1;
    }
    return r * files + f;
}

Geometry::Range Geometry::store(const std::vector<std::uint8_t>& squares) {
    Range r{static_cast<std::uint32_t>(pool_.size()), static_cast<std::uint32_t>(squares.size())};
    pool_.insert(pool_.end(), squares.begin(), squares.end());
    return r;
}

Geometry::Geometry(const BoardSpec& board) : board_(board) {
    const int n = board.squares();
    auto unique_targets = [&](int sq, const int (&deltas)[8][2]) {
        std::vector<std::uint8_t> out;
        for (const auto& d : deltas) {
            const int t = step(sq, d[0], d[1]);
            if (t >= 0 && t != sq && std::find(out.begin(), out.end(), t) == out.end()) {
                out.push_back(static_cast<std::uint8_t>(t));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    std::array<std::array<std::vector<std::uint8_t>, kMaxSquares>, 2> attackers;
    for (int sq = 0; sq < n; ++sq) {
        const auto kings = unique_targets(sq, kDirs);
        king_[sq] = store(kings);
        for (auto t : kings) king_mask_[sq] |= std::uint64_t{1} << t;
        knight_[sq] = store(unique_targets(sq, kKnight));

        for (int dir = 0; dir < 8; ++dir) {
            std::vector<std::uint8_t> ray;
            int cur = sq;
            while (true) {
                cur = step(cur, kDirs[dir][0], kDirs[dir][1]);
                if (cur < 0 || cur == sq) break;
                ray.push_back(static_cast<std::uint8_t>(cur));
            }
            rays_[sq][dir] = store(ray);
        }

        for (int c = 0; c < 2; ++c) {
            const int forward = c == 0 ? 1 : -1;
            std::vector<std::uint8_t> caps;
            pawn_push_[c][sq] = -1;
            pawn_unpush_[c][sq] = -1;
            if (board.allows_pawns()) {
                pawn_push_[c][sq] = step(sq, 0, forward);
                pawn_unpush_[c][sq] = step(sq, 0, -forward);
                for (int df : {-1, 1}) {
                    const int t = step(sq, df, forward);
                    if (t >= 0 && std::find(caps.begin(), caps.end(), t) == caps.end()) {
                        caps.push_back(static_cast<std::uint8_t>(t));
                        attackers[c][t].push_back(static_cast<std::uint8_t>(sq));
                    }
                }
            }
            pawn_caps_[c][sq] = store(caps);
        }
    }
    for (int c = 0; c < 2; ++c) {
        for (int sq = 0; sq < n; ++sq) pawn_attackers_[c][sq] = store(attackers[c][sq]);
    }
}

}  // namespace itlb
