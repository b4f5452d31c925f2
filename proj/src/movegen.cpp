#include "itlb/movegen.hpp"

#include <algorithm>

namespace itlb {

namespace detail {

namespace {

constexpr Kind kPromotions[4] = {Kind::Queen, Kind::Rook, Kind::Bishop, Kind::Knight};

bool is_slider_for(Cell c, Color by, bool diagonal) {
    if (c == kEmpty || color_of(c) != by) return false;
    const Kind k = kind_of(c);
    return k == Kind::Queen || k == (diagonal ? Kind::Bishop : Kind::Rook);
}

void push_move(std::vector<RawMove>& out, int from, int to, Cell promo = kEmpty) {
    out.push_back({static_cast<std::uint8_t>(from), static_cast<std::uint8_t>(to), promo});
}

}  // namespace

bool square_attacked(const Geometry& geo, const Cells& cells, int sq, Color by) {
    const Cell king = cell_of(by, Kind::King);
    for (auto t : geo.king_targets(sq)) {
        if (cells[t] == king) return true;
    }
    const Cell knight = cell_of(by, Kind::Knight);
    for (auto t : geo.knight_targets(sq)) {
        if (cells[t] == knight) return true;
    }
    const Cell pawn = cell_of(by, Kind::Pawn);
    for (auto t : geo.pawn_attackers(by, sq)) {
        if (cells[t] == pawn) return true;
    }
    for (int dir = 0; dir < 8; ++dir) {
        for (auto t : geo.ray(sq, dir)) {
            if (cells[t] == kEmpty) continue;
            if (is_slider_for(cells[t], by, dir >= 4)) return true;
            break;
        }
    }
    return false;
}

std::uint64_t attack_bits(const Geometry& geo, const Cells& cells, Color by) {
    std::uint64_t bits = 0;
    for (int sq = 0; sq < geo.squares(); ++sq) {
        const Cell c = cells[sq];
        if (c == kEmpty || color_of(c) != by) continue;
        const Kind k = kind_of(c);
        auto add = [&](auto range) {
            for (auto t : range) bits |= std::uint64_t{1} << t;
        };
        switch (k) {
        case Kind::King: add(geo.king_targets(sq)); break;
        case Kind::Knight: add(geo.knight_targets(sq)); break;
        case Kind::Pawn: add(geo.pawn_captures(by, sq)); break;
        default:
            for (int dir = 0; dir < 8; ++dir) {
                const bool diagonal = dir >= 4;
                if (k == Kind::Rook && diagonal) continue;
                if (k == Kind::Bishop && !diagonal) continue;
                for (auto t : geo.ray(sq, dir)) {
                    bits |= std::uint64_t{1} << t;
                    if (cells[t] != kEmpty) break;
                }
            }
        }
    }
    return bits;
}

void pseudo_moves(const Geometry& geo, const Cells& cells, Color side, std::vector<RawMove>& out) {
    out.clear();
    for (int sq = 0; sq < geo.squares(); ++sq) {
        const Cell c = cells[sq];
        if (c == kEmpty || color_of(c) != side) continue;
        const Kind k = kind_of(c);
        auto free_or_enemy = [&](int t) { return cells[t] == kEmpty || color_of(cells[t]) != side; };
        switch (k) {
        case Kind::King:
            for (auto t : geo.king_targets(sq)) {
                if (free_or_enemy(t)) push_move(out, sq, t);
            }
            break;
        case Kind::Knight:
            for (auto t : geo.knight_targets(sq)) {
                if (free_or_enemy(t)) push_move(out, sq, t);
            }
            break;
        case Kind::Pawn: {
            auto add_pawn = [&](int t) {
                if (geo.is_last_rank(side, t)) {
                    for (Kind p : kPromotions) push_move(out, sq, t, cell_of(side, p));
                } else {
                    push_move(out, sq, t);
                }
            };
            const int push = geo.pawn_push(side, sq);
            if (push >= 0 && cells[push] == kEmpty) add_pawn(push);
            for (auto t : geo.pawn_captures(side, sq)) {
                if (cells[t] != kEmpty && color_of(cells[t]) != side) add_pawn(t);
            }
            break;
        }
        default: {
            std::uint64_t seen = 0;
            for (int dir = 0; dir < 8; ++dir) {
                const bool diagonal = dir >= 4;
                if (k == Kind::Rook && diagonal) continue;
                if (k == Kind::Bishop && !diagonal) continue;
                for (auto t : geo.ray(sq, dir)) {
                    const bool occupied = cells[t] != kEmpty;
                    if (!occupied || color_of(cells[t]) != side) {
                        if (!((seen >> t) & 1u)) {
                            seen |= std::uint64_t{1} << t;
                            push_move(out, sq, t);
                        }
                    }
                    if (occupied) break;
                }
            }
        }
        }
    }
}

int find_king(const Geometry& geo, const Cells& cells, Color c) {
    const Cell k = cell_of(c, Kind::King);
    for (int sq = 0; sq < geo.squares(); ++sq) {
        if (cells[sq] == k) return sq;
    }
    return -1;
}

void make_move(Cells& cells, const RawMove& m) {
    cells[m.to] = m.promotion != kEmpty ? m.promotion : cells[m.from];
    cells[m.from] = kEmpty;
}

void legal_moves(const Geometry& geo, const Cells& cells, Color side, std::vector<RawMove>& out) {
    pseudo_moves(geo, cells, side, out);
    const int king = find_king(geo, cells, side);
    const Color enemy = opposite(side);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const RawMove m = out[i];
        Cells next = cells;
        make_move(next, m);
        const int ksq = m.from == king ? m.to : king;
        if (!square_attacked(geo, next, ksq, enemy)) out[kept++] = m;
    }
    out.resize(kept);
}

}  // namespace detail

namespace {

Move to_move(const BoardSpec& board, const detail::RawMove& m) {
    Move out{square_at(board, m.from), square_at(board, m.to), std::nullopt};
    if (m.promotion != kEmpty) out.promotion = kind_of(m.promotion);
    return out;
}

}  // namespace

std::string Move::to_string() const {
    std::string out = square_name(from) + square_name(to);
    if (promotion) out += static_cast<char>(std::tolower(kind_letter(*promotion)));
    return out;
}

Move Move::parse(std::string_view text, const BoardSpec& board) {
    // Square names are a letter plus one digit on boards up to 8x8.
    if (text.size() != 4 && text.size() != 5) {
        throw Error(ErrorCode::ParseError, "malformed move '" + std::string(text) + "'", 0);
    }
    Move m{parse_square(text.substr(0, 2), board, 0), parse_square(text.substr(2, 2), board, 2), std::nullopt};
    if (text.size() == 5) {
        const auto k = kind_from_letter(text[4]);
        if (!k || *k == Kind::King || *k == Kind::Pawn) {
            throw Error(ErrorCode::ParseError, "bad promotion piece in '" + std::string(text) + "'", 4);
        }
        m.promotion = k;
    }
    return m;
}

std::vector<int> SquareSet::indices() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
}

SquareSet attacks(const WholePosition& pos, Color color) {
    return SquareSet(detail::attack_bits(Geometry::of(pos.board()), pos.cells(), color));
}

std::vector<Move> legal_moves(const WholePosition& pos) {
    std::vector<detail::RawMove> raw;
    detail::legal_moves(Geometry::of(pos.board()), pos.cells(), pos.to_move(), raw);
    std::vector<Move> out;
    out.reserve(raw.size());
    for (const auto& m : raw) out.push_back(to_move(pos.board(), m));
    return out;
}

bool in_check(const WholePosition& pos, Color color) {
    const auto& geo = Geometry::of(pos.board());
    const int k = detail::find_king(geo, pos.cells(), color);
    return k >= 0 && detail::square_attacked(geo, pos.cells(), k, opposite(color));
}

WholePosition apply(const WholePosition& pos, const Move& m) {
    const auto moves = legal_moves(pos);
    if (std::find(moves.begin(), moves.end(), m) == moves.end()) {
        throw Error(ErrorCode::IllegalMove, m.to_string() + " is not legal here");
    }
    const BoardSpec& board = pos.board();
    Cells cells = pos.cells();
    detail::make_move(cells, {static_cast<std::uint8_t>(index_of(board, m.from)),
                              static_cast<std::uint8_t>(index_of(board, m.to)),
                              m.promotion ? cell_of(pos.to_move(), *m.promotion) : kEmpty});
    return WholePosition::unchecked(board, cells, opposite(pos.to_move()));
}

std::string describe_move(const WholePosition& pos, const Move& m) {
    const Cell mover = pos.at(m.from);
    const Kind kind = kind_of(mover);
    const bool capture = pos.at(m.to) != kEmpty;
    std::string out;
    if (kind == Kind::Pawn) {
        if (capture) out += static_cast<char>('a' + m.from.file);
    } else {
        out += kind_letter(kind);
        bool same_file = false, same_rank = false, ambiguous = false;
        for (const auto& other : legal_moves(pos)) {
            if (other.to != m.to || other.from == m.from || pos.at(other.from) != mover) continue;
            ambiguous = true;
            same_file |= other.from.file == m.from.file;
            same_rank |= other.from.rank == m.from.rank;
        }
        if (ambiguous) {
            if (!same_file) {
                out += static_cast<char>('a' + m.from.file);
            } else if (!same_rank) {
                out += std::to_string(m.from.rank + 1);
            } else {
                out += square_name(m.from);
            }
        }
    }
    if (capture) out += 'x';
    out += square_name(m.to);
    if (m.promotion) {
        out += '=';
        out += kind_letter(*m.promotion);
    }
    const WholePosition next = apply(pos, m);
    if (in_check(next, next.to_move())) out += legal_moves(next).empty() ? '#' : '+';
    return out;
}

}  // namespace itlb
