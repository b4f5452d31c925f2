#include "itlb/board.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "itlb/geometry.hpp"
#include "itlb/movegen.hpp"
#include "itlb/rng.hpp"

namespace itlb {

namespace {

std::string_view trim(std::string_view s, std::size_t* offset = nullptr) {
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    if (offset) *offset += b;
    return s.substr(b, e - b);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

void append_side(std::string& out, Color color, std::vector<Placement> side) {
    std::stable_sort(side.begin(), side.end(), [](const Placement& a, const Placement& b) {
        return (a.piece.kind == Kind::King) > (b.piece.kind == Kind::King);
    });
    out += color == Color::White ? "W:" : "B:";
    for (std::size_t i = 0; i < side.size(); ++i) {
        if (i) out += ',';
        out += kind_letter(side[i].piece.kind);
        out += square_name(side[i].square);
    }
}

// Parses "W:Ke1,Qd1" into placements without checking legality.
std::pair<Color, std::vector<Placement>> parse_side(std::string_view text, const BoardSpec& board,
                                                    std::size_t offset) {
    text = trim(text, &offset);
    if (text.size() < 2 || text[1] != ':' || (text[0] != 'W' && text[0] != 'B')) {
        throw Error(ErrorCode::ParseError, "expected 'W:' or 'B:' prefix", offset);
    }
    const Color color = text[0] == 'W' ? Color::White : Color::Black;
    std::vector<Placement> placements;
    std::size_t pos = 2;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::size_t tok_off = offset + pos;
        const std::string_view tok = trim(text.substr(pos, end - pos), &tok_off);
        if (tok.empty()) {
            if (pos == text.size() && placements.empty()) break;
            throw Error(ErrorCode::ParseError, "empty piece token", tok_off);
        }
        const auto kind = kind_from_letter(tok[0]);
        if (!kind) throw Error(ErrorCode::ParseError, "unknown piece letter '" + std::string(1, tok[0]) + "'", tok_off);
        placements.push_back({parse_square(tok.substr(1), board, tok_off + 1), Piece{color, *kind}});
        pos = end + 1;
    }
    return {color, std::move(placements)};
}

WholePosition make_whole_for_codec(const BoardSpec& board, const std::vector<Placement>& placements, Color stm) {
    try {
        return WholePosition::make(board, placements, stm);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvariantViolation, e.what());
    }
}

}  // namespace

std::string_view to_string(Topology t) {
    switch (t) {
    case Topology::Planar: return "planar";
    case Topology::Cylinder: return "cylinder";
    case Topology::Torus: return "torus";
    }
    return "?";
}

Topology parse_topology(std::string_view text) {
    const std::string s = lower(trim(text));
    if (s == "planar") return Topology::Planar;
    if (s == "cylinder") return Topology::Cylinder;
    if (s == "torus") return Topology::Torus;
    throw Error(ErrorCode::ParseError, "unknown topology '" + std::string(text) + "'");
}

BoardSpec::BoardSpec(int files, int ranks, Topology topology) : topology_(topology) {
    if (files < kMinBoardDim || files > kMaxBoardDim || ranks < kMinBoardDim || ranks > kMaxBoardDim) {
        throw Error(ErrorCode::InvariantViolation,
                    "board dimensions must be within 3..8, got " + std::to_string(files) + "x" + std::to_string(ranks));
    }
    files_ = static_cast<std::uint8_t>(files);
    ranks_ = static_cast<std::uint8_t>(ranks);
}

std::string BoardSpec::to_string() const {
    return std::to_string(files_) + "x" + std::to_string(ranks_) + "," + std::string(itlb::to_string(topology_));
}

BoardSpec BoardSpec::parse(std::string_view text) {
    text = trim(text);
    const auto sep = text.find_first_of(",:");
    const std::string_view dims = text.substr(0, sep);
    const auto x = dims.find_first_of("xX");
    if (x == std::string_view::npos) throw Error(ErrorCode::ParseError, "expected FILESxRANKS", 0);
    int files = 0, ranks = 0;
    auto r1 = std::from_chars(dims.data(), dims.data() + x, files);
    auto r2 = std::from_chars(dims.data() + x + 1, dims.data() + dims.size(), ranks);
    if (r1.ec != std::errc{} || r1.ptr != dims.data() + x || r2.ec != std::errc{} ||
        r2.ptr != dims.data() + dims.size()) {
        throw Error(ErrorCode::ParseError, "malformed board size '" + std::string(dims) + "'", 0);
    }
    const Topology topo = sep == std::string_view::npos ? Topology::Planar : parse_topology(text.substr(sep + 1));
    try {
        return BoardSpec(files, ranks, topo);
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what(), 0);
    }
}

bool on_board(const BoardSpec& board, Square s) {
    return s.file >= 0 && s.file < board.files() && s.rank >= 0 && s.rank < board.ranks();
}

std::string square_name(Square s) {
    std::string out(1, static_cast<char>('a' + s.file));
    out += std::to_string(s.rank + 1);
    return out;
}

Square parse_square(std::string_view text, const BoardSpec& board, std::size_t offset) {
    if (text.size() < 2) throw Error(ErrorCode::ParseError, "malformed square '" + std::string(text) + "'", offset);
    const char f = static_cast<char>(std::tolower(static_cast<unsigned char>(text[0])));
    int rank = 0;
    auto res = std::from_chars(text.data() + 1, text.data() + text.size(), rank);
    if (f < 'a' || f > 'z' || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ParseError, "malformed square '" + std::string(text) + "'", offset);
    }
    const Square s{f - 'a', rank - 1};
    if (!on_board(board, s)) {
        throw Error(ErrorCode::ParseError, "square '" + std::string(text) + "' is off the " + board.to_string() + " board",
                    offset);
    }
    return s;
}

std::string_view to_string(Color c) { return c == Color::White ? "White" : "Black"; }

char kind_letter(Kind k) {
    static constexpr char letters[] = {'K', 'Q', 'R', 'B', 'N', 'P'};
    return letters[static_cast<int>(k)];
}

std::optional<Kind> kind_from_letter(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'K': return Kind::King;
    case 'Q': return Kind::Queen;
    case 'R': return Kind::Rook;
    case 'B': return Kind::Bishop;
    case 'N': return Kind::Knight;
    case 'P': return Kind::Pawn;
    default: return std::nullopt;
    }
}

HalfPosition HalfPosition::make(const BoardSpec& board, Color color, std::vector<Placement> placements) {
    int kings = 0;
    std::uint64_t used = 0;
    for (const auto& p : placements) {
        if (p.piece.color != color) throw Error(ErrorCode::InvariantViolation, "side-color: piece of the other side");
        if (!on_board(board, p.square)) throw Error(ErrorCode::InvariantViolation, "on-board: square outside board");
        const int idx = index_of(board, p.square);
        if ((used >> idx) & 1u) throw Error(ErrorCode::InvariantViolation, "distinct-squares: two pieces share a square");
        used |= std::uint64_t{1} << idx;
        if (p.piece.kind == Kind::King) ++kings;
    }
    if (kings != 1) throw Error(ErrorCode::InvariantViolation, "one-King: expected exactly one King");
    for (const auto& p : placements) {
        if (p.piece.kind != Kind::Pawn) continue;
        if (!board.allows_pawns()) throw Error(ErrorCode::InvariantViolation, "no-pawns-on-torus");
        if (p.square.rank == 0 || p.square.rank == board.ranks() - 1) {
            throw Error(ErrorCode::InvariantViolation, "pawn-rank: pawn on an edge rank");
        }
    }
    std::sort(placements.begin(), placements.end(), [&](const Placement& a, const Placement& b) {
        return index_of(board, a.square) < index_of(board, b.square);
    });
    HalfPosition h;
    h.board_ = board;
    h.color_ = color;
    h.placements_ = std::move(placements);
    return h;
}

std::optional<Violation> find_violation(const BoardSpec& board, const Cells& cells, Color to_move) {
    const auto& geo = Geometry::of(board);
    const int n = board.squares();
    int king_sq[2] = {-1, -1};
    int king_count[2] = {0, 0};
    for (int sq = n; sq < kMaxSquares; ++sq) {
        if (cells[sq] != kEmpty) return Violation{ErrorCode::InvariantViolation, "on-board"};
    }
    for (int sq = 0; sq < n; ++sq) {
        const Cell c = cells[sq];
        if (c == kEmpty) continue;
        if (c > 2 * kKindCount) return Violation{ErrorCode::InvariantViolation, "piece-code"};
        const Piece p = piece_of(c);
        if (p.kind == Kind::King) {
            king_sq[static_cast<int>(p.color)] = sq;
            ++king_count[static_cast<int>(p.color)];
        }
    }
    if (king_count[0] != 1 || king_count[1] != 1) return Violation{ErrorCode::InvariantViolation, "one-King"};
    for (int sq = 0; sq < n; ++sq) {
        if (cells[sq] == kEmpty || kind_of(cells[sq]) != Kind::Pawn) continue;
        if (!board.allows_pawns()) return Violation{ErrorCode::InvariantViolation, "no-pawns-on-torus"};
        if (geo.is_edge_rank(sq)) return Violation{ErrorCode::InvariantViolation, "pawn-rank"};
    }
    if (geo.kings_touch(king_sq[0], king_sq[1])) return Violation{ErrorCode::KingsAdjacent, "kings-not-adjacent"};
    const Color idle = opposite(to_move);
    if (detail::square_attacked(geo, cells, king_sq[static_cast<int>(idle)], to_move)) {
        return Violation{ErrorCode::IllegalCheck, "non-mover-not-in-check"};
    }
    return std::nullopt;
}

WholePosition WholePosition::make(const BoardSpec& board, const std::vector<Placement>& placements, Color to_move) {
    Cells cells{};
    for (const auto& p : placements) {
        if (!on_board(board, p.square)) throw Error(ErrorCode::InvariantViolation, "on-board: square outside board");
        Cell& c = cells[static_cast<std::size_t>(index_of(board, p.square))];
        if (c != kEmpty) throw Error(ErrorCode::Overlap, "two pieces on " + square_name(p.square));
        c = cell_of(p.piece);
    }
    if (auto v = find_violation(board, cells, to_move)) throw Error(v->code, v->invariant);
    return unchecked(board, cells, to_move);
}

WholePosition WholePosition::unchecked(const BoardSpec& board, const Cells& cells, Color to_move) {
    WholePosition w;
    w.board_ = board;
    w.cells_ = cells;
    w.to_move_ = to_move;
    return w;
}

std::vector<Placement> WholePosition::placements() const {
    std::vector<Placement> out;
    for (int sq = 0; sq < board_.squares(); ++sq) {
        if (cells_[sq] != kEmpty) out.push_back({square_at(board_, sq), piece_of(cells_[sq])});
    }
    return out;
}

int WholePosition::piece_count() const {
    return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](Cell c) { return c != kEmpty; }));
}

std::optional<int> WholePosition::king_square(Color c) const {
    const Cell k = cell_of(c, Kind::King);
    for (int sq = 0; sq < board_.squares(); ++sq) {
        if (cells_[sq] == k) return sq;
    }
    return std::nullopt;
}

WholePosition superpose(const HalfPosition& white, const HalfPosition& black) {
    if (!(white.board() == black.board())) throw Error(ErrorCode::BoardMismatch, "halves are on different boards");
    if (white.color() != Color::White || black.color() != Color::Black) {
        throw Error(ErrorCode::InvariantViolation, "superpose expects a White half and a Black half");
    }
    std::vector<Placement> all = white.placements();
    all.insert(all.end(), black.placements().begin(), black.placements().end());
    return WholePosition::make(white.board(), all, Color::White);
}

std::optional<WholePosition> try_superpose(const HalfPosition& white, const HalfPosition& black) {
    if (!(white.board() == black.board()) || white.color() != Color::White || black.color() != Color::Black) {
        return std::nullopt;
    }
    const BoardSpec& board = white.board();
    Cells cells{};
    for (const auto* half : {&white, &black}) {
        for (const auto& p : half->placements()) {
            Cell& c = cells[static_cast<std::size_t>(index_of(board, p.square))];
            if (c != kEmpty) return std::nullopt;
            c = cell_of(p.piece);
        }
    }
    if (find_violation(board, cells, Color::White)) return std::nullopt;
    return WholePosition::unchecked(board, cells, Color::White);
}

HalfPosition random_half(std::span<const Kind> material, Color color, const BoardSpec& board, Rng& rng) {
    const auto kings = std::count(material.begin(), material.end(), Kind::King);
    if (kings != 1) throw Error(ErrorCode::InvariantViolation, "one-King: material needs exactly one King");
    const auto pawns = std::count(material.begin(), material.end(), Kind::Pawn);
    if (pawns > 0 && !board.allows_pawns()) throw Error(ErrorCode::Unsatisfiable, "pawns are not allowed on a torus");
    if (static_cast<int>(material.size()) > board.squares() ||
        pawns > static_cast<long>(board.files()) * (board.ranks() - 2)) {
        throw Error(ErrorCode::Unsatisfiable, "material " + material_string(material) + " does not fit on " +
                                                  board.to_string());
    }
    const auto n = static_cast<std::uint64_t>(board.squares());
    std::vector<Placement> placements(material.size());
    for (int attempt = 0; attempt < (1 << 22); ++attempt) {
        std::uint64_t used = 0;
        bool ok = true;
        for (std::size_t i = 0; i < material.size(); ++i) {
            const int sq = static_cast<int>(rng.below(n));
            const Square s = square_at(board, sq);
            if ((used >> sq) & 1u) ok = false;
            if (material[i] == Kind::Pawn && (s.rank == 0 || s.rank == board.ranks() - 1)) ok = false;
            used |= std::uint64_t{1} << sq;
            placements[i] = {s, Piece{color, material[i]}};
        }
        if (ok) return HalfPosition::make(board, color, placements);
    }
    throw Error(ErrorCode::Unsatisfiable, "rejection sampling did not converge");
}

std::string encode(const HalfPosition& half) {
    std::string out;
    append_side(out, half.color(), half.placements());
    return out;
}

std::string encode(const WholePosition& pos) {
    std::vector<Placement> sides[2];
    for (const auto& p : pos.placements()) sides[static_cast<int>(p.piece.color)].push_back(p);
    std::string out;
    append_side(out, Color::White, sides[0]);
    out += " | ";
    append_side(out, Color::Black, sides[1]);
    out += pos.to_move() == Color::White ? " | wtm | board=" : " | btm | board=";
    out += pos.board().to_string();
    return out;
}

HalfPosition decode_half(std::string_view text, const BoardSpec& board) {
    auto [color, placements] = parse_side(text, board, 0);
    return HalfPosition::make(board, color, std::move(placements));
}

WholePosition decode_whole(std::string_view text) {
    std::vector<std::pair<std::string_view, std::size_t>> fields;
    std::size_t start = 0;
    while (true) {
        const auto bar = text.find('|', start);
        fields.emplace_back(text.substr(start, bar == std::string_view::npos ? bar : bar - start), start);
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    if (fields.size() != 4) throw Error(ErrorCode::ParseError, "expected 'W:... | B:... | wtm|btm | board=FxR,topology'", 0);

    std::size_t board_off = fields[3].second;
    const std::string_view board_field = trim(fields[3].first, &board_off);
    if (board_field.substr(0, 6) != "board=") throw Error(ErrorCode::ParseError, "expected 'board='", board_off);
    BoardSpec board;
    try {
        board = BoardSpec::parse(board_field.substr(6));
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what(), board_off + 6);
    }

    std::size_t stm_off = fields[2].second;
    const std::string_view stm = trim(fields[2].first, &stm_off);
    Color to_move;
    if (stm == "wtm") {
        to_move = Color::White;
    } else if (stm == "btm") {
        to_move = Color::Black;
    } else {
        throw Error(ErrorCode::ParseError, "expected 'wtm' or 'btm'", stm_off);
    }

    auto [wc, white] = parse_side(fields[0].first, board, fields[0].second);
    auto [bc, black] = parse_side(fields[1].first, board, fields[1].second);
    if (wc != Color::White) throw Error(ErrorCode::ParseError, "first field must be the White side", fields[0].second);
    if (bc != Color::Black) throw Error(ErrorCode::ParseError, "second field must be the Black side", fields[1].second);
    white.insert(white.end(), black.begin(), black.end());
    return make_whole_for_codec(board, white, to_move);
}

WholePosition decode_whole(std::string_view text, const BoardSpec& board) {
    WholePosition pos = decode_whole(text);
    if (!(pos.board() == board)) {
        throw Error(ErrorCode::BoardMismatch, "text is for " + pos.board().to_string() + ", expected " + board.to_string());
    }
    return pos;
}

std::vector<Kind> parse_material(std::string_view text) {
    std::size_t off = 0;
    text = trim(text, &off);
    if (text.empty()) throw Error(ErrorCode::ParseError, "empty material", off);
    std::vector<Kind> out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto k = kind_from_letter(text[i]);
        if (!k) throw Error(ErrorCode::ParseError, "unknown piece letter '" + std::string(1, text[i]) + "'", off + i);
        out.push_back(*k);
    }
    return out;
}

std::string material_string(std::span<const Kind> kinds) {
    std::string out;
    for (Kind k : kinds) out += kind_letter(k);
    return out;
}

}  // namespace itlb
