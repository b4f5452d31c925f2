#include "itlb/solver.hpp"

#include <algorithm>
#include <charconv>
#include <thread>

#include "itlb/geometry.hpp"

namespace itlb {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::WhiteWins: return "WhiteWins";
    case Verdict::BlackWins: return "BlackWins";
    case Verdict::Draw: return "Draw";
    }
    return "?";
}

std::string Outcome::to_string() const {
    std::string out(itlb::to_string(verdict));
    if (dtm) out += " dtm=" + std::to_string(*dtm);
    return out;
}

Outcome Outcome::parse(std::string_view text) {
    const auto space = text.find(' ');
    const std::string_view head = text.substr(0, space);
    Outcome o;
    if (head == "WhiteWins") {
        o.verdict = Verdict::WhiteWins;
    } else if (head == "BlackWins") {
        o.verdict = Verdict::BlackWins;
    } else if (head == "Draw") {
        if (space != std::string_view::npos) throw Error(ErrorCode::ParseError, "Draw carries no dtm", space);
        return o;
    } else {
        throw Error(ErrorCode::ParseError, "unknown verdict '" + std::string(head) + "'", 0);
    }
    const std::string_view rest = space == std::string_view::npos ? std::string_view{} : text.substr(space + 1);
    int dtm = -1;
    if (rest.substr(0, 4) != "dtm=" ||
        std::from_chars(rest.data() + 4, rest.data() + rest.size(), dtm).ptr != rest.data() + rest.size() || dtm < 0) {
        throw Error(ErrorCode::ParseError, "expected 'dtm=N' after verdict", head.size());
    }
    o.dtm = dtm;
    return o;
}

MaterialSignature::MaterialSignature(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end());
    int kings[2] = {0, 0};
    for (const auto& p : pieces_) {
        if (p.kind == Kind::King) ++kings[static_cast<int>(p.color)];
    }
    if (kings[0] != 1 || kings[1] != 1) {
        throw Error(ErrorCode::InvariantViolation, "one-King: material needs exactly one King per side");
    }
}

MaterialSignature MaterialSignature::of(const WholePosition& pos) {
    std::vector<Piece> pieces;
    for (const auto& p : pos.placements()) pieces.push_back(p.piece);
    return MaterialSignature(std::move(pieces));
}

MaterialSignature MaterialSignature::of(std::span<const Kind> white, std::span<const Kind> black) {
    std::vector<Piece> pieces;
    for (Kind k : white) pieces.push_back({Color::White, k});
    for (Kind k : black) pieces.push_back({Color::Black, k});
    return MaterialSignature(std::move(pieces));
}

MaterialSignature MaterialSignature::parse(std::string_view text) {
    const auto v = text.find_first_of("vV");
    if (v == std::string_view::npos) throw Error(ErrorCode::ParseError, "expected material like 'KQvK'", 0);
    const auto white = parse_material(text.substr(0, v));
    const auto black = parse_material(text.substr(v + 1));
    return of(white, black);
}

std::string MaterialSignature::to_string() const {
    std::string out;
    Color last = Color::White;
    for (const auto& p : pieces_) {
        if (p.color != last) out += 'v';
        last = p.color;
        out += kind_letter(p.kind);
    }
    return out;
}

MaterialSignature MaterialSignature::mirrored() const {
    std::vector<Piece> pieces = pieces_;
    for (auto& p : pieces) p.color = opposite(p.color);
    return MaterialSignature(std::move(pieces));
}

TableLayout::TableLayout(const BoardSpec& board, const MaterialSignature& material)
    : board_(board), material_(material), n_(material.count()) {
    if (n_ > kMaxPieces) {
        throw Error(ErrorCode::TooManyPieces, material.to_string() + " exceeds the native " +
                                                  std::to_string(kMaxPieces) + "-piece table limit");
    }
    const auto& pieces = material.pieces();
    for (int i = 0; i < n_; ++i) {
        cells_[i] = cell_of(pieces[i]);
        if (pieces[i].color == Color::Black && pieces[i].kind == Kind::King) black_king_ = i;
    }
    for (int i = 0; i < n_;) {
        int j = i;
        while (j < n_ && cells_[j] == cells_[i]) ++j;
        for (int k = i; k < j; ++k) {
            group_begin_[k] = i;
            group_end_[k] = j;
        }
        i = j;
    }
    size_ = 2;
    for (int i = 0; i < n_; ++i) size_ *= static_cast<std::uint64_t>(board.squares());
}

std::uint64_t TableLayout::index(const Squares& sq, Color stm) const {
    const auto s = static_cast<std::uint64_t>(board_.squares());
    std::uint64_t v = 0;
    for (int i = 0; i < n_; ++i) v = v * s + sq[i];
    return v * 2 + static_cast<std::uint64_t>(stm);
}

bool TableLayout::decode(std::uint64_t index, Squares& sq, Color& stm) const {
    const auto s = static_cast<std::uint64_t>(board_.squares());
    stm = static_cast<Color>(index & 1u);
    std::uint64_t v = index >> 1;
    for (int i = n_ - 1; i >= 0; --i) {
        sq[i] = static_cast<std::uint8_t>(v % s);
        v /= s;
    }
    std::uint64_t used = 0;
    for (int i = 0; i < n_; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << sq[i];
        if (used & bit) return false;
        used |= bit;
        if (i > group_begin_[i] && sq[i] < sq[i - 1]) return false;
    }
    return true;
}

void TableLayout::canonicalize(Squares& sq, int slot) const {
    std::sort(sq.begin() + group_begin_[slot], sq.begin() + group_end_[slot]);
}

std::uint64_t TableLayout::index_of_cells(const Cells& cells, Color stm) const {
    Squares sq{};
    std::array<int, kMaxPieces> fill{};
    for (int i = 0; i < n_; ++i) fill[i] = group_begin_[i];
    for (int s = 0; s < board_.squares(); ++s) {
        const Cell c = cells[s];
        if (c == kEmpty) continue;
        for (int i = 0; i < n_; i = group_end_[i]) {
            if (cells_[i] == c) {
                sq[fill[i]++] = static_cast<std::uint8_t>(s);
                break;
            }
        }
    }
    return index(sq, stm);
}

SolvedTable::SolvedTable(const BoardSpec& board, const MaterialSignature& material, std::vector<std::uint8_t> slots,
                         std::vector<std::pair<std::uint32_t, std::uint16_t>> overflow)
    : layout_(board, material), slots_(std::move(slots)), overflow_(std::move(overflow)) {
    if (slots_.size() != layout_.size()) {
        throw Error(ErrorCode::VersionMismatch, "slot count does not match " + material.to_string() + " on " +
                                                    board.to_string());
    }
    std::sort(overflow_.begin(), overflow_.end());
}

Outcome SolvedTable::at(std::uint64_t index) const {
    const std::uint8_t b = slots_[index];
    switch (b & 3u) {
    case kIllegal: throw Error(ErrorCode::IllegalPosition, "slot " + std::to_string(index) + " is not a legal position");
    case kDraw: return Outcome::draw();
    default: break;
    }
    int dtm = b >> 2;
    if (dtm == kDtmCap) {
        const auto it = std::lower_bound(overflow_.begin(), overflow_.end(),
                                         std::pair<std::uint32_t, std::uint16_t>{static_cast<std::uint32_t>(index), 0});
        if (it == overflow_.end() || it->first != index) {
            throw Error(ErrorCode::ChecksumMismatch, "missing overflow entry for slot " + std::to_string(index));
        }
        dtm = it->second;
    }
    return Outcome::win((b & 3u) == kWhiteWins ? Color::White : Color::Black, dtm);
}

Outcome SolvedTable::probe(const WholePosition& pos) const {
    if (!(pos.board() == board())) {
        throw Error(ErrorCode::TableMismatch, "position is on " + pos.board().to_string() + ", table on " +
                                                  board().to_string());
    }
    const auto m = MaterialSignature::of(pos);
    if (!(m == material())) {
        throw Error(ErrorCode::TableMismatch, "position has " + m.to_string() + ", table holds " +
                                                  material().to_string());
    }
    return at(layout_.index_of_cells(pos.cells(), pos.to_move()));
}

std::optional<WholePosition> SolvedTable::position_at(std::uint64_t index) const {
    if (index >= size() || !legal(index)) return std::nullopt;
    TableLayout::Squares sq{};
    Color stm;
    layout_.decode(index, sq, stm);
    Cells cells{};
    for (int i = 0; i < layout_.piece_count(); ++i) cells[sq[i]] = layout_.slot_cell(i);
    return WholePosition::unchecked(board(), cells, stm);
}

namespace {

enum Status : std::uint8_t {
    kUnknown = 0,
    kIllegalPos,
    kDrawn,
    kWon,
    kLost,
    kPendingWin,
    kPendingLoss,
};
constexpr std::uint8_t kStatusMask = 0x0f;
constexpr std::uint8_t kHasSafeExit = 0x80;  // some move does not lose: draw or win exit

// Piece counts per cell code, 3 bits each; identifies a sub-material cheaply.
using MaterialKey = std::uint64_t;

MaterialKey key_of(const MaterialSignature& m) {
    MaterialKey k = 0;
    for (const auto& p : m.pieces()) k += MaterialKey{1} << (3 * cell_of(p));
    return k;
}
MaterialKey key_delta(Cell c) { return MaterialKey{1} << (3 * c); }

struct Builder {
    const TableLayout& layout;
    const Geometry& geo;
    std::vector<std::pair<MaterialKey, const SolvedTable*>> subtables;
    MaterialKey key = 0;

    std::vector<std::uint8_t> status;
    std::vector<std::uint8_t> counter;
    std::vector<std::uint16_t> dtm;
    std::vector<std::vector<std::uint32_t>> buckets;

    const SolvedTable& subtable(MaterialKey k) const {
        for (const auto& [sk, t] : subtables) {
            if (sk == k) return *t;
        }
        throw Error(ErrorCode::TableMismatch, "missing sub-table during build");
    }

    void schedule(std::vector<std::pair<std::uint16_t, std::uint32_t>>& out, std::uint32_t idx, std::uint16_t depth,
                  Status s) {
        status[idx] = static_cast<std::uint8_t>((status[idx] & ~kStatusMask) | s);
        dtm[idx] = depth;
        out.emplace_back(depth, idx);
    }

    // Classifies one slot: legality, terminal status, in-table move count and
    // the values reachable through captures or promotions.
    void classify(std::uint64_t begin, std::uint64_t end, std::vector<std::pair<std::uint16_t, std::uint32_t>>& out) {
        const int n = layout.piece_count();
        Cells cells{};
        TableLayout::Squares sq{};
        std::vector<detail::RawMove> moves;
        moves.reserve(64);
        for (std::uint64_t i = begin; i < end; ++i) {
            const auto idx = static_cast<std::uint32_t>(i);
            Color stm;
            if (!layout.decode(i, sq, stm)) {
                status[idx] = kIllegalPos;
                continue;
            }
            bool legal = true;
            for (int s = 0; s < n; ++s) {
                cells[sq[s]] = layout.slot_cell(s);
                if (kind_of(layout.slot_cell(s)) == Kind::Pawn && geo.is_edge_rank(sq[s])) legal = false;
            }
            const int kings[2] = {sq[0], sq[layout.black_king_slot()]};
            const Color idle = opposite(stm);
            if (legal && geo.kings_touch(kings[0], kings[1])) legal = false;
            if (legal && detail::square_attacked(geo, cells, kings[static_cast<int>(idle)], stm)) legal = false;
            if (!legal) {
                status[idx] = kIllegalPos;
                for (int s = 0; s < n; ++s) cells[sq[s]] = kEmpty;
                continue;
            }

            detail::legal_moves(geo, cells, stm, moves);
            if (moves.empty()) {
                if (detail::square_attacked(geo, cells, kings[static_cast<int>(stm)], idle)) {
                    schedule(out, idx, 0, kPendingLoss);
                } else {
                    status[idx] = kDrawn;
                }
                for (int s = 0; s < n; ++s) cells[sq[s]] = kEmpty;
                continue;
            }

            int quiet = 0;
            int best_win = -1;
            int worst_loss = 0;
            bool safe_exit = false;
            for (const auto& m : moves) {
                const Cell captured = cells[m.to];
                if (captured == kEmpty && m.promotion == kEmpty) {
                    ++quiet;
                    continue;
                }
                MaterialKey child_key = key;
                if (captured != kEmpty) child_key -= key_delta(captured);
                if (m.promotion != kEmpty) child_key += key_delta(m.promotion) - key_delta(cells[m.from]);
                const SolvedTable& sub = subtable(child_key);
                Cells child = cells;
                detail::make_move(child, m);
                const Outcome o = sub.at(sub.layout().index_of_cells(child, idle));
                if (!o.winner()) {
                    safe_exit = true;
                } else if (*o.winner() == stm) {
                    const int d = *o.dtm + 1;
                    if (best_win < 0 || d < best_win) best_win = d;
                } else {
                    worst_loss = std::max(worst_loss, *o.dtm + 1);
                }
            }
            for (int s = 0; s < n; ++s) cells[sq[s]] = kEmpty;

            if (best_win >= 0) {
                schedule(out, idx, static_cast<std::uint16_t>(best_win), kPendingWin);
                continue;
            }
            counter[idx] = static_cast<std::uint8_t>(quiet);
            dtm[idx] = static_cast<std::uint16_t>(worst_loss);
            if (safe_exit) {
                status[idx] |= kHasSafeExit;
            } else if (quiet == 0) {
                schedule(out, idx, static_cast<std::uint16_t>(worst_loss), kPendingLoss);
            }
        }
    }

    // Calls fn(pred_index) for every in-table position with a quiet legal move
    // into `idx`.
    template <class Fn>
    void for_each_predecessor(std::uint32_t idx, Cells& cells, Fn&& fn) const {
        const int n = layout.piece_count();
        TableLayout::Squares sq{};
        Color stm;
        layout.decode(idx, sq, stm);
        const Color mover = opposite(stm);
        for (int s = 0; s < n; ++s) cells[sq[s]] = layout.slot_cell(s);
        const int idle_king = sq[stm == Color::White ? 0 : layout.black_king_slot()];

        for (int j = 0; j < n; ++j) {
            const Cell cell = layout.slot_cell(j);
            if (color_of(cell) != mover) continue;
            const int from = sq[j];
            const Kind kind = kind_of(cell);
            auto consider = [&](int t) {
                if (kind == Kind::King && geo.kings_touch(t, idle_king)) return;
                if (kind == Kind::Pawn && geo.is_edge_rank(t)) return;
                cells[from] = kEmpty;
                cells[t] = cell;
                const bool ok = !detail::square_attacked(geo, cells, idle_king, mover);
                cells[t] = kEmpty;
                cells[from] = cell;
                if (!ok) return;
                TableLayout::Squares p = sq;
                p[j] = static_cast<std::uint8_t>(t);
                layout.canonicalize(p, j);
                fn(static_cast<std::uint32_t>(layout.index(p, mover)));
            };
            switch (kind) {
            case Kind::King:
                for (auto t : geo.king_targets(from)) {
                    if (cells[t] == kEmpty) consider(t);
                }
                break;
            case Kind::Knight:
                for (auto t : geo.knight_targets(from)) {
                    if (cells[t] == kEmpty) consider(t);
                }
                break;
            case Kind::Pawn: {
                const int t = geo.pawn_unpush(mover, from);
                if (t >= 0 && cells[t] == kEmpty) consider(t);
                break;
            }
            default: {
                std::uint64_t seen = 0;
                for (int dir = 0; dir < 8; ++dir) {
                    const bool diagonal = dir >= 4;
                    if (kind == Kind::Rook && diagonal) continue;
                    if (kind == Kind::Bishop && !diagonal) continue;
                    for (auto t : geo.ray(from, dir)) {
                        if (cells[t] != kEmpty) break;
                        if ((seen >> t) & 1u) continue;
                        seen |= std::uint64_t{1} << t;
                        consider(t);
                    }
                }
            }
            }
        }
        for (int s = 0; s < n; ++s) cells[sq[s]] = kEmpty;
    }

    void push(std::uint32_t idx, std::uint16_t depth) {
        if (buckets.size() <= depth) buckets.resize(depth + 1u);
        buckets[depth].push_back(idx);
    }

    void propagate() {
        Cells cells{};
        for (std::size_t d = 0; d < buckets.size(); ++d) {
            for (std::size_t i = 0; i < buckets[d].size(); ++i) {
                const std::uint32_t idx = buckets[d][i];
                const std::uint8_t s = status[idx] & kStatusMask;
                if (dtm[idx] != d) continue;
                const auto next = static_cast<std::uint16_t>(d + 1);
                if (s == kPendingWin) {
                    status[idx] = static_cast<std::uint8_t>((status[idx] & ~kStatusMask) | kWon);
                    for_each_predecessor(idx, cells, [&](std::uint32_t p) {
                        if ((status[p] & kStatusMask) != kUnknown) return;
                        if (--counter[p] != 0 || (status[p] & kHasSafeExit)) return;
                        const auto depth = std::max<std::uint16_t>(next, dtm[p]);
                        status[p] = static_cast<std::uint8_t>((status[p] & ~kStatusMask) | kPendingLoss);
                        dtm[p] = depth;
                        push(p, depth);
                    });
                } else if (s == kPendingLoss) {
                    status[idx] = static_cast<std::uint8_t>((status[idx] & ~kStatusMask) | kLost);
                    for_each_predecessor(idx, cells, [&](std::uint32_t p) {
                        const std::uint8_t ps = status[p] & kStatusMask;
                        if (ps == kUnknown || (ps == kPendingWin && dtm[p] > next)) {
                            status[p] = static_cast<std::uint8_t>((status[p] & ~kStatusMask) | kPendingWin);
                            dtm[p] = next;
                            push(p, next);
                        }
                    });
                }
            }
            std::vector<std::uint32_t>().swap(buckets[d]);
        }
    }
};

}  // namespace

SolvedTable build_table(const MaterialSignature& material, const BoardSpec& board, const SubtableLookup& subtables,
                        const TableOptions& options) {
    const TableLayout layout(board, material);
    const std::uint64_t n = layout.size();
    // status + counter + dtm + final byte, plus bucket headroom
    const std::uint64_t needed = n * 9;
    if (n > std::uint64_t{0xffffffff} || needed > options.memory_limit) {
        throw Error(ErrorCode::ResourceLimit, "building " + material.to_string() + " on " + board.to_string() +
                                                  " needs about " + std::to_string(needed >> 20) +
                                                  " MiB, limit is " + std::to_string(options.memory_limit >> 20) +
                                                  " MiB");
    }

    Builder b{layout, Geometry::of(board), {}, key_of(material), {}, {}, {}, {}};

    // Every material reachable by one capture and/or promotion.
    std::vector<MaterialSignature> children;
    const auto& pieces = material.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Piece mover = pieces[i];
        std::vector<std::vector<Piece>> variants;
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            if (pieces[j].color == mover.color || pieces[j].kind == Kind::King) continue;
            std::vector<Piece> v = pieces;
            v.erase(v.begin() + static_cast<long>(j));
            variants.push_back(v);
        }
        if (mover.kind == Kind::Pawn) {
            std::vector<std::vector<Piece>> promoted;
            auto with_pawn = variants;
            with_pawn.push_back(pieces);
            for (const auto& v : with_pawn) {
                for (Kind k : {Kind::Queen, Kind::Rook, Kind::Bishop, Kind::Knight}) {
                    std::vector<Piece> p = v;
                    auto it = std::find(p.begin(), p.end(), mover);
                    *it = Piece{mover.color, k};
                    promoted.push_back(p);
                }
            }
            variants.insert(variants.end(), promoted.begin(), promoted.end());
        }
        for (auto& v : variants) {
            MaterialSignature m(std::move(v));
            if (std::find(children.begin(), children.end(), m) == children.end()) children.push_back(m);
        }
    }
    std::sort(children.begin(), children.end());
    for (const auto& m : children) b.subtables.emplace_back(key_of(m), &subtables(m));

    b.status.assign(n, kUnknown);
    b.counter.assign(n, 0);
    b.dtm.assign(n, 0);

    const int workers = std::max(1, options.workers);
    std::vector<std::vector<std::pair<std::uint16_t, std::uint32_t>>> seeds(static_cast<std::size_t>(workers));
    if (workers == 1) {
        b.classify(0, n, seeds[0]);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t lo = n * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
            const std::uint64_t hi = n * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(workers);
            threads.emplace_back([&, lo, hi, w] { b.classify(lo, hi, seeds[static_cast<std::size_t>(w)]); });
        }
        for (auto& t : threads) t.join();
    }
    for (const auto& part : seeds) {
        for (const auto& [depth, idx] : part) b.push(idx, depth);
    }
    seeds.clear();

    b.propagate();

    std::vector<std::uint8_t> slots(n);
    std::vector<std::pair<std::uint32_t, std::uint16_t>> overflow;
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint8_t s = b.status[i] & kStatusMask;
        if (s == kIllegalPos) {
            slots[i] = SolvedTable::kIllegal;
            continue;
        }
        if (s != kWon && s != kLost) {
            slots[i] = SolvedTable::kDraw;
            continue;
        }
        const bool white_to_move = (i & 1u) == 0;
        const bool white_wins = (s == kWon) == white_to_move;
        const int d = b.dtm[i];
        slots[i] = static_cast<std::uint8_t>((white_wins ? SolvedTable::kWhiteWins : SolvedTable::kBlackWins) |
                                             (std::min(d, SolvedTable::kDtmCap) << 2));
        if (d >= SolvedTable::kDtmCap) overflow.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint16_t>(d));
    }
    return SolvedTable(board, material, std::move(slots), std::move(overflow));
}

Solver::Solver(Config config) : config_(std::move(config)) {}

std::string Solver::cache_file_name(const BoardSpec& board, const MaterialSignature& material) {
    return "itlb-v" + std::to_string(kTableFormatVersion) + "-" + std::to_string(board.files()) + "x" +
           std::to_string(board.ranks()) + "-" + std::string(to_string(board.topology())) + "-" +
           material.to_string() + ".tbl";
}

const SolvedTable& Solver::table(const MaterialSignature& material, const BoardSpec& board) {
    const Key key{board.to_string(), material.to_string()};
    {
        std::shared_lock lock(registry_mutex_);
        if (auto it = tables_.find(key); it != tables_.end()) return *it->second;
    }
    std::lock_guard build(build_mutex_);
    {
        std::shared_lock lock(registry_mutex_);
        if (auto it = tables_.find(key); it != tables_.end()) return *it->second;
    }
    if (material.count() > kMaxNativePieces) {
        throw Error(ErrorCode::TooManyPieces, material.to_string() + " has more than " +
                                                  std::to_string(kMaxNativePieces) + " pieces");
    }

    std::unique_ptr<SolvedTable> table;
    std::optional<std::filesystem::path> path;
    if (config_.cache_dir) {
        path = *config_.cache_dir / cache_file_name(board, material);
        std::error_code ec;
        if (std::filesystem::exists(*path, ec)) {
            try {
                auto loaded = std::make_unique<SolvedTable>(load_table(*path));
                if (loaded->board() == board && loaded->material() == material) table = std::move(loaded);
            } catch (const Error&) {
                // unreadable or stale cache entries are ignored, never rewritten
            }
        }
    }
    if (!table) {
        table = std::make_unique<SolvedTable>(build_table(
            material, board, [&](const MaterialSignature& m) -> const SolvedTable& { return this->table(m, board); },
            config_.table));
        if (path) {
            std::error_code ec;
            if (!std::filesystem::exists(*path, ec)) {
                std::filesystem::create_directories(path->parent_path(), ec);
                const auto tmp = path->string() + ".tmp";
                try {
                    save_table(*table, tmp);
                    std::filesystem::rename(tmp, *path, ec);
                } catch (const Error&) {
                    std::filesystem::remove(tmp, ec);
                }
            }
        }
    }
    std::unique_lock lock(registry_mutex_);
    auto& slot = tables_[key];
    slot = std::move(table);
    return *slot;
}

Outcome Solver::solve(const WholePosition& pos) {
    if (auto v = find_violation(pos.board(), pos.cells(), pos.to_move())) {
        throw Error(ErrorCode::IllegalPosition, v->invariant);
    }
    if (pos.piece_count() > kMaxNativePieces) {
        if (config_.external) return config_.external->evaluate(encode(pos));
        throw Error(ErrorCode::TooManyPieces, std::to_string(pos.piece_count()) + " pieces; native tables hold at most " +
                                                  std::to_string(kMaxNativePieces));
    }
    return table(MaterialSignature::of(pos), pos.board()).probe(pos);
}

std::vector<Move> Solver::principal_line(const WholePosition& pos, int max_plies) {
    std::vector<Move> line;
    WholePosition cur = pos;
    for (int ply = 0; ply < max_plies; ++ply) {
        const Outcome o = solve(cur);
        if (!o.winner() || *o.dtm == 0) break;
        const bool winning = *o.winner() == cur.to_move();
        std::optional<Move> chosen;
        for (const auto& m : legal_moves(cur)) {
            const Outcome child = solve(apply(cur, m));
            if (!child.winner() || *child.dtm != *o.dtm - 1) continue;
            if (winning == (*child.winner() == cur.to_move())) {
                chosen = m;
                break;
            }
        }
        if (!chosen) break;
        line.push_back(*chosen);
        cur = apply(cur, *chosen);
    }
    return line;
}

}  // namespace itlb
