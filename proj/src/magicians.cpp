#include "itlb/magicians.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <stdexcept>

#include "itlb/error.hpp"

namespace itlb::magicians {

namespace {

void check_columns(int n) {
    if (n < kMinColumns || n > kMaxColumns) {
        throw Error(ErrorCode::InvariantViolation,
                    "board needs 2..10 columns, got " + std::to_string(n));
    }
}

std::uint32_t row_mask(int n) { return (std::uint32_t{1} << n) - 1; }

std::uint32_t mask_of(const std::vector<Face>& row) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] == Face::Good) m |= std::uint32_t{1} << i;
    }
    return m;
}

std::string row_text(std::uint32_t mask, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += (mask >> i) & 1u ? 'X' : 'O';
    return s;
}

std::uint32_t parse_row(std::string_view text, std::size_t offset) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == 'X' || text[i] == 'x') {
            m |= std::uint32_t{1} << i;
        } else if (text[i] != 'O' && text[i] != 'o') {
            throw Error(ErrorCode::ParseError, "expected X or O", offset + i);
        }
    }
    return m;
}

}  // namespace

MagBoard::MagBoard(std::vector<Face> upper, std::vector<Face> lower) {
    if (upper.size() != lower.size()) throw Error(ErrorCode::InvariantViolation, "rows differ in length");
    check_columns(static_cast<int>(upper.size()));
    n_ = static_cast<int>(upper.size());
    upper_ = mask_of(upper);
    lower_ = mask_of(lower);
}

MagBoard MagBoard::from_masks(int columns, std::uint32_t upper, std::uint32_t lower) {
    check_columns(columns);
    MagBoard b;
    b.n_ = columns;
    b.upper_ = upper & row_mask(columns);
    b.lower_ = lower & row_mask(columns);
    return b;
}

MagBoard MagBoard::from_state(int columns, std::uint32_t state) {
    return from_masks(columns, state & row_mask(columns), state >> columns);
}

MagBoard MagBoard::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) throw Error(ErrorCode::ParseError, "expected 'upper/lower'", text.size());
    const std::string_view up = text.substr(0, slash);
    const std::string_view low = text.substr(slash + 1);
    if (up.size() != low.size()) throw Error(ErrorCode::ParseError, "rows differ in length", slash);
    if (up.size() < kMinColumns || up.size() > kMaxColumns) {
        throw Error(ErrorCode::ParseError, "rows need 2..10 cells", 0);
    }
    return from_masks(static_cast<int>(up.size()), parse_row(up, 0), parse_row(low, slash + 1));
}

int MagBoard::good_count() const { return std::popcount(upper_) + std::popcount(lower_); }

std::string MagBoard::to_string() const { return row_text(upper_, n_) + "/" + row_text(lower_, n_); }

std::string Swap::to_string() const { return "u" + std::to_string(upper_col) + " l" + std::to_string(lower_col); }

Swap Swap::parse(std::string_view text) {
    auto read = [&](std::size_t& pos, char tag) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos >= text.size() || (text[pos] != tag && text[pos] != tag - 32)) {
            throw Error(ErrorCode::ParseError, std::string("expected '") + tag + "'", pos);
        }
        ++pos;
        const std::size_t start = pos;
        int v = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') v = v * 10 + (text[pos++] - '0');
        if (pos == start || pos - start > 2) throw Error(ErrorCode::ParseError, "expected a column number", start);
        return v;
    };
    std::size_t pos = 0;
    Swap s;
    s.upper_col = read(pos, 'u');
    s.lower_col = read(pos, 'l');
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos != text.size()) throw Error(ErrorCode::ParseError, "trailing characters", pos);
    return s;
}

namespace {

// Face the card arriving at `col` ends up with, given the row it joins.
bool lands_good(std::uint32_t row, int n, int col, bool good) {
    if (col == 0 || col == n - 1) return good;
    const bool left = (row >> (col - 1)) & 1u;
    const bool right = (row >> (col + 1)) & 1u;
    if (left == right && left != good) return left;
    return good;
}

std::uint32_t swap_state(std::uint32_t state, int n, int u, int l) {
    const std::uint32_t upper = state & row_mask(n);
    const std::uint32_t lower = state >> n;
    const bool from_upper = (upper >> u) & 1u;
    const bool from_lower = (lower >> l) & 1u;
    const bool new_upper = lands_good(upper, n, u, from_lower);
    const bool new_lower = lands_good(lower, n, l, from_upper);
    const std::uint32_t up = (upper & ~(std::uint32_t{1} << u)) | (std::uint32_t{new_upper} << u);
    const std::uint32_t low = (lower & ~(std::uint32_t{1} << l)) | (std::uint32_t{new_lower} << l);
    return up | (low << n);
}

}  // namespace

MagBoard apply_swap(const MagBoard& b, Swap s) {
    const int n = b.columns();
    if (s.upper_col < 0 || s.upper_col >= n || s.lower_col < 0 || s.lower_col >= n) {
        throw Error(ErrorCode::IndexOutOfRange, "swap " + s.to_string() + " is outside a " + std::to_string(n) +
                                                    "-column board");
    }
    return MagBoard::from_state(n, swap_state(b.state(), n, s.upper_col, s.lower_col));
}

std::vector<Swap> all_swaps(int columns) {
    std::vector<Swap> out;
    for (int u = 0; u < columns; ++u) {
        for (int l = 0; l < columns; ++l) out.push_back({u, l});
    }
    return out;
}

namespace {

// Forward BFS from b; returns parents for path recovery.
std::optional<std::vector<Swap>> bfs_line(const MagBoard& b) {
    const int n = b.columns();
    const std::uint32_t goal = row_mask(2 * n);
    const std::uint32_t start = b.state();
    if (start == goal) return std::vector<Swap>{};
    std::vector<std::int32_t> parent(std::size_t{1} << (2 * n), -1);
    std::vector<std::uint8_t> via(parent.size());
    parent[start] = static_cast<std::int32_t>(start);
    std::deque<std::uint32_t> queue{start};
    while (!queue.empty()) {
        const std::uint32_t s = queue.front();
        queue.pop_front();
        for (int u = 0; u < n; ++u) {
            for (int l = 0; l < n; ++l) {
                const std::uint32_t t = swap_state(s, n, u, l);
                if (parent[t] >= 0) continue;
                parent[t] = static_cast<std::int32_t>(s);
                via[t] = static_cast<std::uint8_t>(u * n + l);
                if (t == goal) {
                    std::vector<Swap> line;
                    for (std::uint32_t x = goal; x != start; x = static_cast<std::uint32_t>(parent[x])) {
                        line.push_back({via[x] / n, via[x] % n});
                    }
                    std::reverse(line.begin(), line.end());
                    return line;
                }
                queue.push_back(t);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<int> perfect_value(const MagBoard& b) {
    auto line = bfs_line(b);
    if (!line) return std::nullopt;
    return static_cast<int>(line->size());
}

std::vector<Swap> perfect_line(const MagBoard& b) { return bfs_line(b).value_or(std::vector<Swap>{}); }

std::vector<int> perfect_values(int columns) {
    check_columns(columns);
    const int n = columns;
    const std::size_t states = std::size_t{1} << (2 * n);
    // Reverse adjacency, built once.
    std::vector<std::uint32_t> offsets(states + 1, 0);
    for (std::uint32_t s = 0; s < states; ++s) {
        for (int u = 0; u < n; ++u) {
            for (int l = 0; l < n; ++l) ++offsets[swap_state(s, n, u, l) + 1];
        }
    }
    for (std::size_t i = 0; i < states; ++i) offsets[i + 1] += offsets[i];
    std::vector<std::uint32_t> preds(offsets[states]);
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t s = 0; s < states; ++s) {
        for (int u = 0; u < n; ++u) {
            for (int l = 0; l < n; ++l) preds[fill[swap_state(s, n, u, l)]++] = s;
        }
    }
    std::vector<int> dist(states, -1);
    const std::uint32_t goal = row_mask(2 * n);
    dist[goal] = 0;
    std::deque<std::uint32_t> queue{goal};
    while (!queue.empty()) {
        const std::uint32_t t = queue.front();
        queue.pop_front();
        for (std::uint32_t i = offsets[t]; i < offsets[t + 1]; ++i) {
            const std::uint32_t s = preds[i];
            if (dist[s] >= 0) continue;
            dist[s] = dist[t] + 1;
            queue.push_back(s);
        }
    }
    return dist;
}

std::string_view to_string(Side s) { return s == Side::Good ? "Good" : "Bad"; }

std::uint32_t friendly_mask(std::uint32_t good_mask, int columns, Side side) {
    return side == Side::Good ? good_mask & row_mask(columns) : ~good_mask & row_mask(columns);
}

int working_pairs(std::uint32_t friendly, int columns) {
    int count = 0;
    for (int i = 0; i + 2 < columns; ++i) {
        if (((friendly >> i) & 1u) && ((friendly >> (i + 2)) & 1u)) ++count;
    }
    return count;
}

int pair_distance(std::uint32_t friendly, int columns) {
    if (columns < 3) throw Error(ErrorCode::RowTooShort, "a working pair needs at least 3 cells");
    int best = 2;
    for (int i = 0; i + 2 < columns; ++i) {
        const int missing = !((friendly >> i) & 1u) + !((friendly >> (i + 2)) & 1u);
        best = std::min(best, missing);
    }
    return best;
}

int pair_distance(std::string_view row) {
    return pair_distance(parse_row(row, 0), static_cast<int>(row.size()));
}

std::int64_t row_score(std::uint32_t friendly, int columns, const Weights& w) {
    std::int64_t score = w.friendly * std::popcount(friendly & row_mask(columns)) * kScoreUnit;
    if (columns >= 3) {
        score += w.working_pair * working_pairs(friendly, columns) * kScoreUnit;
        score -= w.pair_distance * pair_distance(friendly, columns) * kScoreUnit;
    }
    for (int i = 0; i < columns; ++i) {
        if (!((friendly >> i) & 1u)) continue;
        const int k = std::abs(2 * i - (columns - 1));
        score += w.centrality * kScoreUnit / (2 + k);
    }
    return score;
}

double row_value(std::string_view row, const Weights& w) {
    return static_cast<double>(row_score(parse_row(row, 0), static_cast<int>(row.size()), w)) / kScoreUnit;
}

std::int64_t heuristic_score(const MagBoard& b, Side side, const Weights& w) {
    const int n = b.columns();
    return row_score(friendly_mask(b.upper_mask(), n, side), n, w) +
           row_score(friendly_mask(b.lower_mask(), n, side), n, w);
}

double heuristic_value(const MagBoard& b, Side side, const Weights& w) {
    return static_cast<double>(heuristic_score(b, side, w)) / kScoreUnit;
}

std::vector<Swap> argmax_swaps(const MagBoard& b, Side side, const Weights& w) {
    std::vector<Swap> best;
    std::int64_t best_score = 0;
    for (const Swap s : all_swaps(b.columns())) {
        const std::int64_t v = heuristic_score(apply_swap(b, s), side, w);
        if (best.empty() || v > best_score) {
            best = {s};
            best_score = v;
        } else if (v == best_score) {
            best.push_back(s);
        }
    }
    return best;
}

Swap best_swap(const MagBoard& b, Side side, Rng& rng, const Weights& w) {
    const auto options = argmax_swaps(b, side, w);
    return options[rng.below(options.size())];
}

std::string induced_row_order(int columns, const Weights& w) {
    // One representative per mirror pair: the lexicographically larger text.
    std::map<std::string, std::int64_t> rows;
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << columns); ++m) {
        std::string text = row_text(m, columns);
        std::string mirror(text.rbegin(), text.rend());
        rows.emplace(std::max(text, mirror), row_score(m, columns, w));
    }
    std::vector<std::pair<std::int64_t, std::string>> sorted;
    for (const auto& [text, score] : rows) sorted.emplace_back(score, text);
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0) out += sorted[i].first == sorted[i - 1].first ? " = " : " < ";
        out += sorted[i].second;
    }
    return out;
}

std::vector<MagBoard> all_boards(int columns) {
    check_columns(columns);
    std::vector<MagBoard> out;
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << (2 * columns)); ++s) {
        out.push_back(MagBoard::from_state(columns, s));
    }
    return out;
}

namespace {

bool violates(std::int64_t u, std::int64_t v, std::int64_t x) { return u >= v && v >= x && !(u >= x); }

}  // namespace

TransitivityReport verify_transitivity(const std::vector<MagBoard>& boards, Side side) {
    std::vector<std::int64_t> scores;
    for (const auto& b : boards) scores.push_back(heuristic_score(b, side));
    TransitivityReport r;
    r.boards = boards.size();
    for (const auto u : scores) {
        for (const auto v : scores) {
            for (const auto x : scores) {
                ++r.triples;
                if (violates(u, v, x)) ++r.violations;
            }
        }
    }
    return r;
}

TransitivityReport verify_transitivity_sampled(const std::vector<MagBoard>& boards, std::uint64_t triples, Rng& rng,
                                               Side side) {
    TransitivityReport r;
    r.boards = boards.size();
    if (boards.empty()) return r;
    for (std::uint64_t i = 0; i < triples; ++i) {
        const auto& u = boards[rng.below(boards.size())];
        const auto& v = boards[rng.below(boards.size())];
        const auto& x = boards[rng.below(boards.size())];
        ++r.triples;
        if (violates(heuristic_score(u, side), heuristic_score(v, side), heuristic_score(x, side))) ++r.violations;
    }
    return r;
}

std::string_view to_string(GameResult r) {
    switch (r) {
    case GameResult::GoodWins: return "GoodWins";
    case GameResult::BadWins: return "BadWins";
    case GameResult::Draw: return "Draw";
    }
    return "?";
}

Game::Game(MagBoard start) : board_(start) {
    record_.boards.push_back(start);
    settle();
    if (result_) record_.result = *result_;
}

void Game::settle() {
    if (board_.all_good()) {
        result_ = GameResult::GoodWins;
        return;
    }
    if (board_.all_bad()) {
        result_ = GameResult::BadWins;
        return;
    }
    const std::uint64_t key = (std::uint64_t{board_.state()} << 1) | (to_move_ == Side::Bad ? 1u : 0u);
    if (!seen_.insert(key).second) result_ = GameResult::Draw;
}

void Game::play(Swap s) {
    if (result_) throw Error(ErrorCode::IllegalMove, "the game is over");
    board_ = apply_swap(board_, s);
    to_move_ = to_move_ == Side::Good ? Side::Bad : Side::Good;
    record_.moves.push_back(s);
    record_.boards.push_back(board_);
    settle();
    if (result_) record_.result = *result_;
}

GameRecord ai_match(const MagBoard& start, Rng& rng, const Weights& w) {
    Game game(start);
    while (!game.over()) game.play(best_swap(game.board(), game.to_move(), rng, w));
    GameRecord rec = game.record();
    rec.result = *game.result();
    return rec;
}

std::vector<Problem> reconstructed_problems() {
    return {
        {"three-vs-three", "three good magicians against three bad ones", MagBoard::parse("XOX/OXO")},
        // Two good against five bad cannot fill a 2xN board; the nearest full board has six bad.
        {"two-good", "two good magicians, one working pair, against six bad ones", MagBoard::parse("XOXO/OOOO")},
    };
}

}  // namespace itlb::magicians
