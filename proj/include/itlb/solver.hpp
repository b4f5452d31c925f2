#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itlb/board.hpp"
#include "itlb/movegen.hpp"

namespace itlb {

enum class Verdict : std::uint8_t { WhiteWins, BlackWins, Draw };

std::string_view to_string(Verdict v);

// Game-theoretic value. dtm counts plies to mate under optimal play (shortest
// for the winner, longest for the loser); it is 0 when the side to move is
// already checkmated and absent for draws.
struct Outcome {
    Verdict verdict = Verdict::Draw;
    std::optional<int> dtm;

    static Outcome draw() { return {}; }
    static Outcome win(Color winner, int dtm) {
        return {winner == Color::White ? Verdict::WhiteWins : Verdict::BlackWins, dtm};
    }
    std::optional<Color> winner() const {
        if (verdict == Verdict::Draw) return std::nullopt;
        return verdict == Verdict::WhiteWins ? Color::White : Color::Black;
    }
    // "WhiteWins dtm=3" or "Draw"
    std::string to_string() const;
    static Outcome parse(std::string_view text);

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Values ignore the 50-move rule and repetition counters; every report states it.
inline constexpr std::string_view kDrawConvention =
    "pure game-theoretic values: no 50-move rule, no repetition counters; positions without a forced mate are draws";

constexpr int kMaxNativePieces = 5;

// Multiset of (color, kind), canonical order: White then Black, King first,
// then Queen, Rook, Bishop, Knight, Pawn.
class MaterialSignature {
public:
    MaterialSignature() = default;
    explicit MaterialSignature(std::vector<Piece> pieces);

    static MaterialSignature of(const WholePosition& pos);
    static MaterialSignature of(std::span<const Kind> white, std::span<const Kind> black);
    // "KQvK"
    static MaterialSignature parse(std::string_view text);

    const std::vector<Piece>& pieces() const { return pieces_; }
    int count() const { return static_cast<int>(pieces_.size()); }
    std::string to_string() const;
    // Colors exchanged.
    MaterialSignature mirrored() const;

    friend auto operator<=>(const MaterialSignature&, const MaterialSignature&) = default;

private:
    std::vector<Piece> pieces_;
};

// Position <-> slot bijection: lexicographic square tuple in canonical piece
// order, identical pieces in ascending square order, side-to-move as low bit.
class TableLayout {
public:
    static constexpr int kMaxPieces = kMaxNativePieces;
    using Squares = std::array<std::uint8_t, kMaxPieces>;

    TableLayout(const BoardSpec& board, const MaterialSignature& material);

    const BoardSpec& board() const { return board_; }
    const MaterialSignature& material() const { return material_; }
    std::uint64_t size() const { return size_; }
    int piece_count() const { return n_; }
    Cell slot_cell(int slot) const { return cells_[slot]; }
    int black_king_slot() const { return black_king_; }

    std::uint64_t index(const Squares& sq, Color stm) const;
    // False when squares overlap or identical pieces are out of order.
    bool decode(std::uint64_t index, Squares& sq, Color& stm) const;
    // Sort the squares of identical pieces that share the group of `slot`.
    void canonicalize(Squares& sq, int slot) const;
    // Caller guarantees the cells carry exactly this material.
    std::uint64_t index_of_cells(const Cells& cells, Color stm) const;

private:
    BoardSpec board_;
    MaterialSignature material_;
    int n_ = 0;
    int black_king_ = 0;
    std::uint64_t size_ = 0;
    std::array<Cell, kMaxPieces> cells_{};
    std::array<int, kMaxPieces> group_begin_{};
    std::array<int, kMaxPieces> group_end_{};
};

inline constexpr std::uint16_t kTableFormatVersion = 1;

// One byte per slot: bits 0-1 verdict (0 illegal, 1 draw, 2 White wins,
// 3 Black wins), bits 2-7 dtm capped at 63; 63 means "see overflow list".
class SolvedTable {
public:
    static constexpr std::uint8_t kIllegal = 0;
    static constexpr std::uint8_t kDraw = 1;
    static constexpr std::uint8_t kWhiteWins = 2;
    static constexpr std::uint8_t kBlackWins = 3;
    static constexpr int kDtmCap = 63;

    SolvedTable(const BoardSpec& board, const MaterialSignature& material, std::vector<std::uint8_t> slots,
                std::vector<std::pair<std::uint32_t, std::uint16_t>> overflow);

    const BoardSpec& board() const { return layout_.board(); }
    const MaterialSignature& material() const { return layout_.material(); }
    const TableLayout& layout() const { return layout_; }
    std::uint64_t size() const { return slots_.size(); }

    // Throws TableMismatch when board or material differ, IllegalPosition if
    // the slot is not a legal position.
    Outcome probe(const WholePosition& pos) const;
    bool legal(std::uint64_t index) const { return (slots_[index] & 3u) != kIllegal; }
    Outcome at(std::uint64_t index) const;
    std::optional<WholePosition> position_at(std::uint64_t index) const;

    const std::vector<std::uint8_t>& slots() const { return slots_; }
    const std::vector<std::pair<std::uint32_t, std::uint16_t>>& overflow() const { return overflow_; }

private:
    TableLayout layout_;
    std::vector<std::uint8_t> slots_;
    std::vector<std::pair<std::uint32_t, std::uint16_t>> overflow_;  // sorted by index
};

struct TableOptions {
    // Peak working memory allowed while building, in bytes.
    std::uint64_t memory_limit = std::uint64_t{3} << 30;
    // Threads for the classification pass; results do not depend on it.
    int workers = 1;
};

using SubtableLookup = std::function<const SolvedTable&(const MaterialSignature&)>;

// Retrograde fixpoint over every legal position of the material. Captures
// and promotions are resolved through `subtables`.
SolvedTable build_table(const MaterialSignature& material, const BoardSpec& board, const SubtableLookup& subtables,
                        const TableOptions& options = {});

void save_table(const SolvedTable& table, const std::filesystem::path& path);
SolvedTable load_table(const std::filesystem::path& path);

// Adapter for positions beyond the native table limit: given an encoded
// WholePosition, return its Outcome.
class ExternalOracle {
public:
    virtual ~ExternalOracle() = default;
    virtual Outcome evaluate(std::string_view position_text) = 0;
};

// Table registry plus on-disk cache. Thread-safe; built tables are immutable.
class Solver {
public:
    struct Config {
        std::optional<std::filesystem::path> cache_dir;
        TableOptions table;
        std::shared_ptr<ExternalOracle> external;
    };

    Solver() : Solver(Config{}) {}
    explicit Solver(Config config);

    Outcome solve(const WholePosition& pos);
    const SolvedTable& table(const MaterialSignature& material, const BoardSpec& board);

    // Optimal play from pos until mate; empty for draws.
    std::vector<Move> principal_line(const WholePosition& pos, int max_plies = 400);

    // Cache file name for a table: content-addressed by board, material and
    // format version.
    static std::string cache_file_name(const BoardSpec& board, const MaterialSignature& material);

    const Config& config() const { return config_; }

private:
    using Key = std::pair<std::string, std::string>;

    Config config_;
    std::shared_mutex registry_mutex_;
    std::recursive_mutex build_mutex_;
    std::map<Key, std::unique_ptr<SolvedTable>> tables_;
};

}  // namespace itlb
