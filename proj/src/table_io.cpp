#include <zlib.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "itlb/solver.hpp"

namespace itlb {

namespace {

constexpr char kMagic[4] = {'I', 'T', 'L', 'B'};

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf.insert(buf.end(), b, b + n);
    }
    template <class T>
    void le(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> buf;
};

class Reader {
public:
    Reader(const std::vector<std::uint8_t>& b, std::size_t end) : buf(b), limit(end) {}
    template <class T>
    T le() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(buf[pos + i]) << (8 * i));
        pos += sizeof(T);
        return v;
    }
    const std::uint8_t* take(std::size_t n) {
        need(n);
        const std::uint8_t* p = buf.data() + pos;
        pos += n;
        return p;
    }
    std::size_t remaining() const { return limit - pos; }

private:
    void need(std::size_t n) const {
        if (limit - pos < n) throw Error(ErrorCode::VersionMismatch, "table header inconsistent with its length");
    }
    const std::vector<std::uint8_t>& buf;
    std::size_t limit;
    std::size_t pos = 0;
};

std::uint32_t crc_of(const std::uint8_t* data, std::size_t n) {
    uLong crc = crc32(0L, Z_NULL, 0);
    while (n > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
        crc = crc32(crc, data, chunk);
        data += chunk;
        n -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

void save_table(const SolvedTable& table, const std::filesystem::path& path) {
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.le<std::uint16_t>(kTableFormatVersion);
    w.le<std::uint8_t>(static_cast<std::uint8_t>(table.board().files()));
    w.le<std::uint8_t>(static_cast<std::uint8_t>(table.board().ranks()));
    w.le<std::uint8_t>(static_cast<std::uint8_t>(table.board().topology()));
    const auto& pieces = table.material().pieces();
    w.le<std::uint8_t>(static_cast<std::uint8_t>(pieces.size()));
    for (const auto& p : pieces) w.le<std::uint8_t>(cell_of(p));
    w.le<std::uint64_t>(table.size());
    w.bytes(table.slots().data(), table.slots().size());
    w.le<std::uint32_t>(static_cast<std::uint32_t>(table.overflow().size()));
    for (const auto& [idx, dtm] : table.overflow()) {
        w.le<std::uint32_t>(idx);
        w.le<std::uint16_t>(dtm);
    }
    w.le<std::uint32_t>(crc_of(w.buf.data(), w.buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(w.buf.data()), static_cast<std::streamsize>(w.buf.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

SolvedTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::IoError, "read failed for " + path.string());

    constexpr std::size_t kMinSize = 4 + 2 + 3 + 1 + 8 + 4 + 4;
    if (buf.size() < kMinSize) throw Error(ErrorCode::ChecksumMismatch, path.string() + " is truncated");
    const std::size_t body = buf.size() - 4;
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i) stored |= static_cast<std::uint32_t>(buf[body + static_cast<std::size_t>(i)]) << (8 * i);
    if (stored != crc_of(buf.data(), body)) throw Error(ErrorCode::ChecksumMismatch, path.string() + " fails its CRC32");

    Reader r(buf, body);
    if (std::memcmp(r.take(4), kMagic, 4) != 0) throw Error(ErrorCode::VersionMismatch, "bad magic in " + path.string());
    const auto version = r.le<std::uint16_t>();
    if (version != kTableFormatVersion) {
        throw Error(ErrorCode::VersionMismatch, "table format " + std::to_string(version) + ", expected " +
                                                    std::to_string(kTableFormatVersion));
    }
    const int files = r.le<std::uint8_t>();
    const int ranks = r.le<std::uint8_t>();
    const int topo = r.le<std::uint8_t>();
    if (topo > 2) throw Error(ErrorCode::VersionMismatch, "unknown topology code");
    std::optional<BoardSpec> board;
    try {
        board = BoardSpec(files, ranks, static_cast<Topology>(topo));
    } catch (const Error& e) {
        throw Error(ErrorCode::VersionMismatch, e.what());
    }
    const int count = r.le<std::uint8_t>();
    std::vector<Piece> pieces;
    for (int i = 0; i < count; ++i) {
        const Cell c = r.le<std::uint8_t>();
        if (c == kEmpty || c > 2 * kKindCount) throw Error(ErrorCode::VersionMismatch, "bad piece code in header");
        pieces.push_back(piece_of(c));
    }
    std::optional<MaterialSignature> material;
    try {
        material = MaterialSignature(pieces);
        if (material->count() > kMaxNativePieces) throw Error(ErrorCode::VersionMismatch, "too many pieces in header");
    } catch (const Error& e) {
        throw Error(ErrorCode::VersionMismatch, e.what());
    }
    const auto positions = r.le<std::uint64_t>();
    if (positions != TableLayout(*board, *material).size()) {
        throw Error(ErrorCode::VersionMismatch, "position count does not match " + material->to_string() + " on " +
                                                    board->to_string());
    }
    const std::uint8_t* data = r.take(positions);
    std::vector<std::uint8_t> slots(data, data + positions);
    const auto overflow_count = r.le<std::uint32_t>();
    std::vector<std::pair<std::uint32_t, std::uint16_t>> overflow;
    for (std::uint32_t i = 0; i < overflow_count; ++i) {
        const auto idx = r.le<std::uint32_t>();
        const auto dtm = r.le<std::uint16_t>();
        overflow.emplace_back(idx, dtm);
    }
    if (r.remaining() != 0) throw Error(ErrorCode::VersionMismatch, "trailing bytes in " + path.string());
    return SolvedTable(*board, *material, std::move(slots), std::move(overflow));
}

}  // namespace itlb
