#include <doctest.h>

#include <map>
#include <set>

#include "itlb/board.hpp"
#include "itlb/rng.hpp"
#include "naive_movegen.hpp"

using namespace itlb;

namespace {

const BoardSpec k8x8{8, 8, Topology::Planar};

HalfPosition half(std::string_view text, const BoardSpec& b = k8x8) { return decode_half(text, b); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("BoardSpec bounds and text form") {
    CHECK(BoardSpec(3, 3).squares() == 9);
    CHECK(BoardSpec(8, 5, Topology::Cylinder).to_string() == "8x5,cylinder");
    CHECK(BoardSpec::parse("4x4:torus") == BoardSpec(4, 4, Topology::Torus));
    CHECK(BoardSpec::parse("6x7") == BoardSpec(6, 7, Topology::Planar));
    CHECK(code_of([] { BoardSpec(2, 8); }) == ErrorCode::InvariantViolation);
    CHECK(code_of([] { BoardSpec(8, 9); }) == ErrorCode::InvariantViolation);
    CHECK(code_of([] { BoardSpec::parse("8by8"); }) == ErrorCode::ParseError);
    CHECK_FALSE(BoardSpec(5, 5, Topology::Torus).allows_pawns());
    CHECK(BoardSpec(5, 5, Topology::Cylinder).wraps_files());
    CHECK_FALSE(BoardSpec(5, 5, Topology::Cylinder).wraps_ranks());
}

TEST_CASE("superpose examples") {
    const WholePosition p = superpose(half("W:Ke1"), half("B:Ke8"));
    CHECK(p.to_move() == Color::White);
    CHECK(p.piece_count() == 2);
    CHECK(code_of([] { superpose(half("W:Ke1"), half("B:Ke2")); }) == ErrorCode::KingsAdjacent);
    CHECK(code_of([] { superpose(half("W:Ke1,Qe6"), half("B:Ke8")); }) == ErrorCode::IllegalCheck);
    CHECK(code_of([] { superpose(half("W:Ke1,Qe5"), half("B:Ke8,Re5")); }) == ErrorCode::Overlap);
    CHECK(code_of([] { superpose(half("W:Ke1"), half("B:Kc3", BoardSpec(4, 4))); }) == ErrorCode::BoardMismatch);
    CHECK_FALSE(try_superpose(half("W:Ke1"), half("B:Ke2")).has_value());
    // White to move may stand in check.
    CHECK_NOTHROW(superpose(half("W:Ke1"), half("B:Ke8,Qe5")));
}

TEST_CASE("kings adjacent across a wrapped seam") {
    const BoardSpec cyl(8, 8, Topology::Cylinder);
    CHECK(code_of([&] { superpose(half("W:Ka1", cyl), half("B:Kh2", cyl)); }) == ErrorCode::KingsAdjacent);
    CHECK_NOTHROW(superpose(half("W:Ka1"), half("B:Kh2")));
    const BoardSpec torus(8, 8, Topology::Torus);
    CHECK(code_of([&] { superpose(half("W:Ka1", torus), half("B:Kh8", torus)); }) == ErrorCode::KingsAdjacent);
}

TEST_CASE("half-position invariants") {
    CHECK(code_of([] { half("B:Ke8,ke7"); }) == ErrorCode::InvariantViolation);
    try {
        half("B:Ke8,ke7");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("one-King") != std::string::npos);
    }
    CHECK(code_of([] { half("W:Ke1,Pa8"); }) == ErrorCode::InvariantViolation);
    CHECK(code_of([] { half("W:Ke1,Pa1"); }) == ErrorCode::InvariantViolation);
    CHECK(code_of([] { half("W:Ke1,Qe1"); }) == ErrorCode::InvariantViolation);
    CHECK(code_of([] { half("W:Qe1"); }) == ErrorCode::InvariantViolation);
    CHECK(code_of([] { half("W:Kc1,Pb2", BoardSpec(4, 4, Topology::Torus)); }) == ErrorCode::InvariantViolation);
    CHECK_NOTHROW(half("W:Kc1,Pb2", BoardSpec(4, 4, Topology::Cylinder)));
}

TEST_CASE("codec round trip and errors") {
    const HalfPosition h = half("W:Ke1,Qd1");
    CHECK(encode(h) == "W:Ke1,Qd1");
    CHECK(decode_half(encode(h), k8x8) == h);
    CHECK(encode(half("W:Qd1,Ke1")) == "W:Ke1,Qd1");
    CHECK(encode(half("W:ke1,qd1")) == "W:Ke1,Qd1");

    const WholePosition p = decode_whole("W:Kf6,Qg6 | B:Kh8 | wtm | board=8x8,planar");
    CHECK(encode(p) == "W:Kf6,Qg6 | B:Kh8 | wtm | board=8x8,planar");
    CHECK(decode_whole(encode(p)) == p);

    try {
        half("W:Kz9");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        REQUIRE(e.offset().has_value());
        CHECK(*e.offset() == 3);
    }
    CHECK(code_of([] { half("X:Ke1"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { half("W:Ke1,"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { decode_whole("W:Ke1 | B:Ke8 | xtm | board=8x8,planar"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { decode_whole("W:Ka1 | B:Kd4 | wtm | board=4x4,planar", k8x8); }) ==
          ErrorCode::BoardMismatch);
    CHECK(code_of([] { decode_whole("W:Ke1 | B:Ke2 | wtm | board=8x8,planar"); }) == ErrorCode::InvariantViolation);
}

TEST_CASE("codec round trip on random legal values") {
    Rng rng(11);
    const std::vector<std::vector<Kind>> materials{
        {Kind::King}, {Kind::King, Kind::Queen}, {Kind::King, Kind::Pawn}, {Kind::King, Kind::Rook, Kind::Knight}};
    const std::vector<BoardSpec> boards{k8x8, BoardSpec(5, 4, Topology::Cylinder), BoardSpec(6, 6, Topology::Torus)};
    int wholes = 0;
    for (int i = 0; i < 10000; ++i) {
        const BoardSpec& b = boards[static_cast<std::size_t>(i) % boards.size()];
        auto mw = materials[rng.below(materials.size())];
        auto mb = materials[rng.below(materials.size())];
        if (!b.allows_pawns()) {
            mw = {Kind::King, Kind::Bishop};
            mb = {Kind::King};
        }
        const HalfPosition w = random_half(mw, Color::White, b, rng);
        const HalfPosition k = random_half(mb, Color::Black, b, rng);
        REQUIRE(decode_half(encode(w), b) == w);
        REQUIRE(decode_half(encode(k), b) == k);
        if (auto p = try_superpose(w, k)) {
            ++wholes;
            REQUIRE(decode_whole(encode(*p)) == *p);
            // Superposition output always satisfies every invariant.
            REQUIRE_FALSE(find_violation(b, p->cells(), p->to_move()).has_value());
            REQUIRE_FALSE(testing::naive_in_check(b, p->cells(), Color::Black));
        }
    }
    CHECK(wholes > 5000);
}

TEST_CASE("random_half is uniform for a lone king") {
    const BoardSpec b(3, 3);
    Rng rng(2024);
    std::map<int, int> counts;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto h = random_half(std::vector<Kind>{Kind::King}, Color::White, b, rng);
        ++counts[index_of(b, h.placements()[0].square)];
    }
    REQUIRE(counts.size() == 9);
    double chi2 = 0;
    for (const auto& [sq, c] : counts) {
        const double e = n / 9.0;
        chi2 += (c - e) * (c - e) / e;
    }
    // 8 degrees of freedom, p = 0.01 critical value.
    CHECK(chi2 < 20.09);
}

TEST_CASE("random_half keeps pawns off edge ranks and is deterministic") {
    Rng rng(5);
    const std::vector<Kind> kp{Kind::King, Kind::Pawn};
    for (int i = 0; i < 100000; ++i) {
        const auto h = random_half(kp, Color::White, k8x8, rng);
        for (const auto& p : h.placements()) {
            if (p.piece.kind == Kind::Pawn) REQUIRE((p.square.rank != 0 && p.square.rank != 7));
        }
    }
    Rng a(77), b(77);
    for (int i = 0; i < 100; ++i) {
        CHECK(random_half(kp, Color::Black, k8x8, a) == random_half(kp, Color::Black, k8x8, b));
    }
}

TEST_CASE("random_half rejects unsatisfiable material") {
    Rng rng(1);
    const std::vector<Kind> many{Kind::King, Kind::Queen, Kind::Queen, Kind::Queen, Kind::Queen, Kind::Queen,
                                 Kind::Queen, Kind::Queen, Kind::Queen, Kind::Queen};
    CHECK(code_of([&] { random_half(many, Color::White, BoardSpec(3, 3), rng); }) == ErrorCode::Unsatisfiable);
    const std::vector<Kind> pawn{Kind::King, Kind::Pawn};
    CHECK(code_of([&] { random_half(pawn, Color::White, BoardSpec(4, 4, Topology::Torus), rng); }) ==
          ErrorCode::Unsatisfiable);
    const std::vector<Kind> no_king{Kind::Queen};
    CHECK(code_of([&] { random_half(no_king, Color::White, k8x8, rng); }) == ErrorCode::InvariantViolation);
}

TEST_CASE("rng substreams are reproducible and distinct") {
    Rng a = Rng::substream(9, 3), b = Rng::substream(9, 3), c = Rng::substream(9, 4);
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
    Rng r(1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto v = r.below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}
