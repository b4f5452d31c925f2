#include <doctest.h>

#include "itlb/intransitivity.hpp"
#include "itlb/rng.hpp"
#include "test_env.hpp"

using namespace itlb;
using testing::shared_solver;

namespace {

const BoardSpec k8x8{8, 8, Topology::Planar};
const BoardSpec k3x3{3, 3, Topology::Planar};

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

std::vector<Kind> kinds(std::string_view text) { return parse_material(text); }

CycleCertificate small_certificate() {
    ExhaustiveParams p;
    p.board = k3x3;
    p.slots = {kinds("KR"), kinds("KR"), kinds("KR"), kinds("KR")};
    const auto r = exhaustive_search(shared_solver(), p);
    REQUIRE(r.certificate.has_value());
    return *r.certificate;
}

}  // namespace

TEST_CASE("beats examples") {
    Solver& s = shared_solver();
    CHECK(beats(s, half("W:Kf6,Qg6"), half("B:Kh8")) == BeatsResult::XBeats);
    CHECK(beats(s, half("B:Kh8"), half("W:Kf6,Qg6")) == BeatsResult::YBeats);
    CHECK(beats(s, half("W:Ke1"), half("B:Ke8")) == BeatsResult::Neither);
    CHECK(code_of([&] { beats(s, half("W:Ke1"), half("B:Ke2")); }) == ErrorCode::KingsAdjacent);
    CHECK(code_of([&] { beats(s, half("W:Ke1"), half("W:Ke8")); }) == ErrorCode::InvariantViolation);
}

TEST_CASE("beats is antisymmetric") {
    Solver& s = shared_solver();
    const BoardSpec b(4, 4);
    Rng rng(12);
    int n = 0;
    while (n < 10000) {
        const HalfPosition x = random_half(kinds("KQ"), Color::White, b, rng);
        const HalfPosition y = random_half(kinds(rng.below(2) ? "KR" : "K"), Color::Black, b, rng);
        if (!try_superpose(x, y)) continue;
        const BeatsResult xy = beats(s, x, y);
        const BeatsResult yx = beats(s, y, x);
        REQUIRE((xy == BeatsResult::XBeats) == (yx == BeatsResult::YBeats));
        REQUIRE((xy == BeatsResult::YBeats) == (yx == BeatsResult::XBeats));
        REQUIRE((xy == BeatsResult::Neither) == (yx == BeatsResult::Neither));
        ++n;
    }
}

TEST_CASE("chain invariants") {
    CHECK(code_of([] { Chain::make({half("W:Ke1"), half("B:Ke8")}); }) == ErrorCode::ChainInvariantViolation);
    CHECK(code_of([] {
              Chain::make({half("W:Ke1"), half("B:Ke8"), half("W:Kd1"), half("B:Kd8"), half("W:Ka1")});
          }) == ErrorCode::ChainInvariantViolation);
    CHECK(code_of([] { Chain::make({half("W:Ke1"), half("W:Ke8"), half("B:Kd1"), half("B:Kd8")}); }) ==
          ErrorCode::ChainInvariantViolation);
    // D and A touch kings.
    CHECK(code_of([] { Chain::make({half("W:Ke1"), half("B:Ke8"), half("W:Kd1"), half("B:Kd2")}); }) ==
          ErrorCode::ChainInvariantViolation);
    CHECK(Chain::label(0) == "A");
    CHECK(Chain::label(3) == "D");
    CHECK(Chain::label(25) == "Z");
    CHECK(Chain::label(26) == "AA");
}

TEST_CASE("classification categories") {
    Solver& s = shared_solver();
    const Chain kings = Chain::make({half("W:Ke1"), half("B:Ke8"), half("W:Kd1"), half("B:Kd8")});
    const auto drawn = classify_chain(s, kings);
    CHECK(drawn.kind == ChainClass::DrawDegenerate);
    CHECK_FALSE(drawn.certificate.has_value());

    // A beats B, C beats B, C beats D, A beats D.
    const Chain sources =
        Chain::make({half("W:Kc6,Qd5"), half("B:Ka8"), half("W:Kc6,Qb5"), half("B:Kh8")});
    const auto t = classify_chain(s, sources);
    CHECK(t.kind == ChainClass::TransitiveDecisive);
    const auto prefs = oriented_edges(sources, t.edges);
    REQUIRE(prefs.size() == 4);
    CHECK(prefs[0].better == "A");
    CHECK(prefs[1].better == "C");
    const auto feas = potential_feasibility(prefs);
    CHECK(feas.feasible);
}

TEST_CASE("a found cycle certifies, serializes and re-verifies") {
    Solver& s = shared_solver();
    const CycleCertificate cert = small_certificate();
    const auto cls = classify_chain(s, cert.chain);
    CHECK(cls.kind == ChainClass::Intransitive);

    const std::string text = serialize_certificate(cert);
    const CycleCertificate back = parse_certificate(text);
    CHECK(serialize_certificate(back) == text);
    CHECK(back.chain.members() == cert.chain.members());

    const CertificateCheck check = verify_certificate(s, back);
    CHECK(check.pass);
    CHECK(check.orientation_ok);
    REQUIRE(check.edges.size() == 4);
    for (const auto& e : check.edges) CHECK(e.pass);

    const auto feas = potential_feasibility(oriented_edges(cert.chain, cert.edges));
    CHECK_FALSE(feas.feasible);
    CHECK(feas.witness.size() == 5);
}

TEST_CASE("tampered certificates fail verification") {
    Solver& s = shared_solver();
    CycleCertificate cert = small_certificate();
    const Outcome original = cert.edges[1].outcome;
    cert.edges[1].outcome = Outcome::win(*original.winner(), *original.dtm + 2);
    const auto check = verify_certificate(s, cert);
    CHECK_FALSE(check.pass);
    CHECK_FALSE(check.edges[1].pass);
    CHECK(check.edges[0].pass);

    CycleCertificate flipped = small_certificate();
    flipped.direction = flipped.direction == Direction::Forward ? Direction::Reverse : Direction::Forward;
    const auto check2 = verify_certificate(s, flipped);
    CHECK_FALSE(check2.orientation_ok);
    CHECK_FALSE(check2.pass);
}

TEST_CASE("certificate parse errors carry offsets") {
    const std::string text = serialize_certificate(small_certificate());
    CHECK(code_of([&] { parse_certificate(text.substr(0, text.size() / 2)); }) == ErrorCode::ParseError);
    std::string bad = text;
    bad.replace(bad.find("direction forward"), 17, "direction sideways");
    try {
        parse_certificate(bad);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        REQUIRE(e.offset().has_value());
        CHECK(*e.offset() == text.find("direction"));
    }
    CHECK(code_of([] { parse_certificate("hello"); }) == ErrorCode::ParseError);
}

TEST_CASE("Monte-Carlo accounting") {
    Solver& s = shared_solver();
    McParams p;
    p.board = BoardSpec(4, 4);
    p.slots = expand_slots({kinds("KQ")}, 4);
    p.samples = 0;
    CHECK(code_of([&] { monte_carlo(s, p); }) == ErrorCode::InvariantViolation);
    p.samples = 1;
    const auto one = monte_carlo(s, p);
    CHECK(one.counts.intransitive + one.counts.transitive_decisive + one.counts.draw_degenerate == 1);
    p.slots = expand_slots({kinds("KQ")}, 5);
    CHECK(code_of([&] { monte_carlo(s, p); }) == ErrorCode::ChainInvariantViolation);

    McParams kings;
    kings.board = k8x8;
    kings.slots = expand_slots({kinds("K")}, 6);
    kings.samples = 500;
    const auto k = monte_carlo(s, kings);
    CHECK(k.counts.draw_degenerate == 500);
    CHECK(k.intransitive_share == 0.0);
}

TEST_CASE("a lone Black king never closes a cycle") {
    McParams p;
    p.board = BoardSpec(5, 5);
    p.slots = expand_slots({kinds("KQ"), kinds("K")}, 4);
    p.samples = 3000;
    const auto r = monte_carlo(shared_solver(), p);
    CHECK(r.counts.intransitive == 0);
    CHECK(r.counts.transitive_decisive > 0);
}

TEST_CASE("Monte-Carlo counts do not depend on worker count") {
    McParams p;
    p.board = BoardSpec(4, 4);
    p.slots = expand_slots({kinds("KQ")}, 4);
    p.samples = 3000;
    p.seed = 42;
    p.workers = 1;
    const auto a = monte_carlo(shared_solver(), p);
    p.workers = 4;
    const auto b = monte_carlo(shared_solver(), p);
    CHECK(a.counts == b.counts);
    CHECK(a.first_certificate_sample == b.first_certificate_sample);
    CHECK(a.counts.intransitive > 0);
    REQUIRE(a.first_certificate.has_value());
    CHECK(serialize_certificate(*a.first_certificate) == serialize_certificate(*b.first_certificate));
    p.seed = 43;
    CHECK_FALSE(monte_carlo(shared_solver(), p).counts == a.counts);
}

TEST_CASE("Wilson interval") {
    const auto w = wilson_interval(30, 1000);
    CHECK(w.low < 0.03);
    CHECK(w.high > 0.03);
    const auto big = wilson_interval(3000, 100000);
    CHECK(big.low < 0.03);
    CHECK(big.high > 0.03);
    const double ratio = (w.high - w.low) / (big.high - big.low);
    CHECK(ratio == doctest::Approx(10.0).epsilon(0.05));
    const auto zero = wilson_interval(0, 100);
    CHECK(zero.low == 0.0);
    CHECK(zero.high > 0.0);
    CHECK(wilson_interval(100, 100).high == doctest::Approx(1.0));
}

TEST_CASE("half enumeration") {
    CHECK(enumerate_halves(kinds("K"), Color::White, k3x3).size() == 9);
    CHECK(enumerate_halves(kinds("KQ"), Color::Black, BoardSpec(4, 4)).size() == 240);
    CHECK(enumerate_halves(kinds("KP"), Color::White, BoardSpec(4, 4)).size() == 8 * 15);
    CHECK(enumerate_halves(kinds("KNN"), Color::White, k3x3).size() == 9 * 28);
    CHECK(enumerate_halves(kinds("KP"), Color::White, BoardSpec(4, 4, Topology::Torus)).empty());
}

TEST_CASE("exhaustive search") {
    Solver& s = shared_solver();
    ExhaustiveParams kings;
    kings.board = BoardSpec(4, 4);
    kings.slots = {kinds("K"), kinds("K"), kinds("K"), kinds("K")};
    const auto none = exhaustive_search(s, kings);
    CHECK(none.exhaustive);
    CHECK_FALSE(none.certificate.has_value());

    ExhaustiveParams p;
    p.board = BoardSpec(4, 4);
    p.slots = {kinds("KQ"), kinds("KR"), kinds("KQ"), kinds("KR")};
    const auto first = exhaustive_search(s, p);
    REQUIRE(first.certificate.has_value());
    CHECK(serialize_certificate(*exhaustive_search(s, p).certificate) == serialize_certificate(*first.certificate));
    CHECK(verify_certificate(s, *first.certificate).pass);

    // Resuming from checkpoints reaches the same certificate.
    p.budget_nodes = first.nodes / 3;
    SearchCursor cursor;
    int rounds = 0;
    std::optional<CycleCertificate> resumed;
    while (!resumed && rounds < 100) {
        p.start = cursor;
        try {
            resumed = exhaustive_search(s, p).certificate;
        } catch (const BudgetExceeded& e) {
            CHECK(e.code() == ErrorCode::BudgetExceeded);
            cursor = e.cursor();
        }
        ++rounds;
    }
    REQUIRE(resumed.has_value());
    CHECK(rounds > 1);
    CHECK(serialize_certificate(*resumed) == serialize_certificate(*first.certificate));

    p.slots.pop_back();
    CHECK(code_of([&] { exhaustive_search(s, p); }) == ErrorCode::ChainInvariantViolation);
}
