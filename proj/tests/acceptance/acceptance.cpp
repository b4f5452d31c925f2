// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bellman.hpp"
#include "forward_oracle.hpp"
#include "itlb/feasibility.hpp"
#include "itlb/intransitivity.hpp"
#include "itlb/magicians.hpp"
#include "itlb/rng.hpp"
#include "itlb/solver.hpp"
#include "test_env.hpp"

using namespace itlb;

namespace {

struct Finding {
    bool pass = false;
    std::string detail;
};

Solver& solver() { return testing::shared_solver(); }

std::vector<Kind> kinds(const std::string& letters) { return parse_material(letters); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Rotation of `cycle` (first node repeated at the end) that starts at `start`.
std::vector<std::string> rotate_cycle(std::vector<std::string> cycle, const std::string& start) {
    if (cycle.size() < 2) return cycle;
    cycle.pop_back();
    const auto it = std::find(cycle.begin(), cycle.end(), start);
    if (it == cycle.end()) return {};
    std::rotate(cycle.begin(), it, cycle.end());
    cycle.push_back(start);
    return cycle;
}

// Labels of a certificate's cycle in the direction of the beats relation.
std::vector<std::string> certificate_cycle(const CycleCertificate& cert) {
    const std::size_t n = cert.chain.size();
    std::vector<std::string> out;
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t i = cert.direction == Direction::Forward ? k % n : (n - k % n) % n;
        out.push_back(Chain::label(i));
    }
    return out;
}

// Infeasible, with the witness equal to the certificate's cycle.
bool certificate_infeasible(const CycleCertificate& cert, std::string& why) {
    const auto prefs = oriented_edges(cert.chain, cert.edges);
    const auto result = potential_feasibility(prefs);
    if (result.feasible) {
        why = "certificate edges reported feasible";
        return false;
    }
    const auto expected = certificate_cycle(cert);
    if (rotate_cycle(result.witness, expected.front()) != expected) {
        why = "witness is not the certified cycle";
        return false;
    }
    return true;
}

// Feasible, and the assignment scores every winner above its loser.
bool transitive_feasible(const Chain& chain, const std::vector<EdgeResult>& edges, std::string& why) {
    const auto prefs = oriented_edges(chain, edges);
    const auto result = potential_feasibility(prefs);
    if (!result.feasible) {
        why = "transitive chain reported infeasible";
        return false;
    }
    std::map<std::string, std::int64_t> value(result.assignment.begin(), result.assignment.end());
    for (const auto& p : prefs) {
        if (!value.count(p.better) || !value.count(p.worse) || value[p.better] <= value[p.worse]) {
            why = "assignment violates " + p.better + " > " + p.worse;
            return false;
        }
    }
    return true;
}

// Draws one legal chain per sample, the same way the Monte-Carlo driver does.
Chain sample_chain(const BoardSpec& board, const std::vector<std::vector<Kind>>& slots, std::uint64_t seed,
                   std::uint64_t sample) {
    Rng rng = Rng::substream(seed, sample);
    const std::size_t n = slots.size();
    for (;;) {
        std::vector<HalfPosition> members;
        for (std::size_t i = 0; i < n; ++i) {
            members.push_back(random_half(slots[i], i % 2 == 0 ? Color::White : Color::Black, board, rng));
        }
        bool legal = true;
        for (std::size_t i = 0; i < n && legal; ++i) {
            const auto& a = members[i];
            const auto& b = members[(i + 1) % n];
            legal = (i % 2 == 0 ? try_superpose(a, b) : try_superpose(b, a)).has_value();
        }
        if (legal) return Chain::make(std::move(members));
    }
}

// -------------------------------------------------------------- criteria

Finding solver_matches_oracle() {
    std::uint64_t compared = 0;
    std::uint64_t mismatches = 0;
    std::string first;
    auto compare = [&](const WholePosition& pos, Outcome expected) {
        ++compared;
        const Outcome got = solver().solve(pos);
        if (got != expected) {
            if (!mismatches) first = encode(pos) + " solver=" + got.to_string() + " oracle=" + expected.to_string();
            ++mismatches;
        }
    };

    const BoardSpec small(4, 4);
    testing::ForwardOracle small_oracle(small, testing::naive_generator());
    std::vector<std::string> materials{"KvK"};
    for (char k : std::string("QRBN")) {
        materials.push_back(std::string("K") + k + "vK");
        materials.push_back(std::string("KvK") + k);
    }
    std::uint64_t small_count = 0;
    for (const auto& m : materials) {
        const SolvedTable& t = solver().table(MaterialSignature::parse(m), small);
        for (std::uint64_t i = 0; i < t.size(); ++i) {
            const auto pos = t.position_at(i);
            if (!pos) continue;
            compare(*pos, small_oracle.value(*pos));
            ++small_count;
        }
    }

    const BoardSpec big(8, 8);
    testing::ForwardOracle big_oracle(big, testing::naive_generator());
    Rng rng(20240611);
    const auto kq = kinds("KQ");
    int random_count = 0;
    while (random_count < 1000) {
        const auto pos = try_superpose(random_half(kq, Color::White, big, rng), random_half(kq, Color::Black, big, rng));
        if (!pos) continue;
        compare(*pos, big_oracle.value(*pos));
        ++random_count;
    }
    std::string detail = std::to_string(small_count) + " positions on 4x4 (<=3 pieces), " +
                         std::to_string(random_count) + " random KQvKQ on 8x8, " + std::to_string(mismatches) +
                         " mismatches";
    if (mismatches) detail += "; first " + first;
    return {mismatches == 0 && compared > 0, detail};
}

Finding bellman_kqk() {
    const SolvedTable& t = solver().table(MaterialSignature::parse("KQvK"), BoardSpec(8, 8));
    const auto r = testing::check_bellman(solver(), t);
    std::string detail = std::to_string(r.checked) + " entries checked, " + std::to_string(r.failures) + " failures";
    if (r.failures) detail += "; first " + r.first_failure;
    return {r.failures == 0 && r.checked > 0, detail};
}

Finding cycle_exists(const std::string& fixture_path) {
    ExhaustiveParams p;
    p.board = BoardSpec(8, 8);
    p.slots = expand_slots({kinds("KQ")}, 4);
    p.budget_nodes = 5'000'000;
    const auto result = exhaustive_search(solver(), p);
    if (!result.certificate) return {false, "no certificate within budget"};
    const std::string text = serialize_certificate(*result.certificate);
    if (text != read_file(fixture_path)) return {false, "search result differs from the committed fixture"};

    const CycleCertificate fixture = parse_certificate(text);
    const auto check = verify_certificate(solver(), fixture);
    if (!check.pass) return {false, "fixture failed re-verification"};

    testing::ForwardOracle oracle(fixture.chain.board(), testing::naive_generator());
    for (std::size_t i = 0; i < fixture.chain.size(); ++i) {
        if (oracle.value(fixture.chain.edge_position(i)) != fixture.edges[i].outcome) {
            return {false, "forward oracle disagrees on edge " + Chain::label(i)};
        }
    }
    return {true, "certificate after " + std::to_string(result.nodes) +
                      " nodes matches fixture; 4 edges re-solved and oracle-checked"};
}

Finding feasibility_contrast(const std::string& fixture_path, std::string& summary) {
    std::string why;
    std::uint64_t cycles = 0;
    std::uint64_t transitive = 0;

    const CycleCertificate fixture = parse_certificate(read_file(fixture_path));
    if (!certificate_infeasible(fixture, why)) return {false, "fixture: " + why};
    ++cycles;

    // Cycles found by exhaustive search on small boards.
    for (int size : {3, 4}) {
        for (const auto& pattern : std::vector<std::vector<std::vector<Kind>>>{
                 {kinds("KQ")}, {kinds("KR")}, {kinds("KQ"), kinds("KR")}}) {
            ExhaustiveParams p;
            p.board = BoardSpec(size, size);
            p.slots = expand_slots(pattern, 4);
            const auto r = exhaustive_search(solver(), p);
            if (!r.certificate) continue;
            if (!certificate_infeasible(*r.certificate, why)) return {false, "exhaustive cycle: " + why};
            ++cycles;
        }
    }

    struct Study {
        BoardSpec board;
        std::vector<std::vector<Kind>> slots;
        std::uint64_t samples;
    };
    const std::vector<Study> studies{
        {BoardSpec(8, 8), expand_slots({kinds("KQ")}, 4), 2000},
        {BoardSpec(4, 4), expand_slots({kinds("KQ"), kinds("KR")}, 4), 2000},
        {BoardSpec(4, 4), expand_slots({kinds("KQ")}, 6), 1000},
    };
    for (const auto& st : studies) {
        prepare_tables(solver(), st.board, st.slots);
        for (std::uint64_t s = 0; s < st.samples; ++s) {
            const Chain chain = sample_chain(st.board, st.slots, 77, s);
            const auto cls = classify_chain(solver(), chain);
            if (cls.kind == ChainClass::Intransitive) {
                if (!certificate_infeasible(*cls.certificate, why)) return {false, "sampled cycle: " + why};
                ++cycles;
            } else if (cls.kind == ChainClass::TransitiveDecisive) {
                if (!transitive_feasible(chain, cls.edges, why)) return {false, why};
                ++transitive;
            }
        }
    }
    summary = std::to_string(cycles) + " chess cycles infeasible";
    return {cycles > 0 && transitive > 0, std::to_string(cycles) + " cycles infeasible with cycle witness, " +
                                              std::to_string(transitive) +
                                              " transitive-decisive chains feasible with edge-respecting scores"};
}

Finding chain_length_study() {
    const BoardSpec board(8, 8);
    const std::uint64_t samples = 6000;
    std::string table = "length,samples,intransitive,transitive_decisive,draw_degenerate,rejected,share";
    bool reproducible = true;
    for (std::size_t len : {4u, 6u, 8u}) {
        McParams p;
        p.board = board;
        p.slots = expand_slots({kinds("KQ")}, len);
        p.samples = samples;
        p.seed = 11;
        p.workers = 1;
        const McReport one = monte_carlo(solver(), p);
        p.workers = 8;
        const McReport eight = monte_carlo(solver(), p);
        reproducible = reproducible && one.counts == eight.counts;
        char row[160];
        std::snprintf(row, sizeof row, "\n    %zu,%llu,%llu,%llu,%llu,%llu,%.6f", len,
                      static_cast<unsigned long long>(samples), static_cast<unsigned long long>(one.counts.intransitive),
                      static_cast<unsigned long long>(one.counts.transitive_decisive),
                      static_cast<unsigned long long>(one.counts.draw_degenerate),
                      static_cast<unsigned long long>(one.counts.rejected_illegal), one.intransitive_share);
        table += row;
    }
    return {reproducible, std::string(reproducible ? "workers 1 and 8 give identical counts" : "worker counts differ") +
                              "\n    " + table};
}

Finding minimum_board() {
    struct Case {
        int size;
        std::vector<std::vector<Kind>> pattern;
        std::string name;
    };
    const std::vector<Case> cases{
        {3, {kinds("KQ")}, "KQ"},       {3, {kinds("KR")}, "KR"},       {3, {kinds("KQ"), kinds("KR")}, "KQ,KR"},
        {3, {kinds("KR"), kinds("K")}, "KR,K"}, {4, {kinds("KQ")}, "KQ"}, {4, {kinds("KR")}, "KR"},
        {4, {kinds("KQ"), kinds("KR")}, "KQ,KR"}, {4, {kinds("KR"), kinds("K")}, "KR,K"},
    };
    std::string detail;
    bool ok = true;
    for (const auto& c : cases) {
        ExhaustiveParams p;
        p.board = BoardSpec(c.size, c.size);
        p.slots = expand_slots(c.pattern, 4);
        p.budget_nodes = 200'000'000;
        auto answer = [&] {
            const auto r = exhaustive_search(solver(), p);
            if (r.certificate) return "certificate\n" + serialize_certificate(*r.certificate);
            return std::string(r.exhaustive ? "exhaustive-none" : "undecided");
        };
        const std::string first = answer();
        const std::string second = answer();
        const bool definite = first != "undecided";
        ok = ok && definite && first == second;
        detail += (detail.empty() ? "" : "; ") + std::to_string(c.size) + "x" + std::to_string(c.size) + " " + c.name +
                  ": " + first.substr(0, first.find('\n')) + (first == second ? "" : " (nondeterministic)");
    }
    return {ok, detail};
}

Finding magicians_order() {
    namespace mg = magicians;
    const std::string order = mg::induced_row_order(3);
    const int xoo = mg::pair_distance("XOO");
    const int oxo = mg::pair_distance("OXO");
    const bool ok = order == "OOO < OXO < XOO < XXO < XOX < XXX" && xoo == 1 && oxo == 2;
    return {ok, order + "; pair_distance(XOO)=" + std::to_string(xoo) + " pair_distance(OXO)=" + std::to_string(oxo)};
}

Finding magicians_archetypes() {
    namespace mg = magicians;
    using mg::MagBoard;
    using mg::Side;
    const MagBoard start = MagBoard::parse("XOX/OXO");
    const MagBoard useful = mg::apply_swap(start, {1, 0});
    const bool a = start.good_count() == 3 && useful.good_count() == 4;

    const MagBoard quiet = mg::apply_swap(start, {0, 0});
    const auto pairs = [](const MagBoard& b) {
        return mg::working_pairs(mg::friendly_mask(b.upper_mask(), b.columns(), Side::Good), b.columns()) +
               mg::working_pairs(mg::friendly_mask(b.lower_mask(), b.columns(), Side::Good), b.columns());
    };
    const bool b = quiet.good_count() == 3 && pairs(start) == 1 && pairs(quiet) == 0;

    const MagBoard flip_start = MagBoard::parse("XXX/OOO");
    const MagBoard flipped = mg::apply_swap(flip_start, {1, 1});
    // Both moved cards arrive reversed and flip back.
    const bool c = flipped == flip_start && flipped.good_count() == 3 && flip_start.upper(1) == mg::Face::Good &&
                   flip_start.lower(1) == mg::Face::Bad;

    return {a && b && c, "XOX/OXO u1 l0 -> " + useful.to_string() + " (3->4 good); XOX/OXO u0 l0 -> " +
                             quiet.to_string() + " (3 good, working pairs 1->0); XXX/OOO u1 l1 -> " +
                             flipped.to_string() + " (double flip, counts 3/3)"};
}

Finding magicians_transitivity(const std::string& chess_summary) {
    namespace mg = magicians;
    const auto full = mg::verify_transitivity(mg::all_boards(3));
    Rng rng(9);
    const auto boards6 = mg::all_boards(6);
    const auto good = mg::verify_transitivity_sampled(boards6, 1'000'000, rng, mg::Side::Good);
    const auto bad = mg::verify_transitivity_sampled(boards6, 1'000'000, rng, mg::Side::Bad);

    // Strict comparisons between random boards always admit a potential.
    std::vector<Preference> prefs;
    for (int i = 0; i < 20000; ++i) {
        const auto& x = boards6[rng.below(boards6.size())];
        const auto& y = boards6[rng.below(boards6.size())];
        const auto sx = mg::heuristic_score(x, mg::Side::Good);
        const auto sy = mg::heuristic_score(y, mg::Side::Good);
        if (sx > sy) prefs.push_back({x.to_string(), y.to_string()});
        if (sy > sx) prefs.push_back({y.to_string(), x.to_string()});
    }
    const bool feasible = potential_feasibility(prefs).feasible;

    const std::uint64_t violations = full.violations + good.violations + bad.violations;
    const bool ok = violations == 0 && feasible && boards6.size() == 4096 && !chess_summary.empty();
    return {ok, std::to_string(full.triples) + " triples over " + std::to_string(full.boards) + " N=3 boards, " +
                    std::to_string(good.triples + bad.triples) + " sampled triples over " +
                    std::to_string(boards6.size()) + " N=6 boards, " + std::to_string(violations) +
                    " violations; " + std::to_string(prefs.size()) + " Magicians preferences " +
                    (feasible ? "feasible" : "INFEASIBLE") + " vs " +
                    (chess_summary.empty() ? "no chess contrast" : chess_summary)};
}

Finding persistence() {
    const SolvedTable& t = solver().table(MaterialSignature::parse("KRvK"), BoardSpec(5, 5));
    const auto dir = std::filesystem::temp_directory_path() / "itlb-acceptance";
    std::filesystem::create_directories(dir);
    const auto a = dir / "a.tbl";
    const auto b = dir / "b.tbl";
    save_table(t, a);
    const SolvedTable loaded = load_table(a);
    save_table(loaded, b);
    const bool same = read_file(a.string()) == read_file(b.string()) && loaded.slots() == t.slots() &&
                      loaded.overflow() == t.overflow();

    std::string bytes = read_file(a.string());
    bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x40);
    std::ofstream(b, std::ios::binary) << bytes;
    bool rejected = false;
    try {
        load_table(b);
    } catch (const Error& e) {
        rejected = e.code() == ErrorCode::ChecksumMismatch;
    }
    std::filesystem::remove_all(dir);
    return {same && rejected, std::string(same ? "round trip byte-exact" : "round trip differs") +
                                  (rejected ? ", flipped byte rejected by checksum" : ", corruption NOT rejected")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string fixture = argc > 1 ? argv[1] : "tests/fixtures/kq_8x8_cycle.cert";
    std::string chess_summary;
    const std::vector<std::pair<int, std::function<Finding()>>> criteria{
        {1, solver_matches_oracle},
        {2, bellman_kqk},
        {3, [&] { return cycle_exists(fixture); }},
        {4, [&] { return feasibility_contrast(fixture, chess_summary); }},
        {5, chain_length_study},
        {6, minimum_board},
        {7, magicians_order},
        {8, magicians_archetypes},
        {9, [&] { return magicians_transitivity(chess_summary); }},
        {10, persistence},
    };
    int failures = 0;
    for (const auto& [id, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Finding v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!v.pass) ++failures;
        std::printf("criterion %d: %s (%.1fs) %s\n", id, v.pass ? "PASS" : "FAIL", secs, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
