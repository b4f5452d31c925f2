#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "itlb/intransitivity.hpp"
#include "itlb/magicians.hpp"
#include "itlb/movegen.hpp"
#include "itlb/version.hpp"

using json = nlohmann::ordered_json;
using namespace itlb;

namespace {

enum Exit {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kIllegal = 3,
    kResource = 4,
    kBudget = 5,
    kVerifyFailed = 6,
    kIo = 7,
};

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError: return kParse;
    case ErrorCode::TooManyPieces:
    case ErrorCode::ResourceLimit: return kResource;
    case ErrorCode::BudgetExceeded: return kBudget;
    case ErrorCode::IoError:
    case ErrorCode::ChecksumMismatch:
    case ErrorCode::VersionMismatch:
    case ErrorCode::TableMismatch: return kIo;
    default: return kIllegal;
    }
}

struct Options {
    std::string board = "8x8";
    std::string topology = "planar";
    std::string material;
    std::vector<std::size_t> chain_len{4};
    std::uint64_t samples = 1000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string format = "text";
    std::string out;
    std::string cache_dir;
    std::uint64_t budget_nodes = 2'000'000'000;
};

BoardSpec board_of(const Options& o) {
    const BoardSpec b = BoardSpec::parse(o.board);
    return BoardSpec(b.files(), b.ranks(), parse_topology(o.topology));
}

std::unique_ptr<Solver> make_solver(const Options& o) {
    Solver::Config cfg;
    if (!o.cache_dir.empty()) {
        cfg.cache_dir = o.cache_dir;
    } else if (const char* env = std::getenv("ITLB_CACHE_DIR"); env && *env) {
        cfg.cache_dir = env;
    }
    cfg.table.workers = o.workers;
    return std::make_unique<Solver>(cfg);
}

// "KQ,K" -> per-slot materials.
std::vector<std::vector<Kind>> slots_of(const std::string& text) {
    std::vector<std::vector<Kind>> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_material(item));
    if (out.empty()) throw Error(ErrorCode::ParseError, "--material needs at least one slot", 0);
    return out;
}

std::string slots_text(const std::vector<std::vector<Kind>>& slots) {
    std::string s;
    for (const auto& m : slots) {
        if (!s.empty()) s += ',';
        s += material_string(m);
    }
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to --out when given, stdout otherwise.
void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + o.out);
    f << text;
}

json outcome_json(const Outcome& o) {
    json j{{"verdict", std::string(to_string(o.verdict))}};
    if (o.dtm) j["dtm"] = *o.dtm;
    return j;
}

std::string san_line(Solver& solver, const WholePosition& pos) {
    std::string line;
    WholePosition cur = pos;
    for (const Move& m : solver.principal_line(pos)) {
        if (!line.empty()) line += ' ';
        line += describe_move(cur, m);
        cur = apply(cur, m);
    }
    return line;
}

int cmd_solve(const Options& o, const std::string& text) {
    const WholePosition pos = decode_whole(text);
    auto solver = make_solver(o);
    const Outcome out = solver->solve(pos);
    const std::string line = out.winner() ? san_line(*solver, pos) : "";
    if (o.format == "json") {
        json j = outcome_json(out);
        j["position"] = encode(pos);
        j["line"] = line;
        j["draw_convention"] = kDrawConvention;
        emit(o, j.dump(2) + "\n");
    } else {
        emit(o, out.to_string() + (out.winner() ? " line=" + line : "") + "\n");
    }
    return kOk;
}

int cmd_beats(const Options& o, const std::string& x_text, const std::string& y_text) {
    const BoardSpec board = board_of(o);
    const HalfPosition x = decode_half(x_text, board);
    const HalfPosition y = decode_half(y_text, board);
    auto solver = make_solver(o);
    const BeatsResult r = beats(*solver, x, y);
    const WholePosition pos = x.color() == Color::White ? superpose(x, y) : superpose(y, x);
    const Outcome out = solver->solve(pos);
    if (o.format == "json") {
        json j{{"result", std::string(to_string(r))}, {"position", encode(pos)}, {"outcome", outcome_json(out)}};
        emit(o, j.dump(2) + "\n");
    } else {
        emit(o, std::string(to_string(r)) + " (" + out.to_string() + ")\n");
    }
    return kOk;
}

json certificate_json(const CycleCertificate& c) {
    json members = json::array();
    for (const auto& m : c.chain.members()) members.push_back(encode(m));
    json edges = json::array();
    for (const auto& e : c.edges) {
        edges.push_back({{"from", Chain::label(e.from)}, {"to", Chain::label(e.to)}, {"outcome", e.outcome.to_string()}});
    }
    return {{"board", c.chain.board().to_string()},
            {"direction", std::string(to_string(c.direction))},
            {"members", members},
            {"edges", edges}};
}

int cmd_chain(const Options& o, const std::vector<std::string>& texts) {
    const BoardSpec board = board_of(o);
    std::vector<HalfPosition> members;
    for (const auto& t : texts) members.push_back(decode_half(t, board));
    const Chain chain = Chain::make(std::move(members));
    auto solver = make_solver(o);
    const ChainClassification cls = classify_chain(*solver, chain);
    const auto prefs = oriented_edges(chain, cls.edges);
    const FeasibilityResult feas = potential_feasibility(prefs);

    std::ostringstream text;
    json j{{"class", std::string(to_string(cls.kind))}};
    json edges = json::array();
    for (const auto& e : cls.edges) {
        text << "edge " << Chain::label(e.from) << ' ' << Chain::label(e.to) << ' ' << e.outcome.to_string() << '\n';
        edges.push_back({{"from", Chain::label(e.from)}, {"to", Chain::label(e.to)}, {"outcome", e.outcome.to_string()}});
    }
    j["edges"] = edges;
    text << "class " << to_string(cls.kind) << '\n';
    if (feas.feasible) {
        text << "feasible";
        json a = json::object();
        for (const auto& [node, v] : feas.assignment) {
            text << ' ' << node << '=' << v;
            a[node] = v;
        }
        text << '\n';
        j["feasibility"] = {{"feasible", true}, {"assignment", a}};
    } else {
        text << "infeasible witness";
        for (const auto& n : feas.witness) text << ' ' << n;
        text << '\n';
        j["feasibility"] = {{"feasible", false}, {"witness", feas.witness}};
    }
    if (cls.certificate) {
        j["certificate"] = serialize_certificate(*cls.certificate);
        text << serialize_certificate(*cls.certificate);
    }
    emit(o, o.format == "json" ? j.dump(2) + "\n" : text.str());
    return kOk;
}

json config_json(const Options& o, const BoardSpec& board, const std::vector<std::vector<Kind>>& slots) {
    return {{"board", board.to_string()},   {"material", slots_text(slots)}, {"chain_len", o.chain_len},
            {"samples", o.samples},         {"seed", o.seed},                {"workers", o.workers},
            {"budget_nodes", o.budget_nodes}};
}

int cmd_mc(const Options& o) {
    const BoardSpec board = board_of(o);
    const auto pattern = slots_of(o.material);
    auto solver = make_solver(o);
    std::vector<McReport> reports;
    for (const std::size_t len : o.chain_len) {
        McParams p;
        p.board = board;
        p.slots = expand_slots(pattern, len);
        p.samples = o.samples;
        p.seed = o.seed;
        p.workers = o.workers;
        reports.push_back(monte_carlo(*solver, p));
    }

    const json config = config_json(o, board, pattern);
    if (o.format == "json") {
        json rows = json::array();
        for (const auto& r : reports) {
            json row{{"chain_len", r.params.slots.size()},
                     {"samples", r.params.samples},
                     {"intransitive", r.counts.intransitive},
                     {"transitive_decisive", r.counts.transitive_decisive},
                     {"draw_degenerate", r.counts.draw_degenerate},
                     {"rejected_illegal", r.counts.rejected_illegal},
                     {"intransitive_share", r.intransitive_share},
                     {"wilson95", {r.wilson.low, r.wilson.high}}};
            if (r.first_certificate) {
                row["first_certificate_sample"] = r.first_certificate_sample;
                row["first_certificate"] = certificate_json(*r.first_certificate);
            }
            rows.push_back(row);
        }
        json j{{"tool", "itlb"},
               {"version", std::string(kVersion)},
               {"config", config},
               {"seed", o.seed},
               {"draw_convention", kDrawConvention},
               {"rows", rows}};
        emit(o, j.dump(2) + "\n");
        return kOk;
    }
    std::ostringstream out;
    out << "# itlb " << kVersion << '\n';
    out << "# config " << config.dump() << '\n';
    out << "# seed " << o.seed << '\n';
    out << "# draw_convention " << kDrawConvention << '\n';
    out << "chain_len,samples,intransitive,transitive_decisive,draw_degenerate,rejected_illegal,"
           "intransitive_share,wilson95_low,wilson95_high,first_certificate_sample\n";
    char buf[64];
    for (const auto& r : reports) {
        out << r.params.slots.size() << ',' << r.params.samples << ',' << r.counts.intransitive << ','
            << r.counts.transitive_decisive << ',' << r.counts.draw_degenerate << ',' << r.counts.rejected_illegal;
        std::snprintf(buf, sizeof buf, ",%.9f,%.9f,%.9f,", r.intransitive_share, r.wilson.low, r.wilson.high);
        out << buf;
        if (r.first_certificate) out << r.first_certificate_sample;
        out << '\n';
    }
    emit(o, out.str());
    return kOk;
}

int cmd_exhaustive(const Options& o, const std::string& resume, const std::string& cert_out) {
    const BoardSpec board = board_of(o);
    ExhaustiveParams p;
    p.board = board;
    p.slots = expand_slots(slots_of(o.material), 4);
    p.budget_nodes = o.budget_nodes;
    if (!resume.empty()) {
        const auto comma = resume.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("comma");
            p.start = SearchCursor{std::stoull(resume.substr(0, comma)), std::stoull(resume.substr(comma + 1))};
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::ParseError, "--resume expects 'a,c'", 0);
        }
    }
    auto solver = make_solver(o);
    ExhaustiveResult r;
    try {
        r = exhaustive_search(*solver, p);
    } catch (const BudgetExceeded& e) {
        std::cout << "checkpoint a=" << e.cursor().a << " c=" << e.cursor().c << " nodes=" << e.nodes()
                  << " resume=" << e.cursor().a << ',' << e.cursor().c << '\n';
        std::cerr << e.what() << '\n';
        return kBudget;
    }
    const std::string answer = r.certificate ? "certificate" : "exhaustive-none";
    if (r.certificate && !cert_out.empty()) {
        std::ofstream f(cert_out, std::ios::binary);
        if (!f) throw Error(ErrorCode::IoError, "cannot write " + cert_out);
        f << serialize_certificate(*r.certificate);
    }
    if (o.format == "json") {
        json j{{"tool", "itlb"},
               {"version", std::string(kVersion)},
               {"config", config_json(o, board, p.slots)},
               {"draw_convention", kDrawConvention},
               {"answer", answer},
               {"exhaustive", r.exhaustive},
               {"nodes", r.nodes},
               {"slot_sizes", r.slot_sizes}};
        if (r.certificate) j["certificate"] = certificate_json(*r.certificate);
        emit(o, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "# itlb " << kVersion << '\n';
        out << "# config " << config_json(o, board, p.slots).dump() << '\n';
        out << "answer " << answer << " nodes=" << r.nodes << '\n';
        if (r.certificate) out << serialize_certificate(*r.certificate);
        emit(o, out.str());
    }
    return kOk;
}

int cmd_verify_cert(const Options& o, const std::string& path) {
    const CycleCertificate cert = parse_certificate(read_file(path));
    auto solver = make_solver(o);
    const CertificateCheck check = verify_certificate(*solver, cert);
    std::ostringstream out;
    for (const auto& e : check.edges) {
        out << "edge " << Chain::label(e.stored.from) << ' ' << Chain::label(e.stored.to) << " stored="
            << e.stored.outcome.to_string() << " recomputed=" << e.recomputed.to_string() << ' '
            << (e.pass ? "pass" : "FAIL") << '\n';
    }
    out << "orientation " << (check.orientation_ok ? "pass" : "FAIL") << '\n';
    out << (check.pass ? "PASS" : "FAIL") << '\n';
    emit(o, out.str());
    return check.pass ? kOk : kVerifyFailed;
}

magicians::Side side_of(const std::string& s) {
    if (s == "good" || s == "Good" || s == "X") return magicians::Side::Good;
    if (s == "bad" || s == "Bad" || s == "O") return magicians::Side::Bad;
    throw Error(ErrorCode::ParseError, "side must be good or bad", 0);
}

int cmd_mag_solve(const Options& o, const std::string& text) {
    const auto b = magicians::MagBoard::parse(text);
    const auto v = magicians::perfect_value(b);
    const auto line = magicians::perfect_line(b);
    json moves = json::array();
    for (const auto& s : line) moves.push_back(s.to_string());
    json j{{"board", b.to_string()}, {"perfect_value", v ? json(*v) : json(nullptr)}, {"line", moves}};
    if (o.format == "json") {
        emit(o, j.dump(2) + "\n");
    } else {
        std::string t = v ? std::to_string(*v) : "unreachable";
        for (const auto& s : line) t += " | " + s.to_string();
        emit(o, t + "\n");
    }
    return kOk;
}

int cmd_mag_order(const Options& o, int columns) {
    const std::string order = magicians::induced_row_order(columns);
    emit(o, o.format == "json" ? json{{"columns", columns}, {"order", order}}.dump(2) + "\n" : order + "\n");
    return kOk;
}

int cmd_mag_problems(const Options& o) {
    json rows = json::array();
    std::string t;
    for (const auto& p : magicians::reconstructed_problems()) {
        const auto v = magicians::perfect_value(p.start);
        rows.push_back({{"name", p.name},
                        {"description", p.description},
                        {"board", p.start.to_string()},
                        {"perfect_value", v ? json(*v) : json(nullptr)}});
        t += p.name + " " + p.start.to_string() + " value=" + (v ? std::to_string(*v) : "unreachable") + "  # " +
             p.description + "\n";
    }
    emit(o, o.format == "json" ? rows.dump(2) + "\n" : t);
    return kOk;
}

int cmd_mag_ai_move(const Options& o, const std::string& text, const std::string& side) {
    const auto b = magicians::MagBoard::parse(text);
    Rng rng(o.seed);
    const auto s = side_of(side);
    const auto swap = magicians::best_swap(b, s, rng);
    const auto after = magicians::apply_swap(b, swap);
    if (o.format == "json") {
        emit(o, json{{"swap", swap.to_string()},
                     {"board", after.to_string()},
                     {"value", magicians::heuristic_value(after, s)}}
                        .dump(2) +
                    "\n");
    } else {
        emit(o, swap.to_string() + " -> " + after.to_string() + "\n");
    }
    return kOk;
}

int cmd_mag_play(const Options& o, const std::string& text, const std::string& human) {
    magicians::Game game(magicians::MagBoard::parse(text));
    const auto human_side = side_of(human);
    Rng rng(o.seed);
    std::size_t line_no = 0;
    std::cout << game.board().to_string() << '\n';
    while (!game.over()) {
        if (game.to_move() == human_side) {
            std::cout << "your swap (u<col> l<col>): " << std::flush;
            std::string line;
            if (!std::getline(std::cin, line)) return kUsage;
            ++line_no;
            try {
                game.play(magicians::Swap::parse(line));
            } catch (const Error& e) {
                std::cout << "line " << line_no;
                if (e.offset()) std::cout << " col " << *e.offset() + 1;
                std::cout << ": " << e.what() << '\n';
                continue;
            }
        } else {
            const auto s = magicians::best_swap(game.board(), game.to_move(), rng);
            game.play(s);
            std::cout << "ai " << s.to_string() << '\n';
        }
        std::cout << game.board().to_string() << '\n';
    }
    std::cout << "result " << to_string(*game.result()) << '\n';
    return kOk;
}

int cmd_table_build(const Options& o) {
    const MaterialSignature m = MaterialSignature::parse(o.material);
    const BoardSpec board = board_of(o);
    auto solver = make_solver(o);
    const SolvedTable& t = solver->table(m, board);
    std::string path;
    if (!o.out.empty()) {
        save_table(t, o.out);
        path = o.out;
    } else if (solver->config().cache_dir) {
        path = (*solver->config().cache_dir / Solver::cache_file_name(board, m)).string();
    }
    std::cout << m.to_string() << ' ' << board.to_string() << " slots=" << t.size();
    if (!path.empty()) std::cout << " file=" << path;
    std::cout << '\n';
    return kOk;
}

int cmd_table_info(const Options& o, const std::string& path) {
    const SolvedTable t = load_table(path);
    std::uint64_t legal = 0, white = 0, black = 0, draw = 0;
    int max_dtm = 0;
    for (std::uint64_t i = 0; i < t.size(); ++i) {
        if (!t.legal(i)) continue;
        ++legal;
        const Outcome out = t.at(i);
        if (out.verdict == Verdict::WhiteWins) ++white;
        if (out.verdict == Verdict::BlackWins) ++black;
        if (out.verdict == Verdict::Draw) ++draw;
        if (out.dtm) max_dtm = std::max(max_dtm, *out.dtm);
    }
    json j{{"board", t.board().to_string()}, {"material", t.material().to_string()},
           {"slots", t.size()},              {"legal", legal},
           {"white_wins", white},            {"black_wins", black},
           {"draws", draw},                  {"max_dtm", max_dtm},
           {"format_version", kTableFormatVersion}};
    if (o.format == "json") {
        emit(o, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        for (const auto& [k, v] : j.items()) out << k << ' ' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
        emit(o, out.str());
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intransitivity laboratory for small-material chess, plus The Magicians"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.footer(
        "Exit codes: 0 ok, 1 usage, 2 parse error, 3 illegal input, 4 resource limit or too many pieces, "
        "5 node budget exhausted (checkpoint printed), 6 certificate verification failed, 7 I/O or table file error.\n"
        "ITLB_CACHE_DIR is used as the table cache when --cache-dir is absent.");

    Options o;
    auto add_board = [&](CLI::App* c) {
        c->add_option("--board", o.board, "Board size FxR, 3..8 each")->capture_default_str();
        c->add_option("--topology", o.topology, "planar|cylinder|torus")
            ->check(CLI::IsMember({"planar", "cylinder", "torus"}))
            ->capture_default_str();
    };
    auto add_common = [&](CLI::App* c, std::vector<std::string> formats) {
        c->add_option("--format", o.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
        c->add_option("--out", o.out, "Write output to this file");
        c->add_option("--cache-dir", o.cache_dir, "Table cache directory");
        c->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    };

    std::string position, x_text, y_text, path, resume, cert_out, board_text, side = "good";
    std::vector<std::string> members;
    int columns = 3;
    int code = kOk;

    auto* solve = app.add_subcommand("solve", "Solve a whole position: verdict, DTM and optimal line");
    solve->add_option("position", position, "e.g. \"W:Kf6,Qg6 | B:Kh8 | wtm | board=8x8,planar\"")->required();
    add_common(solve, {"text", "json"});
    solve->callback([&] { code = cmd_solve(o, position); });

    auto* beats_cmd = app.add_subcommand("beats", "Does half-position X beat opposite-color Y?");
    beats_cmd->add_option("x", x_text, "e.g. W:Ke1,Qd1")->required();
    beats_cmd->add_option("y", y_text, "e.g. B:Ke8")->required();
    add_board(beats_cmd);
    add_common(beats_cmd, {"text", "json"});
    beats_cmd->callback([&] { code = cmd_beats(o, x_text, y_text); });

    auto* chain = app.add_subcommand("chain", "Classify an alternating chain W, B, W, B, ...");
    chain->add_option("members", members, "Half-positions in chain order")->required();
    add_board(chain);
    add_common(chain, {"text", "json"});
    chain->callback([&] { code = cmd_chain(o, members); });

    auto* mc = app.add_subcommand("mc", "Monte-Carlo count of intransitive chains");
    add_board(mc);
    add_common(mc, {"csv", "json"});
    mc->add_option("--material", o.material, "Per-slot materials, cycled to the chain length, e.g. KQ,KQ")
        ->required();
    mc->add_option("--chain-len", o.chain_len, "Chain lengths (even, >= 4)")->delimiter(',')->capture_default_str();
    mc->add_option("--samples", o.samples, "Chains per length")->capture_default_str();
    mc->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    mc->callback([&] {
        if (o.format == "text") o.format = "csv";
        code = cmd_mc(o);
    });

    auto* exh = app.add_subcommand("exhaustive", "Deterministic search for a 4-cycle");
    add_board(exh);
    add_common(exh, {"text", "json"});
    exh->add_option("--material", o.material, "Per-slot materials, cycled to 4 slots")->required();
    exh->add_option("--budget-nodes", o.budget_nodes, "Node budget")->capture_default_str();
    exh->add_option("--resume", resume, "Resume from a checkpoint 'a,c'");
    exh->add_option("--cert-out", cert_out, "Write the certificate here when one is found");
    exh->callback([&] { code = cmd_exhaustive(o, resume, cert_out); });

    auto* verify = app.add_subcommand("verify-cert", "Re-solve every edge of a certificate");
    verify->add_option("file", path, "Certificate file")->required();
    add_common(verify, {"text"});
    verify->callback([&] { code = cmd_verify_cert(o, path); });

    auto* mag = app.add_subcommand("magicians", "The Magicians card game");
    mag->require_subcommand(1);
    auto* msolve = mag->add_subcommand("solve", "Perfect value and one optimal line");
    msolve->add_option("board", board_text, "e.g. XOX/OXO")->required();
    add_common(msolve, {"text", "json"});
    msolve->callback([&] { code = cmd_mag_solve(o, board_text); });
    auto* morder = mag->add_subcommand("order", "Rows of N cards sorted by the row heuristic");
    morder->add_option("--columns", columns, "Row length")->check(CLI::Range(2, 10))->capture_default_str();
    add_common(morder, {"text", "json"});
    morder->callback([&] { code = cmd_mag_order(o, columns); });
    auto* mprob = mag->add_subcommand("problems", "Reconstructed puzzle starts with their perfect values");
    add_common(mprob, {"text", "json"});
    mprob->callback([&] { code = cmd_mag_problems(o); });
    auto* mai = mag->add_subcommand("ai-move", "Heuristic best swap for a side");
    mai->add_option("board", board_text, "e.g. XOX/OXO")->required();
    mai->add_option("--side", side, "good|bad")->capture_default_str();
    mai->add_option("--seed", o.seed, "Tie-break seed")->capture_default_str();
    add_common(mai, {"text", "json"});
    mai->callback([&] { code = cmd_mag_ai_move(o, board_text, side); });
    auto* mplay = mag->add_subcommand("play", "Play against the AI; swaps are read from stdin as 'u1 l0'");
    mplay->add_option("board", board_text, "Start board")->required();
    mplay->add_option("--side", side, "Your side: good|bad")->capture_default_str();
    mplay->add_option("--seed", o.seed, "AI tie-break seed")->capture_default_str();
    mplay->callback([&] { code = cmd_mag_play(o, board_text, side); });

    auto* table = app.add_subcommand("table", "Build or inspect solved tables");
    table->require_subcommand(1);
    auto* tbuild = table->add_subcommand("build", "Build (or load from cache) one material table");
    tbuild->add_option("--material", o.material, "e.g. KQvK")->required();
    add_board(tbuild);
    add_common(tbuild, {"text"});
    tbuild->callback([&] { code = cmd_table_build(o); });
    auto* tinfo = table->add_subcommand("info", "Summarize a table file");
    tinfo->add_option("file", path, "Table file")->required();
    add_common(tinfo, {"text", "json"});
    tinfo->callback([&] { code = cmd_table_info(o, path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    } catch (const Error& e) {
        std::cerr << e.what();
        if (e.offset()) std::cerr << " (at offset " << *e.offset() << ")";
        std::cerr << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIllegal;
    }
    return code;
}
