#include "itlb/intransitivity.hpp"

#include <sstream>

namespace itlb {

std::string_view to_string(BeatsResult r) {
    switch (r) {
    case BeatsResult::XBeats: return "XBeats";
    case BeatsResult::YBeats: return "YBeats";
    case BeatsResult::Neither: return "Neither";
    }
    return "?";
}

std::string_view to_string(Direction d) { return d == Direction::Forward ? "forward" : "reverse"; }

std::string_view to_string(ChainClass c) {
    switch (c) {
    case ChainClass::Intransitive: return "Intransitive";
    case ChainClass::TransitiveDecisive: return "TransitiveDecisive";
    case ChainClass::DrawDegenerate: return "DrawDegenerate";
    }
    return "?";
}

BeatsResult beats(Solver& solver, const HalfPosition& x, const HalfPosition& y) {
    if (x.color() == y.color()) throw Error(ErrorCode::InvariantViolation, "beats needs opposite-color halves");
    const bool x_white = x.color() == Color::White;
    const WholePosition pos = x_white ? superpose(x, y) : superpose(y, x);
    const Outcome o = solver.solve(pos);
    if (!o.winner()) return BeatsResult::Neither;
    return *o.winner() == x.color() ? BeatsResult::XBeats : BeatsResult::YBeats;
}

Chain Chain::make(std::vector<HalfPosition> members) {
    const std::size_t n = members.size();
    if (n < 4 || n % 2 != 0) {
        throw Error(ErrorCode::ChainInvariantViolation, "chain length must be even and at least 4, got " +
                                                            std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Color expected = i % 2 == 0 ? Color::White : Color::Black;
        if (members[i].color() != expected) {
            throw Error(ErrorCode::ChainInvariantViolation, "member " + label(i) + " should be " +
                                                                std::string(to_string(expected)));
        }
        if (!(members[i].board() == members[0].board())) {
            throw Error(ErrorCode::ChainInvariantViolation, "member " + label(i) + " is on a different board");
        }
    }
    Chain c;
    c.members_ = std::move(members);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = c.members_[i];
        const auto& b = c.members_[(i + 1) % n];
        const bool ok = a.color() == Color::White ? try_superpose(a, b).has_value() : try_superpose(b, a).has_value();
        if (!ok) {
            throw Error(ErrorCode::ChainInvariantViolation, "members " + label(i) + " and " + label((i + 1) % n) +
                                                                " do not superpose legally");
        }
    }
    return c;
}

WholePosition Chain::edge_position(std::size_t i) const {
    const auto& a = members_[i % size()];
    const auto& b = members_[(i + 1) % size()];
    return a.color() == Color::White ? superpose(a, b) : superpose(b, a);
}

std::string Chain::label(std::size_t i) {
    std::string out;
    do {
        out.insert(out.begin(), static_cast<char>('A' + i % 26));
        i /= 26;
    } while (i-- > 0);
    return out;
}

ChainClassification classify_chain(Solver& solver, const Chain& chain) {
    ChainClassification result;
    const std::size_t n = chain.size();
    bool any_draw = false;
    bool forward = true;
    bool reverse = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Outcome o = solver.solve(chain.edge_position(i));
        result.edges.push_back({i, (i + 1) % n, o});
        if (!o.winner()) {
            any_draw = true;
            continue;
        }
        const bool first_wins = *o.winner() == chain.members()[i].color();
        forward &= first_wins;
        reverse &= !first_wins;
    }
    if (any_draw) {
        result.kind = ChainClass::DrawDegenerate;
    } else if (forward || reverse) {
        result.kind = ChainClass::Intransitive;
        result.certificate = CycleCertificate{chain, result.edges, forward ? Direction::Forward : Direction::Reverse};
    } else {
        result.kind = ChainClass::TransitiveDecisive;
    }
    return result;
}

std::vector<Preference> oriented_edges(const Chain& chain, std::span<const EdgeResult> edges) {
    std::vector<Preference> out;
    for (const auto& e : edges) {
        if (!e.outcome.winner()) continue;
        const bool from_wins = *e.outcome.winner() == chain.members()[e.from].color();
        const std::string a = Chain::label(e.from);
        const std::string b = Chain::label(e.to);
        out.push_back(from_wins ? Preference{a, b} : Preference{b, a});
    }
    return out;
}

std::string serialize_certificate(const CycleCertificate& cert) {
    std::ostringstream out;
    out << "itlb-certificate 1\n";
    out << "board " << cert.chain.board().to_string() << '\n';
    out << "length " << cert.chain.size() << '\n';
    out << "direction " << to_string(cert.direction) << '\n';
    for (std::size_t i = 0; i < cert.chain.size(); ++i) {
        out << "member " << Chain::label(i) << ' ' << encode(cert.chain.members()[i]) << '\n';
    }
    for (const auto& e : cert.edges) {
        out << "edge " << Chain::label(e.from) << ' ' << Chain::label(e.to) << ' ' << e.outcome.to_string() << '\n';
    }
    out << "convention " << kDrawConvention << '\n';
    out << "end\n";
    return out.str();
}

CycleCertificate parse_certificate(std::string_view text) {
    std::vector<std::pair<std::string_view, std::size_t>> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.emplace_back(line, pos);
        pos = nl + 1;
    }
    std::size_t at = 0;
    auto expect = [&](std::string_view key) -> std::string_view {
        if (at >= lines.size()) throw Error(ErrorCode::ParseError, "certificate ends before '" + std::string(key) + "'", text.size());
        auto [line, off] = lines[at];
        if (line.substr(0, key.size() + 1) != std::string(key) + " ") {
            throw Error(ErrorCode::ParseError, "expected '" + std::string(key) + "' line", off);
        }
        ++at;
        return line.substr(key.size() + 1);
    };
    if (expect("itlb-certificate") != "1") throw Error(ErrorCode::ParseError, "unsupported certificate version", 0);
    const BoardSpec board = BoardSpec::parse(expect("board"));
    const std::string length_text(expect("length"));
    const std::size_t n = std::stoul(length_text);
    const std::string_view dir = expect("direction");
    Direction direction;
    if (dir == "forward") {
        direction = Direction::Forward;
    } else if (dir == "reverse") {
        direction = Direction::Reverse;
    } else {
        throw Error(ErrorCode::ParseError, "direction must be forward or reverse", lines[at - 1].second);
    }
    std::vector<HalfPosition> members;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t off = at < lines.size() ? lines[at].second : text.size();
        const std::string_view rest = expect("member");
        const auto sp = rest.find(' ');
        if (sp == std::string_view::npos || rest.substr(0, sp) != Chain::label(i)) {
            throw Error(ErrorCode::ParseError, "expected member " + Chain::label(i), off);
        }
        members.push_back(decode_half(rest.substr(sp + 1), board));
    }
    Chain chain = Chain::make(std::move(members));
    std::vector<EdgeResult> edges;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t off = at < lines.size() ? lines[at].second : text.size();
        const std::string_view rest = expect("edge");
        const std::string prefix = Chain::label(i) + " " + Chain::label((i + 1) % n) + " ";
        if (rest.substr(0, prefix.size()) != prefix) {
            throw Error(ErrorCode::ParseError, "expected edge " + prefix, off);
        }
        edges.push_back({i, (i + 1) % n, Outcome::parse(rest.substr(prefix.size()))});
    }
    expect("convention");
    if (at >= lines.size() || lines[at].first != "end") {
        throw Error(ErrorCode::ParseError, "expected 'end'", at < lines.size() ? lines[at].second : text.size());
    }
    return CycleCertificate{std::move(chain), std::move(edges), direction};
}

CertificateCheck verify_certificate(Solver& solver, const CycleCertificate& cert) {
    CertificateCheck check;
    const std::size_t n = cert.chain.size();
    check.orientation_ok = cert.edges.size() == n;
    bool all_pass = cert.edges.size() == n;
    for (std::size_t i = 0; i < cert.edges.size(); ++i) {
        const EdgeResult& e = cert.edges[i];
        const Outcome fresh = solver.solve(cert.chain.edge_position(e.from));
        const bool pass = e.from == i && e.to == (i + 1) % n && fresh == e.outcome;
        check.edges.push_back({e, fresh, pass});
        all_pass &= pass;
        if (!fresh.winner()) {
            check.orientation_ok = false;
            continue;
        }
        const bool from_wins = *fresh.winner() == cert.chain.members()[e.from].color();
        if (from_wins != (cert.direction == Direction::Forward)) check.orientation_ok = false;
    }
    check.pass = all_pass && check.orientation_ok;
    return check;
}

}  // namespace itlb
