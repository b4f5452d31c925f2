#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "itlb/geometry.hpp"
#include "itlb/intransitivity.hpp"
#include "itlb/rng.hpp"

namespace itlb {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double high = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

std::vector<std::vector<Kind>> expand_slots(const std::vector<std::vector<Kind>>& pattern, std::size_t length) {
    if (pattern.empty()) throw Error(ErrorCode::InvariantViolation, "empty slot pattern");
    std::vector<std::vector<Kind>> out;
    for (std::size_t i = 0; i < length; ++i) out.push_back(pattern[i % pattern.size()]);
    return out;
}

namespace {

void check_slots(const std::vector<std::vector<Kind>>& slots) {
    if (slots.size() < 4 || slots.size() % 2 != 0) {
        throw Error(ErrorCode::ChainInvariantViolation,
                    "chain length must be even and at least 4, got " + std::to_string(slots.size()));
    }
}

MaterialSignature pair_material(const std::vector<std::vector<Kind>>& slots, std::size_t i) {
    const auto& a = slots[i];
    const auto& b = slots[(i + 1) % slots.size()];
    return i % 2 == 0 ? MaterialSignature::of(a, b) : MaterialSignature::of(b, a);
}

Color slot_color(std::size_t i) { return i % 2 == 0 ? Color::White : Color::Black; }

}  // namespace

void prepare_tables(Solver& solver, const BoardSpec& board, const std::vector<std::vector<Kind>>& slots) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const MaterialSignature m = pair_material(slots, i);
        if (m.count() > kMaxNativePieces) {
            if (solver.config().external) continue;
            throw Error(ErrorCode::TooManyPieces, m.to_string() + " exceeds the native table limit");
        }
        solver.table(m, board);
    }
}

McReport monte_carlo(Solver& solver, const McParams& params) {
    check_slots(params.slots);
    if (params.samples == 0) throw Error(ErrorCode::InvariantViolation, "samples must be at least 1");
    if (params.workers < 1) throw Error(ErrorCode::InvariantViolation, "workers must be at least 1");
    prepare_tables(solver, params.board, params.slots);

    const std::size_t n = params.slots.size();
    const auto workers = static_cast<std::uint64_t>(params.workers);

    struct Partial {
        McCounts counts;
        std::optional<CycleCertificate> cert;
        std::uint64_t cert_sample = 0;
        std::exception_ptr error;
    };
    std::vector<Partial> partials(workers);

    auto run = [&](std::uint64_t w) {
        Partial& out = partials[w];
        const std::uint64_t lo = params.samples * w / workers;
        const std::uint64_t hi = params.samples * (w + 1) / workers;
        try {
            for (std::uint64_t s = lo; s < hi; ++s) {
                Rng rng = Rng::substream(params.seed, s);
                std::vector<HalfPosition> members;
                for (std::uint64_t attempt = 0;; ++attempt) {
                    if (attempt >= params.max_attempts) {
                        throw Error(ErrorCode::Unsatisfiable,
                                    "sample " + std::to_string(s) + " found no legal chain in " +
                                        std::to_string(params.max_attempts) + " draws");
                    }
                    members.clear();
                    for (std::size_t i = 0; i < n; ++i) {
                        members.push_back(random_half(params.slots[i], slot_color(i), params.board, rng));
                    }
                    bool legal = true;
                    for (std::size_t i = 0; i < n && legal; ++i) {
                        const auto& a = members[i];
                        const auto& b = members[(i + 1) % n];
                        legal = (i % 2 == 0 ? try_superpose(a, b) : try_superpose(b, a)).has_value();
                    }
                    if (legal) break;
                    ++out.counts.rejected_illegal;
                }
                ChainClassification cls = classify_chain(solver, Chain::make(std::move(members)));
                switch (cls.kind) {
                case ChainClass::Intransitive:
                    ++out.counts.intransitive;
                    if (!out.cert) {
                        out.cert = std::move(cls.certificate);
                        out.cert_sample = s;
                    }
                    break;
                case ChainClass::TransitiveDecisive: ++out.counts.transitive_decisive; break;
                case ChainClass::DrawDegenerate: ++out.counts.draw_degenerate; break;
                }
            }
        } catch (...) {
            out.error = std::current_exception();
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        for (std::uint64_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
        for (auto& t : threads) t.join();
    }

    McReport report;
    report.params = params;
    for (auto& p : partials) {
        if (p.error) std::rethrow_exception(p.error);
        report.counts.intransitive += p.counts.intransitive;
        report.counts.transitive_decisive += p.counts.transitive_decisive;
        report.counts.draw_degenerate += p.counts.draw_degenerate;
        report.counts.rejected_illegal += p.counts.rejected_illegal;
        // Partitions are ordered, so the first worker holding a certificate has the lowest sample.
        if (p.cert && !report.first_certificate) {
            report.first_certificate = std::move(p.cert);
            report.first_certificate_sample = p.cert_sample;
        }
    }
    report.intransitive_share =
        static_cast<double>(report.counts.intransitive) / static_cast<double>(params.samples);
    report.wilson = wilson_interval(report.counts.intransitive, params.samples);
    return report;
}

BudgetExceeded::BudgetExceeded(SearchCursor cursor, std::uint64_t nodes)
    : Error(ErrorCode::BudgetExceeded,
            "node budget exhausted after " + std::to_string(nodes) + " nodes; resume at a=" +
                std::to_string(cursor.a) + " c=" + std::to_string(cursor.c)),
      cursor_(cursor),
      nodes_(nodes) {}

std::vector<HalfPosition> enumerate_halves(std::span<const Kind> material, Color color, const BoardSpec& board) {
    std::vector<Kind> kinds(material.begin(), material.end());
    std::sort(kinds.begin(), kinds.end());
    if (std::count(kinds.begin(), kinds.end(), Kind::King) != 1) {
        throw Error(ErrorCode::InvariantViolation, "one-King: material needs exactly one King");
    }
    std::vector<HalfPosition> out;
    const bool has_pawn = std::count(kinds.begin(), kinds.end(), Kind::Pawn) > 0;
    if (has_pawn && !board.allows_pawns()) return out;

    const Geometry& geo = Geometry::of(board);
    const int squares = board.squares();
    const std::size_t k = kinds.size();
    std::vector<int> sq(k, 0);
    std::vector<bool> used(static_cast<std::size_t>(squares), false);

    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
            std::vector<Placement> ps;
            for (std::size_t j = 0; j < k; ++j) ps.push_back({square_at(board, sq[j]), Piece{color, kinds[j]}});
            out.push_back(HalfPosition::make(board, color, std::move(ps)));
            return;
        }
        const int first = i > 0 && kinds[i] == kinds[i - 1] ? sq[i - 1] + 1 : 0;
        for (int s = first; s < squares; ++s) {
            if (used[static_cast<std::size_t>(s)]) continue;
            if (kinds[i] == Kind::Pawn && geo.is_edge_rank(s)) continue;
            sq[i] = s;
            used[static_cast<std::size_t>(s)] = true;
            self(self, i + 1);
            used[static_cast<std::size_t>(s)] = false;
        }
    };
    rec(rec, 0);
    return out;
}

namespace {

using Bits = std::vector<std::uint64_t>;

// Win bitsets for one White half against every half of one Black slot.
struct Row {
    Bits white_wins;
    Bits black_wins;
};

class Matrix {
public:
    Matrix(Solver& solver, const BoardSpec& board, const std::vector<HalfPosition>& whites,
           const std::vector<HalfPosition>& blacks, const MaterialSignature& material)
        : solver_(solver), board_(board), whites_(whites), blacks_(blacks), rows_(whites.size()) {
        if (material.count() <= kMaxNativePieces) table_ = &solver.table(material, board);
    }

    std::uint64_t row_cost() const { return blacks_.size(); }
    bool has(std::size_t w) const { return !rows_[w].white_wins.empty() || blacks_.empty(); }

    const Row& row(std::size_t w) {
        Row& r = rows_[w];
        if (has(w)) return r;
        const std::size_t words = (blacks_.size() + 63) / 64;
        r.white_wins.assign(words, 0);
        r.black_wins.assign(words, 0);
        Cells base{};
        for (const auto& p : whites_[w].placements()) base[index_of(board_, p.square)] = cell_of(p.piece);
        for (std::size_t b = 0; b < blacks_.size(); ++b) {
            Cells cells = base;
            bool overlap = false;
            for (const auto& p : blacks_[b].placements()) {
                Cell& c = cells[index_of(board_, p.square)];
                if (c != kEmpty) overlap = true;
                c = cell_of(p.piece);
            }
            if (overlap || find_violation(board_, cells, Color::White)) continue;
            Outcome o;
            if (table_) {
                o = table_->at(table_->layout().index_of_cells(cells, Color::White));
            } else {
                o = solver_.solve(WholePosition::unchecked(board_, cells, Color::White));
            }
            if (o.verdict == Verdict::WhiteWins) r.white_wins[b / 64] |= std::uint64_t{1} << (b % 64);
            if (o.verdict == Verdict::BlackWins) r.black_wins[b / 64] |= std::uint64_t{1} << (b % 64);
        }
        return r;
    }

private:
    Solver& solver_;
    BoardSpec board_;
    const std::vector<HalfPosition>& whites_;
    const std::vector<HalfPosition>& blacks_;
    const SolvedTable* table_ = nullptr;
    std::vector<Row> rows_;
};

std::optional<std::size_t> first_common(const Bits& x, const Bits& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (const std::uint64_t m = x[i] & y[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(m));
    }
    return std::nullopt;
}

}  // namespace

ExhaustiveResult exhaustive_search(Solver& solver, const ExhaustiveParams& params) {
    if (params.slots.size() != 4) {
        throw Error(ErrorCode::ChainInvariantViolation, "exhaustive search covers chains of length 4");
    }
    prepare_tables(solver, params.board, params.slots);

    // Slots with equal material share one enumeration and one row cache.
    std::vector<std::vector<HalfPosition>> halves;
    halves.reserve(4);
    std::array<std::size_t, 4> half_of{};
    ExhaustiveResult result;
    for (std::size_t i = 0; i < 4; ++i) {
        half_of[i] = halves.size();
        if (i >= 2 && params.slots[i] == params.slots[i - 2]) {
            half_of[i] = half_of[i - 2];
        } else {
            halves.push_back(enumerate_halves(params.slots[i], slot_color(i), params.board));
        }
        result.slot_sizes.push_back(halves[half_of[i]].size());
    }
    const auto& h0 = halves[half_of[0]];
    const auto& h1 = halves[half_of[1]];
    const auto& h2 = halves[half_of[2]];
    const auto& h3 = halves[half_of[3]];

    // Cached rows cost two bits per pair; refuse spaces that would not fit.
    const double bytes = (static_cast<double>(h0.size()) + static_cast<double>(h2.size())) *
                         (static_cast<double>(h1.size()) + static_cast<double>(h3.size())) / 4.0;
    if (bytes > static_cast<double>(solver.config().table.memory_limit)) {
        throw Error(ErrorCode::ResourceLimit, "search space too large for the row cache");
    }

    std::vector<std::unique_ptr<Matrix>> matrices;
    std::map<std::pair<std::size_t, std::size_t>, Matrix*> by_halves;
    auto matrix = [&](std::size_t w, std::size_t b) {
        auto& slot = by_halves[{half_of[w], half_of[b]}];
        if (!slot) {
            matrices.push_back(std::make_unique<Matrix>(solver, params.board, halves[half_of[w]], halves[half_of[b]],
                                                        MaterialSignature::of(params.slots[w], params.slots[b])));
            slot = matrices.back().get();
        }
        return slot;
    };
    Matrix& m00 = *matrix(0, 1);
    Matrix& m01 = *matrix(0, 3);
    Matrix& m10 = *matrix(2, 1);
    Matrix& m11 = *matrix(2, 3);

    std::uint64_t nodes = 0;
    SearchCursor cur = params.start;
    for (std::uint64_t a = params.start.a; a < h0.size(); ++a) {
        for (std::uint64_t c = a == params.start.a ? params.start.c : 0; c < h2.size(); ++c) {
            std::uint64_t cost = 1;
            const std::array<std::pair<Matrix*, std::uint64_t>, 4> needed{
                {{&m00, a}, {&m01, a}, {&m10, c}, {&m11, c}}};
            for (std::size_t i = 0; i < needed.size(); ++i) {
                const auto [m, row] = needed[i];
                const bool repeat = std::find(needed.begin(), needed.begin() + static_cast<std::ptrdiff_t>(i),
                                              needed[i]) != needed.begin() + static_cast<std::ptrdiff_t>(i);
                if (!repeat && !m->has(row)) cost += m->row_cost();
            }
            if (nodes + cost > params.budget_nodes) throw BudgetExceeded(SearchCursor{a, c}, nodes);
            nodes += cost;
            cur = SearchCursor{a, c};

            const Row& ab = m00.row(a);
            const Row& ad = m01.row(a);
            const Row& cb = m10.row(c);
            const Row& cd = m11.row(c);
            // Forward: a>b, b>c, c>d, d>a. Reverse flips every edge.
            auto b = first_common(ab.white_wins, cb.black_wins);
            auto d = first_common(cd.white_wins, ad.black_wins);
            if (!b || !d) {
                b = first_common(ab.black_wins, cb.white_wins);
                d = first_common(cd.black_wins, ad.white_wins);
            }
            if (!b || !d) continue;
            Chain chain = Chain::make({h0[a], h1[*b], h2[c], h3[*d]});
            ChainClassification cls = classify_chain(solver, chain);
            if (cls.kind != ChainClass::Intransitive) {
                throw Error(ErrorCode::InvariantViolation, "row bitsets disagree with the solver");
            }
            result.certificate = std::move(cls.certificate);
            result.nodes = nodes;
            result.cursor = cur;
            return result;
        }
    }
    result.exhaustive = true;
    result.nodes = nodes;
    result.cursor = SearchCursor{h0.size(), 0};
    return result;
}

}  // namespace itlb
