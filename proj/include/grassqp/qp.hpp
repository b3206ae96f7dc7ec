#pragma once

#include <grassqp/path_algebra.hpp>
#include <grassqp/quiver.hpp>

#include <atomic>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace grassqp {

// Iced quiver with potential. Potential arithmetic happens modulo paths of
// length > cap. The full IQP invariants (terms cyclically inequivalent by
// construction, at least one unexternal arrow per term) hold for the
// constructors and for mutation outputs; pre-mutation outputs may carry
// all-external 2-cycles transiently, which reduction removes.
struct IQP {
    IcedQuiver quiver;
    Potential potential;

    IQP(IcedQuiver q, Potential w)
        : quiver(std::move(q))
        , potential(std::move(w))
    {
    }

    IQP(IcedQuiver q, int cap)
        : quiver(std::move(q))
        , potential(cap)
    {
    }

    int cap() const { return potential.cap(); }

    bool every_term_has_unexternal_arrow() const
    {
        for (const auto& [c, coeff] : potential.terms()) {
            bool ok = false;
            for (int a : c.arrows())
                if (quiver.is_unexternal(a)) {
                    ok = true;
                    break;
                }
            if (!ok)
                return false;
        }
        return true;
    }
};

// Elementary right-equivalence steps recorded by split/mutate so tests can
// replay them. Each step is a vertex-fixing substitution on arrows.
struct SignFlipStep {
    int arrow;
};
struct LinearPairStep {
    int arrow;       // a
    int other;       // a'
    Rational lambda; // a -> a + lambda * a'
};
struct UnitriangularStep {
    int arrow;
    PathSum correction; // a -> a + correction, order(correction) >= 2
};
using EquivalenceStep = std::variant<SignFlipStep, LinearPairStep, UnitriangularStep>;

struct EquivalenceTranscript {
    int cap = 0;
    std::vector<EquivalenceStep> steps;
    // names introduced by pre-mutation, for addressing arrows symbolically
    std::map<int, std::pair<int, int>> composite_names; // [alpha beta] -> (alpha, beta)
    std::map<int, int> star_names;                      // alpha* -> alpha

    bool empty() const { return steps.empty(); }

    // Replay all steps, in order, on a potential over the given quiver.
    Potential replay(const IcedQuiver& q, const Potential& w) const
    {
        PathSum cur = w.as_path_sum();
        for (const auto& step : steps) {
            ArrowSubstitution phi(cap);
            if (const auto* s = std::get_if<SignFlipStep>(&step)) {
                phi.set(q, s->arrow, PathSum::of(Path::of(q, {s->arrow}), -1, cap));
            } else if (const auto* l = std::get_if<LinearPairStep>(&step)) {
                PathSum img = PathSum::of(Path::of(q, {l->arrow}), 1, cap);
                img.add_term(Path::of(q, {l->other}), l->lambda);
                phi.set(q, l->arrow, img);
            } else if (const auto* u = std::get_if<UnitriangularStep>(&step)) {
                PathSum img = PathSum::of(Path::of(q, {u->arrow}), 1, cap);
                img += u->correction;
                phi.set(q, u->arrow, img);
            }
            cur = phi.apply(q, cur);
        }
        Potential out(cap);
        out.add(q, cur);
        return out;
    }
};

struct PremutationResult {
    IQP iqp;
    std::map<int, std::pair<int, int>> composites; // new id -> (alpha, beta)
    std::map<int, int> stars;                      // new id -> original arrow
};

// Pre-mutation at an exchangeable vertex i: composite arrows [alpha beta]
// for every 2-path through i, arrows at i replaced by reversed stars, and
// the potential rewritten as W1-tilde (compositions through i collapsed to
// composites) plus W2-tilde = sum [alpha beta] beta* alpha*.
inline PremutationResult premutate(const IQP& p, int i)
{
    const IcedQuiver& q = p.quiver;
    if (!q.is_exchangeable(i))
        throw std::invalid_argument("premutate: vertex is frozen or out of range");
    if (q.has_two_cycle_through(i))
        throw std::invalid_argument("premutate: 2-cycle through mutation vertex");

    const int cap = p.cap();
    IcedQuiver nq = q;
    std::map<int, std::pair<int, int>> composites;
    std::map<int, int> stars;
    std::map<std::pair<int, int>, int> composite_of; // (alpha, beta) -> id
    std::map<int, int> star_of;                      // original -> star id

    std::vector<int> in = q.arrows_in(i), out = q.arrows_out(i);
    for (int b : in)
        for (int a : out) {
            int id = nq.fresh_id();
            nq.add_arrow(id, q.source(b), q.target(a));
            composites[id] = {a, b};
            composite_of[{a, b}] = id;
        }
    for (int a : in) {
        int id = nq.fresh_id();
        nq.remove_arrow(a);
        nq.add_arrow(id, i, q.source(a));
        stars[id] = a;
        star_of[a] = id;
    }
    for (int a : out) {
        int id = nq.fresh_id();
        nq.remove_arrow(a);
        nq.add_arrow(id, q.target(a), i);
        stars[id] = a;
        star_of[a] = id;
    }

    Potential nw(cap);
    for (const auto& [cycle, coeff] : p.potential.terms()) {
        // Rotate the cycle so that it does not start and end at i; every
        // nontrivial loop-free cycle admits such a rotation.
        const auto& arr = cycle.arrows();
        const int L = cycle.length();
        int off = -1;
        for (int o = 0; o < L && off < 0; ++o)
            if (q.source(arr[o]) != i)
                off = o;
        if (off < 0)
            throw std::invalid_argument("premutate: potential term supported only at i");
        std::vector<int> word;
        word.reserve(L);
        for (int t = 0; t < L; ++t)
            word.push_back(arr[(off + t) % L]);

        // Replace each composition alpha beta with t(beta)=i=s(alpha).
        std::vector<int> rewritten;
        for (int t = 0; t < static_cast<int>(word.size()); ++t) {
            if (q.target(word[t]) == i) {
                if (t + 1 >= static_cast<int>(word.size()))
                    throw std::logic_error("premutate: cycle ends at i after rotation");
                rewritten.push_back(composite_of.at({word[t + 1], word[t]}));
                ++t;
            } else {
                rewritten.push_back(word[t]);
            }
        }
        nw.add_cycle(nq, Path::of(nq, rewritten), coeff);
    }

    // W2-tilde: the triangle [alpha beta] beta* alpha* for every pair;
    // application order alpha*, beta*, [alpha beta].
    for (int b : in)
        for (int a : out) {
            Path tri = Path::of(nq, {star_of.at(a), star_of.at(b), composite_of.at({a, b})});
            nw.add_cycle(nq, tri, 1);
        }

    PremutationResult r{IQP(std::move(nq), std::move(nw)), std::move(composites), std::move(stars)};
    return r;
}

struct SplitResult {
    IQP trivial;
    IQP reduced;
    EquivalenceTranscript transcript;
};

namespace detail {

inline void check_cancel(const std::atomic<bool>* cancel)
{
    if (cancel && cancel->load())
        throw std::runtime_error("operation cancelled");
}

} // namespace detail

// Splitting into trivial + reduced parts. The quadratic part of the
// potential is normalized by linear changes among parallel arrows, pivoting
// by smallest arrow id; afterwards unitriangular substitutions remove every
// occurrence of the trivial arrows from higher terms, one guaranteed-clean
// degree per pass, until the potential is clean through the cap.
inline SplitResult split(const IQP& p, const std::atomic<bool>* cancel = nullptr)
{
    const IcedQuiver& q = p.quiver;
    const int cap = p.cap();
    if (p.potential.as_path_sum().m_adic_order() < 2)
        throw std::invalid_argument("split: potential has terms of length < 2");

    EquivalenceTranscript transcript;
    transcript.cap = cap;

    PathSum W = p.potential.as_path_sum();

    auto canonical_2cycle_coeff = [&](int a, int b) -> Rational {
        // coefficient of the cyclic class of the 2-cycle a b
        return W.coefficient(canonical_rotation(q, Path::of(q, {b, a})));
    };

    auto apply_sub = [&](int arrow, const PathSum& addition) {
        ArrowSubstitution phi(cap);
        PathSum img = PathSum::of(Path::of(q, {arrow}), 1, cap);
        img += addition;
        phi.set(q, arrow, img);
        W = phi.apply(q, W);
        Potential canon(cap);
        canon.add(q, W);
        W = canon.as_path_sum();
    };

    // --- quadratic normalization ---
    // Process anti-parallel arrow pairs. Pivot selection: the nonzero
    // quadratic term whose smaller arrow id is minimal, then the partner id.
    std::vector<std::pair<int, int>> trivial_pairs; // (a, b): term a b, cycle stored via smaller id first
    std::set<int> trivial_arrows;
    for (;;) {
        detail::check_cancel(cancel);
        std::optional<std::pair<int, int>> pivot; // ids (x, y) with x < y
        for (const auto& [cyc, coeff] : W.terms()) {
            if (cyc.length() != 2)
                continue;
            int x = cyc.arrows()[0], y = cyc.arrows()[1];
            if (x > y)
                std::swap(x, y);
            if (trivial_arrows.count(x) || trivial_arrows.count(y))
                continue;
            if (!pivot || std::make_pair(x, y) < *pivot)
                pivot = std::make_pair(x, y);
        }
        if (!pivot)
            break;
        auto [x, y] = *pivot;
        const Rational c = canonical_2cycle_coeff(x, y);
        // eliminate other quadratic terms sharing x or y
        for (;;) {
            std::optional<LinearPairStep> step;
            for (const auto& [cyc, coeff] : W.terms()) {
                if (cyc.length() != 2)
                    continue;
                int u = cyc.arrows()[0], v = cyc.arrows()[1];
                bool hits_x = (u == x || v == x), hits_y = (u == y || v == y);
                if (!hits_x && !hits_y)
                    continue;
                int other = hits_x ? (u == x ? v : u) : (u == y ? v : u);
                if (other == x || other == y)
                    continue;
                // term c' * (x other) -> substitute y += (c'/c) * other?
                // The pairing is x<->y; an extra term against x is removed by
                // shifting y, and vice versa.
                if (hits_x) {
                    step = LinearPairStep{y, other, -coeff / c};
                } else {
                    step = LinearPairStep{x, other, -coeff / c};
                }
                break;
            }
            if (!step)
                break;
            transcript.steps.push_back(*step);
            apply_sub(step->arrow, PathSum::of(Path::of(q, {step->other}), step->lambda, cap));
            detail::check_cancel(cancel);
        }
        trivial_pairs.emplace_back(x, y);
        trivial_arrows.insert(x);
        trivial_arrows.insert(y);
    }

    // --- unitriangular elimination of trivial arrows from higher terms ---
    auto has_dirty_term = [&]() -> int {
        int deg = 0;
        for (const auto& [cyc, coeff] : W.terms()) {
            if (cyc.length() < 3)
                continue;
            for (int a : cyc.arrows())
                if (trivial_arrows.count(a)) {
                    if (deg == 0 || cyc.length() < deg)
                        deg = cyc.length();
                    break;
                }
        }
        return deg; // 0 when clean
    };

    int passes = 0;
    while (int dirty = has_dirty_term()) {
        if (++passes > cap + 2)
            throw std::runtime_error(
                "split: cap " + std::to_string(cap)
                + " too small to stabilize; elimination still changing terms at degree "
                + std::to_string(dirty));
        for (auto [a, b] : trivial_pairs) {
            detail::check_cancel(cancel);
            const Rational c = canonical_2cycle_coeff(a, b);
            if (c == 0)
                throw std::logic_error("split: trivial pair lost its quadratic term");
            // W = c * a b + rest; kill occurrences of b (resp. a) in rest
            PathSum rest = W;
            rest.add_term(canonical_rotation(q, Path::of(q, {b, a})), -c);
            Potential rest_pot(cap);
            rest_pot.add(q, rest);
            PathSum da = cyclic_derivative(q, rest_pot, b); // parallel to a
            PathSum db = cyclic_derivative(q, rest_pot, a); // parallel to b
            if (!da.is_zero()) {
                PathSum corr = Rational(-1) / c * da;
                transcript.steps.push_back(UnitriangularStep{a, corr});
                apply_sub(a, corr);
            }
            if (!db.is_zero()) {
                // recompute: the previous substitution may have changed W
                PathSum rest2 = W;
                rest2.add_term(canonical_rotation(q, Path::of(q, {b, a})),
                               -canonical_2cycle_coeff(a, b));
                Potential rest2_pot(cap);
                rest2_pot.add(q, rest2);
                PathSum db2 = cyclic_derivative(q, rest2_pot, a);
                if (!db2.is_zero()) {
                    PathSum corr = Rational(-1) / canonical_2cycle_coeff(a, b) * db2;
                    transcript.steps.push_back(UnitriangularStep{b, corr});
                    apply_sub(b, corr);
                }
            }
        }
    }

    // --- assemble the two parts ---
    IcedQuiver triv_q(q.n_exchangeable(), q.n_frozen(), {});
    IcedQuiver red_q = q;
    for (const Arrow& a : q.arrows())
        if (trivial_arrows.count(a.id))
            triv_q.add_arrow(a.id, a.src, a.tgt);
    for (int a : trivial_arrows)
        red_q.remove_arrow(a);

    Potential triv_w(cap), red_w(cap);
    for (const auto& [cyc, coeff] : W.terms()) {
        if (cyc.length() == 2) {
            int x = cyc.arrows()[0];
            if (!trivial_arrows.count(x))
                throw std::logic_error("split: residual non-trivial 2-cycle term");
            triv_w.add_cycle(triv_q, cyc, coeff);
        } else {
            red_w.add_cycle(red_q, cyc, coeff);
        }
    }

    return SplitResult{IQP(std::move(triv_q), std::move(triv_w)),
                       IQP(std::move(red_q), std::move(red_w)), std::move(transcript)};
}

struct MutationResult {
    IQP iqp; // the reduced part
    EquivalenceTranscript transcript;
};

// DWZ mutation: the reduced part of the pre-mutation.
inline MutationResult mutate(const IQP& p, int i, const std::atomic<bool>* cancel = nullptr)
{
    PremutationResult pre = premutate(p, i);
    SplitResult sp = split(pre.iqp, cancel);
    sp.transcript.composite_names = std::move(pre.composites);
    sp.transcript.star_names = std::move(pre.stars);
    return MutationResult{std::move(sp.reduced), std::move(sp.transcript)};
}

inline IQP direct_sum(const IQP& a, const IQP& b)
{
    if (a.quiver.n_exchangeable() != b.quiver.n_exchangeable()
        || a.quiver.n_frozen() != b.quiver.n_frozen())
        throw std::invalid_argument("direct_sum: vertex sets differ");
    if (a.cap() != b.cap())
        throw std::invalid_argument("direct_sum: caps differ");

    IcedQuiver q = a.quiver;
    std::map<int, int> remap; // b arrow id -> id in the sum
    for (const Arrow& ar : b.quiver.arrows()) {
        int id = q.has_arrow(ar.id) ? q.fresh_id() : ar.id;
        q.add_arrow(id, ar.src, ar.tgt);
        remap[ar.id] = id;
    }
    Potential w(a.cap());
    for (const auto& [cyc, coeff] : a.potential.terms())
        w.add_cycle(q, cyc, coeff);
    for (const auto& [cyc, coeff] : b.potential.terms()) {
        std::vector<int> word;
        for (int x : cyc.arrows())
            word.push_back(remap.at(x));
        w.add_cycle(q, Path::of(q, word), coeff);
    }
    return IQP(std::move(q), std::move(w));
}

// Whether every term keeps an unexternal arrow and all cyclic derivatives
// along unexternal arrows have order >= 2.
inline bool is_reduced(const IQP& p)
{
    if (!p.every_term_has_unexternal_arrow())
        return false;
    for (const Arrow& a : p.quiver.arrows())
        if (p.quiver.is_unexternal(a.id))
            if (cyclic_derivative(p.quiver, p.potential, a.id).m_adic_order() < 2)
                return false;
    return true;
}

// Sign map xi: arrows -> {+1,-1} such that flipping each arrow a by xi(a)
// carries W1 to W2 modulo cyclic equivalence; found by solving the F2
// linear system with one equation per matched term pair. Empty optional if
// supports differ, a coefficient ratio is not +-1, or the system is
// unsolvable.
inline std::optional<std::map<int, int>> equivalent_up_to_signs(const Potential& w1,
                                                                const Potential& w2,
                                                                const IcedQuiver& q)
{
    if (w1.cap() != w2.cap())
        throw std::invalid_argument("equivalent_up_to_signs: caps differ");
    if (w1.terms().size() != w2.terms().size())
        return std::nullopt;

    std::vector<int> arrow_ids;
    for (const Arrow& a : q.arrows())
        arrow_ids.push_back(a.id);
    std::map<int, int> col;
    for (std::size_t i = 0; i < arrow_ids.size(); ++i)
        col[arrow_ids[i]] = static_cast<int>(i);
    const int ncols = static_cast<int>(arrow_ids.size());

    // rows of the F2 system, each ncols+1 bits (last = rhs)
    std::vector<std::vector<char>> rows;
    for (const auto& [cyc, c1] : w1.terms()) {
        Rational c2 = w2.terms().count(cyc) ? w2.terms().at(cyc) : Rational(0);
        if (c2 == 0)
            return std::nullopt;
        Rational ratio = c2 / c1;
        int rhs;
        if (ratio == 1)
            rhs = 0;
        else if (ratio == -1)
            rhs = 1;
        else
            return std::nullopt;
        std::vector<char> row(ncols + 1, 0);
        for (int a : cyc.arrows())
            row[col.at(a)] ^= 1;
        row[ncols] = static_cast<char>(rhs);
        rows.push_back(std::move(row));
    }

    // F2 Gaussian elimination
    int rank = 0;
    std::vector<int> pivot_col;
    for (int c = 0; c < ncols && rank < static_cast<int>(rows.size()); ++c) {
        int pr = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][c]) {
                pr = r;
                break;
            }
        if (pr < 0)
            continue;
        std::swap(rows[rank], rows[pr]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r)
            if (r != rank && rows[r][c])
                for (int j = c; j <= ncols; ++j)
                    rows[r][j] ^= rows[rank][j];
        pivot_col.push_back(c);
        ++rank;
    }
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
        if (rows[r][ncols])
            return std::nullopt; // inconsistent

    std::map<int, int> xi;
    for (int a : arrow_ids)
        xi[a] = 1;
    for (int r = 0; r < rank; ++r)
        if (rows[r][ncols])
            xi[arrow_ids[pivot_col[r]]] = -1;
    return xi;
}

// Applies a sign map to a potential.
inline Potential apply_signs(const IcedQuiver& q, const Potential& w,
                             const std::map<int, int>& xi)
{
    Potential out(w.cap());
    for (const auto& [cyc, coeff] : w.terms()) {
        Rational c = coeff;
        for (int a : cyc.arrows()) {
            auto it = xi.find(a);
            if (it != xi.end() && it->second < 0)
                c = -c;
        }
        out.add_cycle(q, cyc, c);
    }
    return out;
}

// Vertex subsets whose full subquiver is exactly one cycle with pairwise
// distinct sources, such that no cyclically equivalent term appears in the
// potential. An empty result means the induced-cycle hypothesis holds.
inline std::vector<Path> check_induced_cycle_condition(const IQP& p)
{
    const IcedQuiver& q = p.quiver;
    const int nv = q.vertex_count();
    if (nv > 24)
        throw std::invalid_argument("check_induced_cycle_condition: quiver too large");

    std::vector<Path> violations;
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << nv); ++mask) {
        int size = __builtin_popcountll(mask);
        if (size < 2)
            continue;
        auto in_set = [&](int v) { return (mask >> (v - 1)) & 1; };

        // collect arrows of the full subquiver
        std::vector<const Arrow*> sub;
        bool too_many = false;
        for (const Arrow& a : q.arrows()) {
            if (in_set(a.src) && in_set(a.tgt)) {
                sub.push_back(&a);
                if (static_cast<int>(sub.size()) > size) {
                    too_many = true;
                    break;
                }
            }
        }
        if (too_many || static_cast<int>(sub.size()) != size)
            continue;

        // single directed cycle visiting each vertex exactly once
        std::map<int, const Arrow*> out_arrow;
        bool ok = true;
        for (const Arrow* a : sub) {
            if (out_arrow.count(a->src)) {
                ok = false;
                break;
            }
            out_arrow[a->src] = a;
        }
        if (!ok || static_cast<int>(out_arrow.size()) != size)
            continue;
        // all in-degrees are then forced to 1; walk the cycle
        int start = 0;
        for (int v = 1; v <= nv; ++v)
            if (in_set(v)) {
                start = v;
                break;
            }
        std::vector<int> word;
        std::set<int> visited;
        int at = start;
        for (int t = 0; t < size; ++t) {
            if (!visited.insert(at).second) {
                ok = false; // returned early: disjoint union of cycles
                break;
            }
            auto it = out_arrow.find(at);
            if (it == out_arrow.end()) {
                ok = false;
                break;
            }
            word.push_back(it->second->id);
            at = it->second->tgt;
        }
        if (!ok || at != start || static_cast<int>(word.size()) != size)
            continue;

        Path cycle = Path::of(q, word);
        if (p.potential.coefficient_of_class(q, cycle) == 0)
            violations.push_back(canonical_rotation(q, cycle));
    }
    return violations;
}

} // namespace grassqp
