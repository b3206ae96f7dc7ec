#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <grassqp/qp.hpp>

using namespace grassqp;

namespace {

constexpr int kCap = 12;

// al: 1->2 (id 0), be: 2->3 (id 1), ga: 3->1 (id 2), W = ga.be.al
IQP three_cycle_iqp()
{
    IcedQuiver q(3, 0, {{0, 1, 2}, {1, 2, 3}, {2, 3, 1}});
    Potential w(kCap);
    w.add_cycle(q, Path::of(q, {0, 1, 2}), 1);
    return IQP(q, w);
}

} // namespace

TEST_CASE("premutate the 3-cycle at vertex 2: hand-derived expectation")
{
    // Through vertex 2 the unique 2-path is be after al. Pre-mutation must
    // add [be al]: 1->3, reverse al, be into stars, and produce
    // W-tilde = ga.[be al] + [be al].al*.be*.
    IQP p = three_cycle_iqp();
    PremutationResult r = premutate(p, 2);
    const IcedQuiver& nq = r.iqp.quiver;

    REQUIRE(r.composites.size() == 1);
    int comp = r.composites.begin()->first;
    CHECK(r.composites.begin()->second == std::make_pair(1, 0)); // (alpha=be, beta=al)
    CHECK(nq.source(comp) == 1);
    CHECK(nq.target(comp) == 3);
    REQUIRE(r.stars.size() == 2);
    CHECK(nq.arrow_count() == 4); // ga, [be al], al*, be*
    CHECK(nq.multiplicity(2, 1) == 1);
    CHECK(nq.multiplicity(3, 2) == 1);

    int al_star = 0, be_star = 0;
    for (const auto& [sid, orig] : r.stars)
        (orig == 0 ? al_star : be_star) = sid;

    Potential expected(kCap);
    expected.add_cycle(nq, Path::of(nq, {comp, 2}), 1);                  // ga [be al]
    expected.add_cycle(nq, Path::of(nq, {be_star, al_star, comp}), 1);   // [be al] al* be*
    CHECK(r.iqp.potential == expected);
}

TEST_CASE("premutate leaves terms not passing through i untouched")
{
    // mutate at a vertex the potential term avoids
    IcedQuiver q(4, 0, {{0, 1, 2}, {1, 2, 3}, {2, 3, 1}, {3, 1, 4}, {4, 4, 2}});
    Potential w(kCap);
    w.add_cycle(q, Path::of(q, {0, 1, 2}), 1);
    IQP p(q, w);
    PremutationResult r = premutate(p, 4);
    // W1-tilde = W; W2-tilde adds [a4 a3] a3* a4*
    CHECK(r.iqp.potential.terms().size() == 2);
    CHECK(r.iqp.potential.coefficient_of_class(r.iqp.quiver, Path::of(r.iqp.quiver, {0, 1, 2})) == 1);
}

TEST_CASE("premutate at a vertex with one incoming and no outgoing arrow")
{
    IcedQuiver q(2, 0, {{0, 1, 2}});
    IQP p(q, Potential(kCap));
    PremutationResult r = premutate(p, 2);
    CHECK(r.composites.empty());
    CHECK(r.iqp.potential.is_zero());
    CHECK(r.iqp.quiver.multiplicity(2, 1) == 1);
}

TEST_CASE("premutate preconditions are reported")
{
    IQP p = three_cycle_iqp();
    CHECK_THROWS(premutate(p, 7));
    IcedQuiver twocyc(2, 0, {{0, 1, 2}, {1, 2, 1}});
    IQP p2(twocyc, Potential(kCap));
    CHECK_THROWS(premutate(p2, 1));
    IcedQuiver frozen(1, 1, {{0, 1, 2}});
    IQP p3(frozen, Potential(kCap));
    CHECK_THROWS(premutate(p3, 2));
}

TEST_CASE("split: a single 2-cycle term is entirely trivial")
{
    IcedQuiver q(2, 0, {{0, 1, 2}, {1, 2, 1}});
    Potential w(kCap);
    w.add_cycle(q, Path::of(q, {0, 1}), Rational(3));
    SplitResult s = split(IQP(q, w));
    CHECK(s.trivial.quiver.arrow_count() == 2);
    CHECK(s.trivial.potential.terms().size() == 1);
    CHECK(s.reduced.quiver.arrow_count() == 0);
    CHECK(s.reduced.potential.is_zero());
}

TEST_CASE("split of an already reduced IQP is the identity")
{
    IQP p = three_cycle_iqp();
    REQUIRE(is_reduced(p));
    SplitResult s = split(p);
    CHECK(s.trivial.quiver.arrow_count() == 0);
    CHECK(s.reduced.quiver == p.quiver);
    CHECK(s.reduced.potential == p.potential);
    CHECK(s.transcript.empty());
}

TEST_CASE("mutation of the 3-cycle QP gives the path quiver with zero potential")
{
    IQP p = three_cycle_iqp();
    MutationResult m = mutate(p, 2);
    CHECK(m.iqp.quiver.arrow_count() == 2);
    CHECK(m.iqp.quiver.multiplicity(3, 2) == 1);
    CHECK(m.iqp.quiver.multiplicity(2, 1) == 1);
    CHECK(m.iqp.potential.is_zero());
    CHECK(is_reduced(m.iqp));
}

TEST_CASE("mutating an acyclic quiver with zero potential matches quiver mutation")
{
    IcedQuiver q(3, 1, {{0, 1, 2}, {1, 2, 3}, {2, 2, 4}});
    IQP p(q, Potential(kCap));
    MutationResult m = mutate(p, 2);
    IcedQuiver fz = mutate_quiver(q, 2);
    auto iso = are_isomorphic(m.iqp.quiver, fz, true);
    REQUIRE(iso.has_value());
    for (int v = 1; v <= q.vertex_count(); ++v)
        CHECK((*iso)[v - 1] == v);
    // each composable 2-path through the vertex leaves one W2-tilde triangle
    CHECK(m.iqp.potential.terms().size() == 2);
    CHECK(is_reduced(m.iqp));

    // at a sink nothing composes and the potential stays zero
    MutationResult sink = mutate(p, 3);
    CHECK(sink.iqp.potential.is_zero());
    CHECK(are_isomorphic(sink.iqp.quiver, mutate_quiver(q, 3), true).has_value());
}

TEST_CASE("split transcript replays to the post-substitution potential")
{
    // premutation of the 3-cycle QP: nontrivial reduction with transcript
    IQP p = three_cycle_iqp();
    PremutationResult pre = premutate(p, 2);
    SplitResult s = split(pre.iqp);

    Potential replayed = s.transcript.replay(pre.iqp.quiver, pre.iqp.potential);
    // replayed = trivial potential + reduced potential as cyclic classes
    Potential expected = s.trivial.potential;
    Potential direct(expected.cap());
    for (const auto& [cyc, c] : expected.terms())
        direct.add_cycle(pre.iqp.quiver, cyc, c);
    for (const auto& [cyc, c] : s.reduced.potential.terms())
        direct.add_cycle(pre.iqp.quiver, cyc, c);
    CHECK(replayed == direct);
}

TEST_CASE("direct sum: unit, and trivial + reduced reassemble premutation output")
{
    IQP p = three_cycle_iqp();
    IQP unit(IcedQuiver(3, 0, {}), Potential(kCap));
    IQP sum = direct_sum(p, unit);
    CHECK(sum.quiver == p.quiver);
    CHECK(sum.potential == p.potential);

    PremutationResult pre = premutate(p, 2);
    SplitResult s = split(pre.iqp);
    IQP gathered = direct_sum(s.trivial, s.reduced);
    CHECK(gathered.quiver.arrow_count() == pre.iqp.quiver.arrow_count());
    // same arrows (ids preserved: trivial and reduced partition the arrows)
    CHECK(are_isomorphic(gathered.quiver, pre.iqp.quiver, true).has_value());
    // and the reassembled potential is the replayed (post-equivalence) one
    Potential replayed = s.transcript.replay(pre.iqp.quiver, pre.iqp.potential);
    Potential gathered_w(kCap);
    for (const auto& [cyc, c] : gathered.potential.terms())
        gathered_w.add_cycle(pre.iqp.quiver, cyc, c);
    CHECK(gathered_w == replayed);
}

TEST_CASE("direct sum reallocates colliding arrow ids deterministically")
{
    IcedQuiver qa(2, 0, {{0, 1, 2}});
    IcedQuiver qb(2, 0, {{0, 2, 1}});
    IQP a(qa, Potential(kCap)), b(qb, Potential(kCap));
    IQP s = direct_sum(a, b);
    CHECK(s.quiver.arrow_count() == 2);
    CHECK(s.quiver.multiplicity(1, 2) == 1);
    CHECK(s.quiver.multiplicity(2, 1) == 1);

    IcedQuiver qc(3, 0, {{0, 1, 2}});
    CHECK_THROWS(direct_sum(a, IQP(qc, Potential(kCap))));
}

TEST_CASE("mutation is involutive on the 3-cycle up to signs")
{
    IQP p = three_cycle_iqp();
    MutationResult m1 = mutate(p, 2);
    MutationResult m2 = mutate(m1.iqp, 2);

    auto iso = are_isomorphic(m2.iqp.quiver, p.quiver, true);
    REQUIRE(iso.has_value());
    for (int v = 1; v <= p.quiver.vertex_count(); ++v)
        CHECK((*iso)[v - 1] == v);

    // identify arrows of the double mutation with the original by ordered
    // endpoint pair (all multiplicities here are one)
    std::map<std::pair<int, int>, int> orig;
    for (const Arrow& a : p.quiver.arrows())
        orig[{a.src, a.tgt}] = a.id;
    Potential renamed(p.cap());
    for (const auto& [cyc, c] : m2.iqp.potential.terms()) {
        std::vector<int> word;
        for (int aid : cyc.arrows()) {
            const Arrow& a = m2.iqp.quiver.arrow(aid);
            word.push_back(orig.at({a.src, a.tgt}));
        }
        renamed.add_cycle(p.quiver, Path::of(p.quiver, word), c);
    }
    auto xi = equivalent_up_to_signs(renamed, p.potential, p.quiver);
    CHECK(xi.has_value());
}

TEST_CASE("sign equivalence: identity, single flip, and failures")
{
    IQP p = three_cycle_iqp();
    auto xi = equivalent_up_to_signs(p.potential, p.potential, p.quiver);
    REQUIRE(xi.has_value());
    for (auto [a, s] : *xi)
        CHECK(s == 1);

    Potential neg(p.cap());
    neg.add_cycle(p.quiver, Path::of(p.quiver, {0, 1, 2}), -1);
    auto xi2 = equivalent_up_to_signs(p.potential, neg, p.quiver);
    REQUIRE(xi2.has_value());
    int flips = 0;
    for (auto [a, s] : *xi2)
        if (s < 0)
            ++flips;
    CHECK(flips % 2 == 1);
    CHECK(apply_signs(p.quiver, p.potential, *xi2) == neg);

    Potential twice(p.cap());
    twice.add_cycle(p.quiver, Path::of(p.quiver, {0, 1, 2}), 2);
    CHECK_FALSE(equivalent_up_to_signs(p.potential, twice, p.quiver).has_value());

    Potential empty(p.cap());
    CHECK_FALSE(equivalent_up_to_signs(p.potential, empty, p.quiver).has_value());
}

TEST_CASE("is_reduced examples")
{
    IcedQuiver q2(2, 0, {{0, 1, 2}, {1, 2, 1}});
    Potential w2(kCap);
    w2.add_cycle(q2, Path::of(q2, {0, 1}), 1);
    CHECK_FALSE(is_reduced(IQP(q2, w2)));

    CHECK(is_reduced(three_cycle_iqp()));

    IQP zero(IcedQuiver(2, 0, {{0, 1, 2}}), Potential(kCap));
    CHECK(is_reduced(zero));
}

TEST_CASE("induced cycle condition checker")
{
    // single 3-cycle quiver with the cycle in W: no violations
    IQP p = three_cycle_iqp();
    CHECK(check_induced_cycle_condition(p).empty());

    // same quiver, zero potential: exactly one violation
    IQP p0(p.quiver, Potential(kCap));
    auto v = check_induced_cycle_condition(p0);
    REQUIRE(v.size() == 1);
    CHECK(v[0].length() == 3);

    // disjoint union of two 2-cycles on 4 vertices is not a violation
    // (full subquiver on all four vertices is not a single cycle)
    IcedQuiver q4(4, 0, {{0, 1, 2}, {1, 2, 1}, {2, 3, 4}, {3, 4, 3}});
    IQP p4(q4, Potential(kCap));
    auto v4 = check_induced_cycle_condition(p4);
    CHECK(v4.size() == 2); // each 2-cycle individually, nothing for the union
}

TEST_CASE("premutate never changes the frozen set and never makes loops")
{
    IcedQuiver q(2, 2, {{0, 3, 1}, {1, 1, 2}, {2, 2, 4}, {3, 4, 3}});
    Potential w(kCap);
    w.add_cycle(q, Path::of(q, {0, 1, 2, 3}), 1);
    IQP p(q, w);
    PremutationResult r = premutate(p, 1);
    CHECK(r.iqp.quiver.n_frozen() == 2);
    for (const Arrow& a : r.iqp.quiver.arrows())
        CHECK(a.src != a.tgt);
}

TEST_CASE("mutation handles the all-external composite digon")
{
    // f1 -> a -> f2 with existing external f2 -> f1 and the triangle in W:
    // mutation cancels the composite against the external arrow.
    IcedQuiver q(1, 2, {{0, 2, 1}, {1, 1, 3}, {2, 3, 2}});
    Potential w(kCap);
    w.add_cycle(q, Path::of(q, {0, 1, 2}), 1);
    IQP p(q, w);
    MutationResult m = mutate(p, 1);
    // composite f1->f2 and external f2->f1 both vanish; stars stay
    CHECK(m.iqp.quiver.arrow_count() == 2);
    CHECK(m.iqp.quiver.multiplicity(1, 2) == 1);
    CHECK(m.iqp.quiver.multiplicity(3, 1) == 1);
    CHECK(m.iqp.potential.is_zero());
}
