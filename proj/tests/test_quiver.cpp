#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <grassqp/quiver.hpp>

using namespace grassqp;

namespace {

IcedQuiver three_cycle()
{
    // 1 --0--> 2 --1--> 3 --2--> 1
    return IcedQuiver(3, 0, {{0, 1, 2}, {1, 2, 3}, {2, 3, 1}});
}

} // namespace

TEST_CASE("arrow classification partitions by frozen endpoints")
{
    // 1 -> 2 with 2 frozen
    IcedQuiver q(1, 1, {{0, 1, 2}});
    CHECK(q.classify(0) == ArrowClass::Boundary);

    IcedQuiver q2(2, 0, {{0, 1, 2}});
    CHECK(q2.classify(0) == ArrowClass::Internal);

    IcedQuiver q3(0, 2, {{0, 1, 2}});
    CHECK(q3.classify(0) == ArrowClass::External);

    CHECK_THROWS(q.classify(7));
}

TEST_CASE("principal part keeps exchangeable full subquiver, ids preserved")
{
    IcedQuiver q(2, 1, {{5, 1, 2}, {6, 2, 3}, {7, 3, 1}});
    IcedQuiver p = principal_part(q);
    CHECK(p.n_frozen() == 0);
    CHECK(p.n_exchangeable() == 2);
    REQUIRE(p.arrow_count() == 1);
    CHECK(p.arrows()[0].id == 5);

    IcedQuiver nofrozen = three_cycle();
    CHECK(principal_part(nofrozen) == nofrozen);

    IcedQuiver edge(1, 1, {{0, 1, 2}});
    IcedQuiver pe = principal_part(edge);
    CHECK(pe.vertex_count() == 1);
    CHECK(pe.arrow_count() == 0);
}

TEST_CASE("quiver constructor rejects loops, duplicate ids, bad ranges")
{
    CHECK_THROWS(IcedQuiver(2, 0, {{0, 1, 1}}));
    CHECK_THROWS(IcedQuiver(2, 0, {{0, 1, 2}, {0, 2, 1}}));
    CHECK_THROWS(IcedQuiver(2, 0, {{0, 1, 5}}));
}

TEST_CASE("mutation: single arrow reverses")
{
    IcedQuiver q(2, 0, {{0, 1, 2}});
    IcedQuiver m = mutate_quiver(q, 1);
    REQUIRE(m.arrow_count() == 1);
    CHECK(m.arrows()[0].src == 2);
    CHECK(m.arrows()[0].tgt == 1);
}

TEST_CASE("mutation of 3-cycle at middle vertex cancels the closing arrow")
{
    // paths 1->2->3 compose to a new 1->3 cancelling the existing 3->1
    IcedQuiver m = mutate_quiver(three_cycle(), 2);
    CHECK(m.arrow_count() == 2);
    CHECK(m.multiplicity(3, 2) == 1);
    CHECK(m.multiplicity(2, 1) == 1);
    CHECK(m.multiplicity(1, 3) == 0);
    CHECK(m.multiplicity(3, 1) == 0);
}

TEST_CASE("mutation of Kronecker quiver at sink reverses both arrows")
{
    IcedQuiver q(2, 0, {{0, 1, 2}, {1, 1, 2}});
    IcedQuiver m = mutate_quiver(q, 2);
    CHECK(m.arrow_count() == 2);
    CHECK(m.multiplicity(2, 1) == 2);
}

TEST_CASE("mutation preconditions")
{
    IcedQuiver q(1, 1, {{0, 1, 2}});
    CHECK_THROWS(mutate_quiver(q, 2)); // frozen
    IcedQuiver two(2, 0, {{0, 1, 2}, {1, 2, 1}});
    CHECK_THROWS(mutate_quiver(two, 1)); // 2-cycle at vertex
}

TEST_CASE("mutation is involutive up to arrow-id renaming")
{
    auto check_involution = [](const IcedQuiver& q, int v) {
        IcedQuiver mm = mutate_quiver(mutate_quiver(q, v), v);
        auto iso = are_isomorphic(q, mm, /*fix_frozen=*/true);
        REQUIRE(iso.has_value());
        // identity on vertices: multiplicity tables agree pointwise
        for (int u = 1; u <= q.vertex_count(); ++u)
            CHECK((*iso)[u - 1] == u);
    };
    check_involution(three_cycle(), 2);
    IcedQuiver iced(2, 2, {{0, 1, 2}, {1, 2, 3}, {2, 4, 1}});
    check_involution(iced, 1);
    check_involution(iced, 2);
}

TEST_CASE("mutation never changes vertex counts or the frozen set")
{
    IcedQuiver iced(2, 2, {{0, 1, 2}, {1, 2, 3}, {2, 4, 1}});
    IcedQuiver m = mutate_quiver(iced, 2);
    CHECK(m.n_exchangeable() == 2);
    CHECK(m.n_frozen() == 2);
}

TEST_CASE("mutation commutes with opposite")
{
    IcedQuiver q(3, 1, {{0, 1, 2}, {1, 2, 3}, {2, 3, 1}, {3, 2, 4}, {4, 4, 3}});
    for (int v = 1; v <= 3; ++v) {
        IcedQuiver a = mutate_quiver(opposite(q), v);
        IcedQuiver b = opposite(mutate_quiver(q, v));
        CHECK(are_isomorphic(a, b, true).has_value());
    }
}

TEST_CASE("opposite is an involution")
{
    IcedQuiver q(2, 1, {{0, 1, 2}, {1, 2, 3}});
    CHECK(opposite(opposite(q)) == q);
    CHECK(opposite(q).multiplicity(2, 1) == 1);
    IcedQuiver c = three_cycle();
    CHECK(opposite(c).multiplicity(2, 1) == 1);
    CHECK(opposite(c).multiplicity(1, 3) == 1);
}

TEST_CASE("isomorphism: identity, relabeling, and a negative case")
{
    IcedQuiver q = three_cycle();
    auto id = are_isomorphic(q, q);
    REQUIRE(id.has_value());

    IcedQuiver a(2, 0, {{0, 1, 2}});
    IcedQuiver b(2, 0, {{0, 2, 1}});
    auto sw = are_isomorphic(a, b);
    REQUIRE(sw.has_value());
    CHECK((*sw)[0] == 2);
    CHECK((*sw)[1] == 1);

    IcedQuiver path3(3, 0, {{0, 1, 2}, {1, 2, 3}});
    CHECK_FALSE(are_isomorphic(three_cycle(), path3).has_value());
}

TEST_CASE("isomorphism respects frozen sets")
{
    IcedQuiver a(1, 1, {{0, 1, 2}});
    IcedQuiver b(1, 1, {{0, 2, 1}});
    // only bijection would swap an exchangeable with a frozen vertex
    CHECK_FALSE(are_isomorphic(a, b).has_value());
}

TEST_CASE("mutation transcript names composites and stars")
{
    QuiverMutationTranscript tr;
    IcedQuiver q(3, 0, {{0, 1, 2}, {1, 2, 3}});
    mutate_quiver(q, 2, &tr);
    REQUIRE(tr.composites.size() == 1);
    auto [cid, pair] = *tr.composites.begin();
    CHECK(pair.first == 1);  // alpha: 2->3
    CHECK(pair.second == 0); // beta: 1->2
    CHECK(tr.stars.size() == 2);
}
