#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace grassqp {

enum class ArrowClass { Internal, Boundary, External };

inline const char* to_string(ArrowClass c)
{
    switch (c) {
    case ArrowClass::Internal: return "internal";
    case ArrowClass::Boundary: return "boundary";
    case ArrowClass::External: return "external";
    }
    return "?";
}

struct Arrow {
    int id;
    int src;
    int tgt;

    friend bool operator==(const Arrow&, const Arrow&) = default;
};

// Iced quiver on vertices 1..n+m with the frozen suffix n+1..n+m.
// Arrows are stored individually (parallel arrows allowed, no loops) and
// carry stable ids so potentials can reference specific arrows.
class IcedQuiver {
public:
    IcedQuiver() = default;

    IcedQuiver(int n_exchangeable, int n_frozen, std::vector<Arrow> arrows)
        : n_ex_(n_exchangeable)
        , n_fr_(n_frozen)
        , arrows_(std::move(arrows))
    {
        if (n_ex_ < 0 || n_fr_ < 0)
            throw std::invalid_argument("IcedQuiver: negative vertex count");
        std::set<int> seen;
        for (const Arrow& a : arrows_) {
            if (a.src < 1 || a.src > vertex_count() || a.tgt < 1 || a.tgt > vertex_count())
                throw std::invalid_argument("IcedQuiver: arrow endpoint out of range");
            if (a.src == a.tgt)
                throw std::invalid_argument("IcedQuiver: loops are not allowed");
            if (!seen.insert(a.id).second)
                throw std::invalid_argument("IcedQuiver: duplicate arrow id");
            next_id_ = std::max(next_id_, a.id + 1);
        }
        std::sort(arrows_.begin(), arrows_.end(),
                  [](const Arrow& x, const Arrow& y) { return x.id < y.id; });
    }

    int n_exchangeable() const { return n_ex_; }
    int n_frozen() const { return n_fr_; }
    int vertex_count() const { return n_ex_ + n_fr_; }
    bool is_frozen(int v) const { return v > n_ex_; }
    bool is_exchangeable(int v) const { return v >= 1 && v <= n_ex_; }

    const std::vector<Arrow>& arrows() const { return arrows_; }
    std::size_t arrow_count() const { return arrows_.size(); }

    bool has_arrow(int id) const { return find(id) != nullptr; }

    const Arrow& arrow(int id) const
    {
        const Arrow* a = find(id);
        if (!a)
            throw std::invalid_argument("unknown arrow id " + std::to_string(id));
        return *a;
    }

    int source(int id) const { return arrow(id).src; }
    int target(int id) const { return arrow(id).tgt; }

    ArrowClass classify(int id) const
    {
        const Arrow& a = arrow(id);
        const bool sf = is_frozen(a.src), tf = is_frozen(a.tgt);
        if (!sf && !tf)
            return ArrowClass::Internal;
        if (sf && tf)
            return ArrowClass::External;
        return ArrowClass::Boundary;
    }

    bool is_unexternal(int id) const { return classify(id) != ArrowClass::External; }

    std::vector<int> arrows_out(int v) const
    {
        std::vector<int> out;
        for (const Arrow& a : arrows_)
            if (a.src == v)
                out.push_back(a.id);
        return out;
    }

    std::vector<int> arrows_in(int v) const
    {
        std::vector<int> in;
        for (const Arrow& a : arrows_)
            if (a.tgt == v)
                in.push_back(a.id);
        return in;
    }

    std::vector<int> arrows_at(int v) const
    {
        std::vector<int> at;
        for (const Arrow& a : arrows_)
            if (a.src == v || a.tgt == v)
                at.push_back(a.id);
        return at;
    }

    // Number of arrows u -> v.
    int multiplicity(int u, int v) const
    {
        int c = 0;
        for (const Arrow& a : arrows_)
            if (a.src == u && a.tgt == v)
                ++c;
        return c;
    }

    bool has_two_cycle_through(int v) const
    {
        for (const Arrow& a : arrows_)
            if (a.src == v && multiplicity(a.tgt, v) > 0)
                return true;
        return false;
    }

    int fresh_id() { return next_id_++; }
    int peek_fresh_id() const { return next_id_; }

    void add_arrow(int id, int src, int tgt)
    {
        if (src == tgt)
            throw std::invalid_argument("add_arrow: loop");
        if (find(id))
            throw std::invalid_argument("add_arrow: duplicate id");
        auto pos = std::lower_bound(arrows_.begin(), arrows_.end(), id,
                                    [](const Arrow& a, int i) { return a.id < i; });
        arrows_.insert(pos, Arrow{id, src, tgt});
        next_id_ = std::max(next_id_, id + 1);
    }

    void remove_arrow(int id)
    {
        auto it = std::find_if(arrows_.begin(), arrows_.end(),
                               [&](const Arrow& a) { return a.id == id; });
        if (it == arrows_.end())
            throw std::invalid_argument("remove_arrow: unknown id");
        arrows_.erase(it);
    }

    friend bool operator==(const IcedQuiver& a, const IcedQuiver& b)
    {
        return a.n_ex_ == b.n_ex_ && a.n_fr_ == b.n_fr_ && a.arrows_ == b.arrows_;
    }

private:
    const Arrow* find(int id) const
    {
        auto it = std::lower_bound(arrows_.begin(), arrows_.end(), id,
                                   [](const Arrow& a, int i) { return a.id < i; });
        return (it != arrows_.end() && it->id == id) ? &*it : nullptr;
    }

    int n_ex_ = 0;
    int n_fr_ = 0;
    std::vector<Arrow> arrows_;
    int next_id_ = 0;
};

// Full subquiver on the exchangeable vertices; arrow ids preserved.
inline IcedQuiver principal_part(const IcedQuiver& q)
{
    std::vector<Arrow> kept;
    for (const Arrow& a : q.arrows())
        if (!q.is_frozen(a.src) && !q.is_frozen(a.tgt))
            kept.push_back(a);
    return IcedQuiver(q.n_exchangeable(), 0, std::move(kept));
}

inline IcedQuiver opposite(const IcedQuiver& q)
{
    std::vector<Arrow> rev;
    rev.reserve(q.arrow_count());
    for (const Arrow& a : q.arrows())
        rev.push_back(Arrow{a.id, a.tgt, a.src});
    return IcedQuiver(q.n_exchangeable(), q.n_frozen(), std::move(rev));
}

// Records how mutate_quiver produced each new arrow: either the composite
// of a 2-path (alpha after beta, i.e. beta: j->i, alpha: i->k) or the
// reversal alpha* of an arrow incident to the mutation vertex.
struct QuiverMutationTranscript {
    int vertex = 0;
    // new composite id -> (alpha id, beta id)
    std::map<int, std::pair<int, int>> composites;
    // new star id -> original arrow id
    std::map<int, int> stars;
    // arrow ids removed in the 2-cycle step (pairs)
    std::vector<std::pair<int, int>> removed_two_cycles;
};

// Fomin-Zelevinsky mutation of an iced quiver at an exchangeable vertex.
// Steps: (1) a composite j->k per 2-path j->i->k, (2) arrows through i
// reversed, (3) a maximal set of pairwise disjoint 2-cycles removed.
// Step (3) is made deterministic by repeatedly deleting the 2-cycle whose
// smaller arrow id is minimal among the remaining ones.
inline IcedQuiver mutate_quiver(const IcedQuiver& q, int i,
                                QuiverMutationTranscript* transcript = nullptr)
{
    if (!q.is_exchangeable(i))
        throw std::invalid_argument("mutate_quiver: vertex is frozen or out of range");
    if (q.has_two_cycle_through(i))
        throw std::invalid_argument("mutate_quiver: 2-cycle through mutation vertex");

    IcedQuiver out = q;
    QuiverMutationTranscript tr;
    tr.vertex = i;

    std::vector<int> in = q.arrows_in(i);   // beta: j -> i
    std::vector<int> outv = q.arrows_out(i); // alpha: i -> k

    // (1) composites, allocated in deterministic (beta, alpha) id order
    for (int b : in)
        for (int a : outv) {
            int id = out.fresh_id();
            out.add_arrow(id, q.source(b), q.target(a));
            tr.composites[id] = {a, b};
        }

    // (2) reversals
    for (int a : in) {
        int id = out.fresh_id();
        out.remove_arrow(a);
        out.add_arrow(id, i, q.source(a));
        tr.stars[id] = a;
    }
    for (int a : outv) {
        int id = out.fresh_id();
        out.remove_arrow(a);
        out.add_arrow(id, q.target(a), i);
        tr.stars[id] = a;
    }

    // (3) greedy disjoint 2-cycle removal by smallest arrow id
    for (;;) {
        std::optional<std::pair<int, int>> best;
        for (const Arrow& a : out.arrows()) {
            for (const Arrow& b : out.arrows()) {
                if (a.id < b.id && a.src == b.tgt && a.tgt == b.src) {
                    if (!best || a.id < best->first)
                        best = std::make_pair(a.id, b.id);
                    break;
                }
            }
            if (best && best->first == a.id)
                break;
        }
        if (!best)
            break;
        out.remove_arrow(best->first);
        out.remove_arrow(best->second);
        tr.removed_two_cycles.push_back(*best);
    }

    if (transcript)
        *transcript = std::move(tr);
    return out;
}

namespace detail {

// Backtracking isomorphism search on small directed multiquivers.
// Candidate images are filtered by (in, out) degree and frozen status.
inline bool extend_isomorphism(const IcedQuiver& q1, const IcedQuiver& q2,
                               std::vector<int>& image, std::vector<bool>& used, int v,
                               const std::vector<std::vector<int>>& m1,
                               const std::vector<std::vector<int>>& m2)
{
    const int nv = q1.vertex_count();
    if (v > nv)
        return true;
    for (int w = 1; w <= nv; ++w) {
        if (used[w])
            continue;
        if (q1.is_frozen(v) != q2.is_frozen(w))
            continue;
        bool ok = true;
        for (int u = 1; u <= v && ok; ++u) {
            if (image[u] == 0)
                continue;
            if (m1[v][u] != m2[w][image[u]] || m1[u][v] != m2[image[u]][w])
                ok = false;
        }
        if (!ok)
            continue;
        image[v] = w;
        used[w] = true;
        if (extend_isomorphism(q1, q2, image, used, v + 1, m1, m2))
            return true;
        image[v] = 0;
        used[w] = false;
    }
    return false;
}

} // namespace detail

// Vertex bijection preserving arrow multiplicities between every ordered
// vertex pair and mapping frozen to frozen; with fix_frozen the bijection
// is required to be the identity on the frozen vertices.
inline std::optional<std::vector<int>> are_isomorphic(const IcedQuiver& q1,
                                                      const IcedQuiver& q2,
                                                      bool fix_frozen = false)
{
    if (q1.n_exchangeable() != q2.n_exchangeable() || q1.n_frozen() != q2.n_frozen())
        return std::nullopt;
    if (q1.arrow_count() != q2.arrow_count())
        return std::nullopt;

    const int nv = q1.vertex_count();
    auto mult_table = [&](const IcedQuiver& q) {
        std::vector<std::vector<int>> m(nv + 1, std::vector<int>(nv + 1, 0));
        for (const Arrow& a : q.arrows())
            ++m[a.src][a.tgt];
        return m;
    };
    auto m1 = mult_table(q1), m2 = mult_table(q2);

    std::vector<int> image(nv + 1, 0);
    std::vector<bool> used(nv + 1, false);

    if (fix_frozen) {
        for (int v = q1.n_exchangeable() + 1; v <= nv; ++v) {
            image[v] = v;
            used[v] = true;
        }
        // check frozen-frozen multiplicities up front
        for (int u = q1.n_exchangeable() + 1; u <= nv; ++u)
            for (int v = q1.n_exchangeable() + 1; v <= nv; ++v)
                if (m1[u][v] != m2[u][v])
                    return std::nullopt;
    }

    // map exchangeable vertices first, frozen afterwards
    std::vector<int> order;
    for (int v = 1; v <= nv; ++v)
        if (image[v] == 0)
            order.push_back(v);

    // recursive search over the not-yet-fixed vertices in index order;
    // reuse extend_isomorphism by renumbering is overkill at this scale,
    // so inline a simple stack here.
    struct Frame { std::size_t idx; int w; };
    std::vector<int> trail;
    std::size_t idx = 0;
    int start_w = 1;
    while (true) {
        if (idx == order.size())
            break; // all matched
        int v = order[idx];
        int found = 0;
        for (int w = start_w; w <= nv; ++w) {
            if (used[w])
                continue;
            if (q1.is_frozen(v) != q2.is_frozen(w))
                continue;
            bool ok = true;
            for (int u = 1; u <= nv && ok; ++u) {
                if (image[u] == 0)
                    continue;
                if (m1[v][u] != m2[w][image[u]] || m1[u][v] != m2[image[u]][w])
                    ok = false;
            }
            if (m1[v][v] != m2[w][w])
                ok = false;
            if (!ok)
                continue;
            found = w;
            break;
        }
        if (found) {
            image[v] = found;
            used[found] = true;
            trail.push_back(v);
            ++idx;
            start_w = 1;
        } else {
            if (trail.empty())
                return std::nullopt;
            int back = trail.back();
            trail.pop_back();
            --idx;
            start_w = image[back] + 1;
            used[image[back]] = false;
            image[back] = 0;
        }
    }

    image.erase(image.begin()); // drop index 0; result[v-1] = image of v
    return image;
}

} // namespace grassqp
