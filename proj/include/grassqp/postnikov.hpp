#pragma once

#include <grassqp/path_algebra.hpp>
#include <grassqp/qp.hpp>
#include <grassqp/quiver.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace grassqp {

enum class FaceTag { CW, ACW };

inline const char* to_string(FaceTag t) { return t == FaceTag::CW ? "CW" : "ACW"; }

inline FaceTag flipped(FaceTag t) { return t == FaceTag::CW ? FaceTag::ACW : FaceTag::CW; }

enum class QuiverVariant { TypeI, TypeII, TypeIII, BKM };

inline const char* to_string(QuiverVariant v)
{
    switch (v) {
    case QuiverVariant::TypeI: return "type1";
    case QuiverVariant::TypeII: return "type2";
    case QuiverVariant::TypeIII: return "type3";
    case QuiverVariant::BKM: return "bkm";
    }
    return "?";
}

struct DiagramFace {
    std::vector<int> arrows; // directed cycle in application order
    FaceTag tag = FaceTag::CW;
    bool closed = true;
};

// Dual face-combinatorial encoding of a Postnikov diagram: the planar iced
// quiver with every marked point's external arrow materialized, the list of
// oriented-region faces, and the markers in clockwise boundary order. Each
// marker owns the external arrow spanning it; a marker is clockwise exactly
// when its face is clockwise.
struct FaceDiagram {
    int k = 0;
    int n = 0;
    IcedQuiver quiver;
    std::vector<DiagramFace> faces;
    std::vector<int> marker_external;        // marker index (0-based, CW order) -> arrow id
    std::map<std::size_t, int> face_level;   // face index -> level, initial diagrams only

    int marker_count() const { return static_cast<int>(marker_external.size()); }

    std::map<int, std::vector<std::size_t>> faces_of_arrows() const
    {
        std::map<int, std::vector<std::size_t>> m;
        for (std::size_t f = 0; f < faces.size(); ++f)
            for (int a : faces[f].arrows)
                m[a].push_back(f);
        return m;
    }

    std::optional<int> marker_of_external(int arrow) const
    {
        for (int m = 0; m < marker_count(); ++m)
            if (marker_external[m] == arrow)
                return m;
        return std::nullopt;
    }

    bool marker_is_clockwise(int m) const
    {
        int e = marker_external.at(m);
        for (const DiagramFace& f : faces)
            for (int a : f.arrows)
                if (a == e)
                    return f.tag == FaceTag::CW;
        throw std::logic_error("marker external arrow has no face");
    }
};

enum class FundamentalCycleClass { Internal, Boundary, External };

inline const char* to_string(FundamentalCycleClass c)
{
    switch (c) {
    case FundamentalCycleClass::Internal: return "internal";
    case FundamentalCycleClass::Boundary: return "boundary";
    case FundamentalCycleClass::External: return "external";
    }
    return "?";
}

struct FundamentalCycle {
    std::size_t face_index;
    FundamentalCycleClass cls;
    Path cycle;        // canonical rotation
    FaceTag tag;
    int level = 0;     // 0 when unknown
};

// Classes per arrow content: internal (all arrows internal), external
// (contains an external arrow), boundary otherwise. A cycle with boundary
// arrows necessarily has internal ones too on desk instances, but the
// class is computed from arrow classes alone.
inline std::vector<FundamentalCycle> fundamental_cycles(const FaceDiagram& fd, int cap = 64)
{
    std::vector<FundamentalCycle> out;
    for (std::size_t f = 0; f < fd.faces.size(); ++f) {
        const DiagramFace& face = fd.faces[f];
        if (!face.closed)
            continue;
        bool has_external = false, all_internal = true;
        for (int a : face.arrows) {
            ArrowClass c = fd.quiver.classify(a);
            if (c == ArrowClass::External)
                has_external = true;
            if (c != ArrowClass::Internal)
                all_internal = false;
        }
        FundamentalCycleClass cls = has_external ? FundamentalCycleClass::External
                                  : all_internal ? FundamentalCycleClass::Internal
                                                 : FundamentalCycleClass::Boundary;
        Path cyc = canonical_rotation(fd.quiver, Path::of(fd.quiver, face.arrows));
        int level = 0;
        if (auto it = fd.face_level.find(f); it != fd.face_level.end())
            level = it->second;
        out.push_back(FundamentalCycle{f, cls, cyc, face.tag, level});
        (void)cap;
    }
    return out;
}

// TypeI drops all external arrows, TypeII is the principal part, TypeIII
// keeps external arrows at clockwise markers only, BKM keeps everything.
inline IcedQuiver build_quiver_variant(const FaceDiagram& fd, QuiverVariant v)
{
    if (v == QuiverVariant::TypeII)
        return principal_part(build_quiver_variant(fd, QuiverVariant::TypeI));

    std::set<int> drop;
    for (const Arrow& a : fd.quiver.arrows()) {
        if (fd.quiver.classify(a.id) != ArrowClass::External)
            continue;
        if (v == QuiverVariant::BKM)
            continue;
        if (v == QuiverVariant::TypeI) {
            drop.insert(a.id);
            continue;
        }
        auto m = fd.marker_of_external(a.id);
        if (!m)
            throw std::invalid_argument("build_quiver_variant: unowned external arrow");
        if (!fd.marker_is_clockwise(*m))
            drop.insert(a.id);
    }
    std::vector<Arrow> kept;
    for (const Arrow& a : fd.quiver.arrows())
        if (!drop.count(a.id))
            kept.push_back(a);
    return IcedQuiver(fd.quiver.n_exchangeable(), fd.quiver.n_frozen(), std::move(kept));
}

// Signed sum of fundamental cycles present in the chosen variant: clockwise
// faces enter with +1, anticlockwise with -1; a face participates exactly
// when all of its arrows exist in the variant.
inline Potential face_potential(const FaceDiagram& fd, QuiverVariant v, int cap)
{
    IcedQuiver vq = build_quiver_variant(fd, v);
    Potential w(cap);
    for (const DiagramFace& f : fd.faces) {
        if (!f.closed)
            continue;
        bool present = true;
        for (int a : f.arrows)
            if (!vq.has_arrow(a)) {
                present = false;
                break;
            }
        if (!present)
            continue;
        w.add_cycle(fd.quiver, Path::of(fd.quiver, f.arrows),
                    f.tag == FaceTag::CW ? 1 : -1);
    }
    return w;
}

inline IQP diagram_iqp(const FaceDiagram& fd, QuiverVariant v, int cap)
{
    return IQP(build_quiver_variant(fd, v), face_potential(fd, v, cap));
}

struct ValidationReport {
    std::vector<std::string> failures;
    std::vector<int> trip; // trip[m] = marker reached from marker m (0-based)

    bool ok() const { return failures.empty(); }

    std::string str() const
    {
        if (ok())
            return "valid";
        std::ostringstream os;
        for (const auto& f : failures)
            os << f << "\n";
        return os.str();
    }
};

namespace detail {

// The rotation system at each vertex, derived from the face passages: at a
// vertex, arrows chain through the faces passing it; exchangeable vertices
// must chain into a single cycle, frozen vertices into a single path (the
// missing wedge faces the disk boundary).
inline std::optional<std::map<int, std::vector<int>>>
derive_rotation(const FaceDiagram& fd, std::vector<std::string>* failures)
{
    std::map<int, std::vector<std::pair<int, int>>> passages; // vertex -> (in, out)
    for (const DiagramFace& f : fd.faces) {
        const auto& arr = f.arrows;
        for (std::size_t t = 0; t < arr.size(); ++t) {
            int x = arr[t], y = arr[(t + 1) % arr.size()];
            passages[fd.quiver.target(x)].push_back({x, y});
        }
    }

    std::map<int, std::vector<int>> rotation;
    bool ok = true;
    for (int v = 1; v <= fd.quiver.vertex_count(); ++v) {
        auto at = fd.quiver.arrows_at(v);
        if (at.empty())
            continue;
        auto& pas = passages[v];
        // next arrow after x in the fan of faces; each arrow appears in at
        // most one passage as "in" with a given successor
        std::map<int, std::vector<int>> succ;
        for (auto [x, y] : pas)
            succ[x].push_back(y);

        const bool frozen = fd.quiver.is_frozen(v);
        const std::size_t expect = frozen ? at.size() - 1 : at.size();
        if (pas.size() != expect) {
            if (failures)
                failures->push_back("vertex " + std::to_string(v) + ": "
                                    + std::to_string(pas.size()) + " face passages, expected "
                                    + std::to_string(expect));
            ok = false;
            continue;
        }

        // chain passages: build adjacency arrow -> arrows reachable in one
        // wedge step; the wedge structure pairs each in-arrow with up to two
        // out-arrows and vice versa; traverse as an Eulerian-style chain.
        std::map<int, std::vector<int>> adj;
        for (auto [x, y] : pas) {
            adj[x].push_back(y);
            adj[y].push_back(x);
        }
        for (int a : at)
            if (!adj.count(a))
                adj[a] = {};
        // each arrow should appear in exactly 2 wedges (1 at ring ends)
        std::vector<int> ends;
        for (auto& [a, nb] : adj) {
            if (nb.size() > 2) {
                if (failures)
                    failures->push_back("vertex " + std::to_string(v) + ": arrow a"
                                        + std::to_string(a) + " in >2 wedges");
                ok = false;
            } else if (nb.size() < 2) {
                ends.push_back(a);
            }
        }
        if (!ok)
            continue;
        if ((frozen && ends.size() != 2) || (!frozen && !ends.empty())) {
            if (failures)
                failures->push_back("vertex " + std::to_string(v)
                                    + (frozen ? ": boundary fan must be a path"
                                              : ": interior fan must close up"));
            ok = false;
            continue;
        }
        std::vector<int> order;
        std::set<int> used;
        int cur = frozen ? std::min(ends[0], ends[1]) : *std::min_element(at.begin(), at.end());
        int prev = -1;
        for (std::size_t step = 0; step < at.size(); ++step) {
            order.push_back(cur);
            used.insert(cur);
            int nxt = -1;
            for (int c : adj[cur])
                if (c != prev && !used.count(c)) {
                    nxt = c;
                    break;
                }
            if (nxt < 0)
                break;
            prev = cur;
            cur = nxt;
        }
        if (order.size() != at.size()) {
            if (failures)
                failures->push_back("vertex " + std::to_string(v)
                                    + ": rotation fan is disconnected");
            ok = false;
            continue;
        }
        rotation[v] = std::move(order);
    }
    if (!ok)
        return std::nullopt;
    return rotation;
}

} // namespace detail

inline std::map<int, std::vector<int>> rotation_system(const FaceDiagram& fd)
{
    std::vector<std::string> fails;
    auto rot = detail::derive_rotation(fd, &fails);
    if (!rot)
        throw std::invalid_argument("rotation_system: " + (fails.empty() ? std::string("invalid") : fails.front()));
    return *rot;
}

// Follow the strand entering at the given external arrow: repeatedly take
// the successor inside the current face, then switch to the other face of
// the arrow just reached; stops at the next external arrow. When crossed is
// given it collects every arrow on the strand including both externals.
inline std::optional<int> strand_target(const FaceDiagram& fd, int start_marker,
                                        const std::map<int, std::vector<std::size_t>>& by_arrow,
                                        std::vector<int>* crossed = nullptr)
{
    int e = fd.marker_external.at(start_marker);
    auto it = by_arrow.find(e);
    if (it == by_arrow.end() || it->second.size() != 1)
        return std::nullopt;
    std::size_t face = it->second.front();
    int cur = e;
    if (crossed)
        crossed->push_back(e);
    const std::size_t limit = 4 * fd.quiver.arrow_count() + 8;
    for (std::size_t step = 0; step < limit; ++step) {
        const auto& arr = fd.faces[face].arrows;
        auto pos = std::find(arr.begin(), arr.end(), cur);
        if (pos == arr.end())
            return std::nullopt;
        int nxt = arr[(static_cast<std::size_t>(pos - arr.begin()) + 1) % arr.size()];
        if (crossed)
            crossed->push_back(nxt);
        if (fd.quiver.classify(nxt) == ArrowClass::External)
            return fd.marker_of_external(nxt);
        auto fit = by_arrow.find(nxt);
        if (fit == by_arrow.end() || fit->second.size() != 2)
            return std::nullopt;
        face = fit->second[0] == face ? fit->second[1] : fit->second[0];
        cur = nxt;
    }
    return std::nullopt;
}

// Region labels: vertex v receives strand index s (1-based by start marker)
// exactly when v lies on the left bank of strand s. The strand severs the
// arrows it crosses; the rest of the quiver splits into the two banks, and
// the left one is the bank holding the corners the strand wraps clockwise.
inline std::vector<std::set<int>> region_labels(const FaceDiagram& fd)
{
    const int nv = fd.quiver.vertex_count();
    auto by_arrow = fd.faces_of_arrows();
    std::vector<std::set<int>> labels(nv + 1);
    for (int m = 0; m < fd.marker_count(); ++m) {
        std::vector<int> crossed;
        auto tgt = strand_target(fd, m, by_arrow, &crossed);
        if (!tgt)
            throw std::invalid_argument("region_labels: strand does not terminate");
        std::set<int> cut(crossed.begin(), crossed.end());
        // union-find over vertices via uncrossed arrows
        std::vector<int> parent(nv + 1);
        for (int v = 0; v <= nv; ++v)
            parent[v] = v;
        std::function<int(int)> find = [&](int v) {
            while (parent[v] != v)
                v = parent[v] = parent[parent[v]];
            return v;
        };
        for (const Arrow& a : fd.quiver.arrows())
            if (!cut.count(a.id))
                parent[find(a.src)] = find(a.tgt);
        // clockwise-wrapped corners sit on the left bank: pick the corner of
        // the first clockwise passage
        int left_rep = -1;
        for (std::size_t t = 0; t + 1 < crossed.size() && left_rep < 0; ++t) {
            int x = crossed[t], y = crossed[t + 1];
            // the face in which y follows x
            for (std::size_t f : by_arrow.at(x)) {
                const auto& arr = fd.faces[f].arrows;
                auto pos = std::find(arr.begin(), arr.end(), x);
                if (pos == arr.end())
                    continue;
                if (arr[(static_cast<std::size_t>(pos - arr.begin()) + 1) % arr.size()] == y) {
                    if (fd.faces[f].tag == FaceTag::CW)
                        left_rep = fd.quiver.target(x);
                    break;
                }
            }
        }
        if (left_rep < 0)
            throw std::invalid_argument("region_labels: no clockwise passage on strand");
        for (int v = 1; v <= nv; ++v)
            if (find(v) == find(left_rep))
                labels[v].insert(m + 1);
    }
    return labels;
}

// Checks every FaceDiagram invariant: faces are simple directed cycles,
// arrow/face incidences (two faces of opposite orientation per unexternal
// arrow, one face per external arrow), the Euler count, derivability of the
// rotation system, the marker ring, and the trip permutation m -> m + k.
inline ValidationReport validate(const FaceDiagram& fd)
{
    ValidationReport rep;
    const IcedQuiver& q = fd.quiver;

    if (fd.n != q.n_frozen())
        rep.failures.push_back("n does not match the frozen vertex count");
    if (fd.marker_count() != fd.n)
        rep.failures.push_back("marker count differs from n");

    // faces are closed simple directed cycles
    for (std::size_t f = 0; f < fd.faces.size(); ++f) {
        const auto& arr = fd.faces[f].arrows;
        if (arr.empty()) {
            rep.failures.push_back("face " + std::to_string(f) + " is empty");
            continue;
        }
        if (!fd.faces[f].closed)
            rep.failures.push_back("face " + std::to_string(f) + " is not closed");
        bool comp = true;
        std::set<int> seen_vertices;
        for (std::size_t t = 0; t < arr.size(); ++t) {
            int x = arr[t], y = arr[(t + 1) % arr.size()];
            if (!q.has_arrow(x) || !q.has_arrow(y)) {
                comp = false;
                break;
            }
            if (q.target(x) != q.source(y))
                comp = false;
            if (!seen_vertices.insert(q.source(x)).second)
                comp = false; // face revisits a vertex
        }
        if (!comp)
            rep.failures.push_back("face " + std::to_string(f)
                                   + " is not a simple directed cycle");
    }
    if (!rep.failures.empty())
        return rep;

    // arrow-face incidences and orientation alternation
    auto by_arrow = fd.faces_of_arrows();
    for (const Arrow& a : q.arrows()) {
        auto it = by_arrow.find(a.id);
        std::size_t cnt = it == by_arrow.end() ? 0 : it->second.size();
        if (q.classify(a.id) == ArrowClass::External) {
            if (cnt != 1)
                rep.failures.push_back("external arrow a" + std::to_string(a.id)
                                       + " lies in " + std::to_string(cnt) + " faces");
        } else {
            if (cnt != 2)
                rep.failures.push_back("arrow a" + std::to_string(a.id) + " lies in "
                                       + std::to_string(cnt) + " faces");
            else if (fd.faces[it->second[0]].tag == fd.faces[it->second[1]].tag)
                rep.failures.push_back("faces sharing arrow a" + std::to_string(a.id)
                                       + " have equal orientation");
        }
    }

    // Euler characteristic of the disk embedding
    {
        int used_vertices = 0;
        for (int v = 1; v <= q.vertex_count(); ++v)
            if (!q.arrows_at(v).empty())
                ++used_vertices;
        long long euler = static_cast<long long>(used_vertices)
                          - static_cast<long long>(q.arrow_count())
                          + static_cast<long long>(fd.faces.size());
        if (q.vertex_count() > 0 && euler != 1)
            rep.failures.push_back("Euler count V-E+F = " + std::to_string(euler));
    }

    // rotation system must be derivable
    detail::derive_rotation(fd, &rep.failures);

    // marker ring: consecutive markers' externals share one frozen vertex,
    // and the arrow of a clockwise marker points in the ring direction
    const int n = fd.marker_count();
    for (int m = 0; m < n; ++m) {
        int e = fd.marker_external[m];
        if (!q.has_arrow(e) || q.classify(e) != ArrowClass::External) {
            rep.failures.push_back("marker " + std::to_string(m)
                                   + " does not own an external arrow");
            continue;
        }
    }
    if (rep.failures.empty() && n > 1) {
        for (int m = 0; m < n; ++m) {
            int e = fd.marker_external[m];
            int e2 = fd.marker_external[(m + 1) % n];
            auto ends = [&](int arrow) {
                return std::set<int>{q.source(arrow), q.target(arrow)};
            };
            std::set<int> shared;
            for (int v : ends(e))
                if (ends(e2).count(v))
                    shared.insert(v);
            if (shared.size() != 1) {
                rep.failures.push_back("markers " + std::to_string(m) + ","
                                       + std::to_string((m + 1) % n)
                                       + " do not share one frozen vertex");
                continue;
            }
            int between = *shared.begin();
            bool cw = fd.marker_is_clockwise(m);
            int head = q.target(e);
            if ((cw && head != between) || (!cw && head == between))
                rep.failures.push_back("marker " + std::to_string(m)
                                       + " arrow direction disagrees with its orientation");
        }
    }

    // trip permutation
    if (rep.failures.empty()) {
        rep.trip.assign(n, -1);
        for (int m = 0; m < n; ++m) {
            auto t = strand_target(fd, m, by_arrow);
            if (!t) {
                rep.failures.push_back("strand from marker " + std::to_string(m)
                                       + " does not terminate");
                continue;
            }
            rep.trip[m] = *t;
            if (*t != (m + fd.k) % n)
                rep.failures.push_back("strand from marker " + std::to_string(m)
                                       + " ends at " + std::to_string(*t) + ", expected "
                                       + std::to_string((m + fd.k) % n));
        }
    }
    return rep;
}

struct ExchangeOptions {
    // test-harness hook: skip the untwisting step, leaving digon faces
    bool skip_digons = false;
};

// Geometric exchange at an exchangeable vertex of degree four with
// alternating orientations, realized as face surgery: composite arrows for
// the four face passages, star reversals, four inserted triangles, digon
// cancellation against anti-parallel arrows (the untwisting move), markers
// kept in place (an external digon flips its marker's orientation).
inline FaceDiagram geometric_exchange(const FaceDiagram& fd, int a,
                                      const ExchangeOptions& options = {})
{
    const IcedQuiver& q0 = fd.quiver;
    if (!q0.is_exchangeable(a))
        throw std::invalid_argument("geometric_exchange: vertex is frozen or out of range");
    std::vector<int> in = q0.arrows_in(a), out = q0.arrows_out(a);
    if (in.size() != 2 || out.size() != 2)
        throw std::invalid_argument("geometric_exchange: vertex degree is not 4 (in 2, out 2)");
    if (q0.has_two_cycle_through(a))
        throw std::invalid_argument("geometric_exchange: 2-cycle through vertex");

    FaceDiagram nd;
    nd.k = fd.k;
    nd.n = fd.n;
    nd.quiver = q0;
    nd.marker_external = fd.marker_external;

    // stars
    std::map<int, int> star_of;
    for (int x : in) {
        int id = nd.quiver.fresh_id();
        nd.quiver.remove_arrow(x);
        nd.quiver.add_arrow(id, a, q0.source(x));
        star_of[x] = id;
    }
    for (int y : out) {
        int id = nd.quiver.fresh_id();
        nd.quiver.remove_arrow(y);
        nd.quiver.add_arrow(id, q0.target(y), a);
        star_of[y] = id;
    }

    // composite per face passage; rewrite faces
    struct CompositeInfo {
        int id;
        int x, y;                  // passage: x into a, y out of a
        std::size_t face;          // rewritten face index in nd.faces
    };
    std::vector<CompositeInfo> comps;
    for (std::size_t f = 0; f < fd.faces.size(); ++f) {
        const auto& arr = fd.faces[f].arrows;
        // locate a passage through a (faces are simple: at most one)
        int pos = -1;
        const int L = static_cast<int>(arr.size());
        for (int t = 0; t < L; ++t)
            if (q0.target(arr[t]) == a) {
                pos = t;
                break;
            }
        DiagramFace nf;
        nf.tag = fd.faces[f].tag;
        nf.closed = true;
        if (pos < 0) {
            nf.arrows = arr;
        } else {
            int x = arr[pos], y = arr[(pos + 1) % L];
            int id = nd.quiver.fresh_id();
            nd.quiver.add_arrow(id, q0.source(x), q0.target(y));
            for (int t = 1; t < L; ++t) {
                int idx = (pos + 1 + t) % L; // skip y, wrap after x
                if (idx == pos)
                    continue;
                nf.arrows.push_back(arr[idx]);
            }
            nf.arrows.insert(nf.arrows.begin(), id);
            comps.push_back(CompositeInfo{id, x, y, f});
        }
        nd.faces.push_back(std::move(nf));
    }
    if (comps.size() != 4)
        throw std::invalid_argument("geometric_exchange: vertex lies on "
                                    + std::to_string(comps.size()) + " faces, expected 4");

    // four triangles [xy] y* x*
    std::map<int, std::size_t> triangle_of_comp;
    for (const auto& c : comps) {
        DiagramFace tri;
        tri.arrows = {c.id, star_of.at(c.y), star_of.at(c.x)};
        tri.tag = flipped(nd.faces[c.face].tag);
        triangle_of_comp[c.id] = nd.faces.size();
        nd.faces.push_back(std::move(tri));
    }

    // digon cancellation, smallest composite id first
    std::set<std::size_t> dead_faces;
    std::set<int> dead_arrows;
    while (!options.skip_digons) {
        int best = -1;
        for (const auto& c : comps) {
            if (dead_arrows.count(c.id))
                continue;
            const auto& face = nd.faces[c.face].arrows;
            if (face.size() == 2 && !dead_faces.count(c.face))
                if (best < 0 || c.id < best)
                    best = c.id;
        }
        if (best < 0)
            break;
        const auto& c = *std::find_if(comps.begin(), comps.end(),
                                      [&](const CompositeInfo& ci) { return ci.id == best; });
        const auto& digon = nd.faces[c.face].arrows;
        int z = digon[0] == c.id ? digon[1] : digon[0];
        std::size_t tri = triangle_of_comp.at(c.id);

        if (nd.quiver.classify(z) == ArrowClass::External) {
            // boundary untwisting: the composite becomes the marker's
            // external arrow, reversed; the triangle is the marker's face
            auto m = nd.marker_of_external(z);
            if (!m) {
                // search original marker list (z may already be reassigned)
                throw std::logic_error("geometric_exchange: external digon without marker");
            }
            nd.marker_external[*m] = c.id;
            dead_faces.insert(c.face);
            dead_arrows.insert(z);
            nd.quiver.remove_arrow(z);
        } else {
            // interior untwisting: delete both arrows, splice the triangle
            // remainder into z's other face
            std::size_t zother = SIZE_MAX;
            for (std::size_t f = 0; f < nd.faces.size(); ++f) {
                if (f == c.face || dead_faces.count(f))
                    continue;
                for (int x : nd.faces[f].arrows)
                    if (x == z)
                        zother = f;
            }
            if (zother == SIZE_MAX)
                throw std::logic_error("geometric_exchange: digon partner has no other face");
            auto& host = nd.faces[zother].arrows;
            auto pos = std::find(host.begin(), host.end(), z);
            // triangle remainder: [y*, x*]
            std::vector<int> repl = {star_of.at(c.y), star_of.at(c.x)};
            pos = host.erase(pos);
            host.insert(pos, repl.begin(), repl.end());
            dead_faces.insert(c.face);
            dead_faces.insert(tri);
            dead_arrows.insert(z);
            dead_arrows.insert(c.id);
            nd.quiver.remove_arrow(z);
            nd.quiver.remove_arrow(c.id);
        }
    }

    // compact faces
    std::vector<DiagramFace> kept;
    for (std::size_t f = 0; f < nd.faces.size(); ++f)
        if (!dead_faces.count(f))
            kept.push_back(std::move(nd.faces[f]));
    nd.faces = std::move(kept);
    return nd;
}

} // namespace grassqp
