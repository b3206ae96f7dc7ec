#pragma once

#include <grassqp/parallel.hpp>
#include <grassqp/path_algebra.hpp>
#include <grassqp/qp.hpp>
#include <grassqp/quiver.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace grassqp {

// One generator per internal or boundary arrow; external arrows excluded.
inline std::vector<PathSum> jacobian_generators(const IQP& p)
{
    std::vector<PathSum> gens;
    for (const Arrow& a : p.quiver.arrows())
        if (p.quiver.is_unexternal(a.id))
            gens.push_back(cyclic_derivative(p.quiver, p.potential, a.id));
    return gens;
}

// Catalog of every path of length <= cap in canonical order, with O(1)
// one-arrow extension tables on both sides. Path ids respect the canonical
// path order, so comparing ids compares paths.
class PathCatalog {
public:
    PathCatalog(const IcedQuiver& q, int cap)
        : quiver_(&q)
        , cap_(cap)
    {
        const int E = static_cast<int>(q.arrow_count());
        arrow_index_.clear();
        for (int e = 0; e < E; ++e)
            arrow_index_[q.arrows()[e].id] = e;

        auto add = [&](const Path& p) {
            int id = static_cast<int>(paths_.size());
            paths_.push_back(p);
            rext_.emplace_back(E, -1);
            lext_.emplace_back(E, -1);
            return id;
        };

        std::vector<int> frontier;
        for (int v = 1; v <= q.vertex_count(); ++v)
            frontier.push_back(add(Path::trivial(v)));
        // single arrows out of trivial paths
        for (int len = 1; len <= cap; ++len) {
            std::vector<int> next;
            for (int pid : frontier) {
                const Path base = paths_[pid]; // copy: paths_ reallocates
                for (int e = 0; e < E; ++e) {
                    const Arrow& a = q.arrows()[e];
                    if (a.src != base.target())
                        continue;
                    std::vector<int> word = base.arrows();
                    word.push_back(a.id);
                    int nid = add(Path::of(q, word));
                    rext_[pid][e] = nid;
                    next.push_back(nid);
                    // left extensions by dynamic programming
                    if (base.is_trivial()) {
                        for (int b = 0; b < E; ++b)
                            if (q.arrows()[b].tgt == base.source())
                                ; // filled below once single arrows exist
                    }
                }
            }
            frontier = std::move(next);
            if (frontier.empty())
                break;
        }
        // left extensions: lext[e_v][b] = single path of arrow b when
        // t(b) = v; lext[p.a][b] = rext[lext[p][b]][a]
        for (std::size_t id = 0; id < paths_.size(); ++id) {
            const Path& p = paths_[id];
            if (p.is_trivial()) {
                for (int e = 0; e < E; ++e) {
                    const Arrow& b = q.arrows()[e];
                    if (b.tgt == p.source()) {
                        int tv = trivial_id(b.src);
                        lext_[id][e] = rext_[tv][e];
                    }
                }
            } else {
                // parent: path without the last arrow
                std::vector<int> word = p.arrows();
                int last = word.back();
                word.pop_back();
                int parent = word.empty() ? trivial_id(p.source()) : id_of_word(word);
                int le = arrow_index_.at(last);
                for (int e = 0; e < E; ++e) {
                    int lp = lext_[parent][e];
                    if (lp >= 0)
                        lext_[id][e] = rext_[lp][le];
                }
            }
        }
        // canonical rotation projection for cycle paths
        proj_.assign(paths_.size(), -1);
        for (std::size_t id = 0; id < paths_.size(); ++id) {
            const Path& p = paths_[id];
            if (p.is_cycle() && !p.is_trivial())
                proj_[id] = id_of(canonical_rotation(q, p));
            else
                proj_[id] = static_cast<int>(id);
        }
    }

    const IcedQuiver& quiver() const { return *quiver_; }
    int cap() const { return cap_; }
    std::size_t size() const { return paths_.size(); }
    const Path& path(int id) const { return paths_[id]; }
    int arrow_index(int arrow_id) const { return arrow_index_.at(arrow_id); }
    int extend_right(int id, int arrow_idx) const { return rext_[id][arrow_idx]; }
    int extend_left(int id, int arrow_idx) const { return lext_[id][arrow_idx]; }
    int rotation_class(int id) const { return proj_[id]; }

    int trivial_id(int vertex) const { return vertex - 1; }

    int id_of(const Path& p) const
    {
        if (p.is_trivial())
            return trivial_id(p.source());
        return id_of_word(p.arrows());
    }

private:
    int id_of_word(const std::vector<int>& word) const
    {
        int id = trivial_id(quiver_->source(word.front()));
        for (int a : word) {
            id = rext_[id][arrow_index_.at(a)];
            if (id < 0)
                throw std::invalid_argument("PathCatalog: path beyond cap");
        }
        return id;
    }

    const IcedQuiver* quiver_;
    int cap_;
    std::vector<Path> paths_;
    std::map<int, int> arrow_index_;
    std::vector<std::vector<int>> rext_, lext_;
    std::vector<int> proj_;
};

// Echelon basis of the truncated Jacobian ideal: the span of u * g * v over
// paths u, v and the cyclic-derivative generators g, inside the space of
// paths of length <= cap. Built by closing the generators under one-arrow
// products with reduction; pivots are the canonically smallest paths, so
// the pivot set is the canonical leading-term set of the span no matter the
// insertion order. With with_rotation_span every cyclic term is projected
// to its canonical rotation first, which decides membership in J + C.
class IdealBasis {
public:
    using Row = std::vector<std::pair<int, Rational>>; // sorted by path id

    IdealBasis(const IQP& p, int cap, bool with_rotation_span = false)
        : catalog_(p.quiver, cap)
        , rotation_span_(with_rotation_span)
    {
        max_generator_degree_ = 1;
        std::vector<Row> seed;
        for (const PathSum& g : jacobian_generators(p)) {
            if (g.is_zero())
                continue;
            max_generator_degree_ = std::max(max_generator_degree_, g.max_term_length());
            seed.push_back(to_row(g.truncated(cap)));
        }
        for (Row& r : seed) {
            Row red = reduce_row(project(std::move(r)));
            if (!red.empty())
                insert_row(std::move(red));
        }
        const int E = static_cast<int>(p.quiver.arrow_count());
        std::size_t processed = 0;
        while (processed < rows_.size()) {
            // batch: products of all pending rows, generated in order
            std::size_t lo = processed, hi = rows_.size();
            processed = hi;
            std::function<std::vector<Row>(std::size_t)> gen = [&](std::size_t i) {
                std::vector<Row> prods;
                const Row& r = rows_[lo + i];
                for (int e = 0; e < E; ++e) {
                    Row left, right;
                    for (const auto& [id, c] : r) {
                        int lid = catalog_.extend_left(id, e);
                        if (lid >= 0)
                            left.push_back({lid, c});
                        int rid = catalog_.extend_right(id, e);
                        if (rid >= 0)
                            right.push_back({rid, c});
                    }
                    std::sort(left.begin(), left.end());
                    std::sort(right.begin(), right.end());
                    if (!left.empty())
                        prods.push_back(project(std::move(left)));
                    if (!right.empty())
                        prods.push_back(project(std::move(right)));
                }
                return prods;
            };
            auto batches = parallel_map<std::vector<Row>>(hi - lo, gen);
            for (auto& prods : batches)
                for (Row& pr : prods) {
                    Row red = reduce_row(std::move(pr));
                    if (!red.empty())
                        insert_row(std::move(red));
                }
        }
    }

    int cap() const { return catalog_.cap(); }
    bool with_rotation_span() const { return rotation_span_; }
    std::size_t rank() const { return rows_.size(); }
    const PathCatalog& catalog() const { return catalog_; }
    int max_generator_degree() const { return max_generator_degree_; }

    bool contains(const PathSum& x) const
    {
        if (x.max_term_length() > cap())
            throw std::invalid_argument("IdealBasis::contains: element exceeds the cap");
        return reduce_row(project(to_row(x))).empty();
    }

    bool contains_pivot(int path_id) const { return pivot_row_.count(path_id) > 0; }

    std::vector<Path> pivot_paths() const
    {
        std::vector<int> ids;
        ids.reserve(pivot_row_.size());
        for (const auto& [id, row] : pivot_row_)
            ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        std::vector<Path> out;
        out.reserve(ids.size());
        for (int id : ids)
            out.push_back(catalog_.path(id));
        return out;
    }

private:
    Row to_row(const PathSum& x) const
    {
        Row r;
        for (const auto& [p, c] : x.terms())
            r.push_back({catalog_.id_of(p), c});
        std::sort(r.begin(), r.end());
        return r;
    }

    Row project(Row r) const
    {
        if (!rotation_span_)
            return r;
        for (auto& [id, c] : r)
            id = catalog_.rotation_class(id);
        std::sort(r.begin(), r.end());
        // merge duplicates
        Row out;
        for (auto& [id, c] : r) {
            if (!out.empty() && out.back().first == id)
                out.back().second += c;
            else
                out.push_back({id, c});
        }
        out.erase(std::remove_if(out.begin(), out.end(),
                                 [](const auto& t) { return t.second == 0; }),
                  out.end());
        return out;
    }

    static Row axpy(const Row& x, const Rational& c, const Row& y)
    {
        // x - c*y
        Row out;
        out.reserve(x.size() + y.size());
        std::size_t i = 0, j = 0;
        while (i < x.size() || j < y.size()) {
            if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
                out.push_back(x[i++]);
            } else if (i == x.size() || y[j].first < x[i].first) {
                out.push_back({y[j].first, -c * y[j].second});
                ++j;
            } else {
                Rational v = x[i].second - c * y[j].second;
                if (v != 0)
                    out.push_back({x[i].first, std::move(v)});
                ++i;
                ++j;
            }
        }
        return out;
    }

    Row reduce_row(Row x) const
    {
        std::size_t cursor = 0;
        while (cursor < x.size()) {
            auto it = pivot_row_.find(x[cursor].first);
            if (it == pivot_row_.end()) {
                ++cursor;
                continue;
            }
            x = axpy(x, x[cursor].second, rows_[it->second]);
            // entries before cursor are untouched and pivot-free
        }
        return x;
    }

    void insert_row(Row r)
    {
        const Rational lc = r.front().second;
        if (lc != 1)
            for (auto& [id, c] : r)
                c /= lc;
        pivot_row_[r.front().first] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(r));
    }

    PathCatalog catalog_;
    bool rotation_span_;
    int max_generator_degree_ = 1;
    std::vector<Row> rows_;
    std::unordered_map<int, int> pivot_row_;
};

inline bool is_in_ideal(const PathSum& x, const IdealBasis& basis)
{
    return basis.contains(x);
}

// All paths of length <= cap, in canonical order.
inline std::vector<Path> all_paths(const IcedQuiver& q, int cap)
{
    std::vector<Path> out;
    for (int v = 1; v <= q.vertex_count(); ++v)
        out.push_back(Path::trivial(v));
    std::vector<Path> frontier = out;
    for (int len = 1; len <= cap; ++len) {
        std::vector<Path> next;
        for (const Path& p : frontier)
            for (const Arrow& a : q.arrows())
                if (a.src == p.target()) {
                    std::vector<int> word = p.arrows();
                    word.push_back(a.id);
                    next.push_back(Path::of(q, word));
                }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
        if (frontier.empty())
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct QuotientDimension {
    int dim = 0;
    bool stabilized = false;
    int max_survivor_length = 0;
    int cap = 0;
};

// Dimension of the path space modulo the truncated Jacobian ideal (the
// number of non-pivot paths). Once stabilized - no survivors in the top
// two degrees and every survivor shorter than cap minus the maximal
// generator degree - the value is the exact Jacobian-algebra dimension.
inline QuotientDimension quotient_dimension(const IQP& p, int cap)
{
    if (cap < 2)
        throw std::invalid_argument("quotient_dimension: cap must be at least 2");
    IdealBasis basis(p, cap);
    QuotientDimension r;
    r.cap = cap;
    for (std::size_t id = 0; id < basis.catalog().size(); ++id) {
        if (basis.contains_pivot(static_cast<int>(id)))
            continue;
        ++r.dim;
        r.max_survivor_length = std::max(r.max_survivor_length,
                                         basis.catalog().path(static_cast<int>(id)).length());
    }
    r.stabilized = r.max_survivor_length <= cap - std::max(basis.max_generator_degree(), 1)
                   && r.max_survivor_length < cap - 1;
    return r;
}

// All cycles of length <= cap, one per cyclic-equivalence class.
inline std::vector<Path> all_cycle_classes(const IcedQuiver& q, int cap)
{
    std::set<Path> classes;
    for (int v = 1; v <= q.vertex_count(); ++v) {
        std::vector<std::pair<Path, int>> stack;
        stack.push_back({Path::trivial(v), v});
        while (!stack.empty()) {
            auto [path, at] = stack.back();
            stack.pop_back();
            for (const Arrow& a : q.arrows()) {
                if (a.src != at || path.length() + 1 > cap)
                    continue;
                std::vector<int> word = path.arrows();
                word.push_back(a.id);
                Path np = Path::of(q, word);
                if (a.tgt == v)
                    classes.insert(canonical_rotation(q, np));
                if (np.length() < cap)
                    stack.push_back({np, a.tgt});
            }
        }
    }
    return {classes.begin(), classes.end()};
}

struct RigidityReport {
    bool rigid_up_to_cap = true;
    bool certified = false;
    int cap = 0;
    std::vector<Path> witnesses;
};

// Every cycle of length <= cap, up to cyclic equivalence, is tested for
// membership in J + C. Combined with a stabilized quotient this certifies
// rigidity: all longer cycles vanish in the quotient.
inline RigidityReport rigidity_certificate(const IQP& p, int cap)
{
    RigidityReport rep;
    rep.cap = cap;
    IdealBasis basis(p, cap, /*with_rotation_span=*/true);
    for (const Path& cyc : all_cycle_classes(p.quiver, cap)) {
        PathSum x = PathSum::of(cyc, 1, cap);
        if (!basis.contains(x)) {
            rep.rigid_up_to_cap = false;
            rep.witnesses.push_back(cyc);
        }
    }
    rep.certified = rep.rigid_up_to_cap && quotient_dimension(p, cap).stabilized;
    return rep;
}

// The two-term cyclic-derivative relations of the potential: for an
// unexternal arrow lying on two faces the derivative is a difference of the
// two face paths, giving a monomial rewriting rule between parallel paths.
inline std::vector<std::pair<Path, Path>> binomial_relations(const IQP& p)
{
    std::vector<std::pair<Path, Path>> rels;
    for (const Arrow& a : p.quiver.arrows()) {
        if (!p.quiver.is_unexternal(a.id))
            continue;
        PathSum d = cyclic_derivative(p.quiver, p.potential, a.id);
        if (d.term_count() != 2)
            continue;
        auto it = d.terms().begin();
        const auto& [p1, c1] = *it;
        const auto& [p2, c2] = *std::next(it);
        if (c1 + c2 == 0) // opposite signs: p1 = p2 modulo the ideal
            rels.push_back({p1, p2});
    }
    return rels;
}

namespace detail {

inline bool is_power_of(const IcedQuiver& q, const Path& cycle, const Path& fund, int m)
{
    if (cycle.length() != m * fund.length())
        return false;
    const auto& arr = fund.arrows();
    std::vector<int> word;
    for (int t = 0; t < m; ++t)
        word.insert(word.end(), arr.begin(), arr.end());
    return canonical_rotation(q, Path::of(q, word)) == canonical_rotation(q, cycle);
}

} // namespace detail

// Essential length: the power m such that l rewrites to the m-th power of a
// fundamental cycle through its endpoint, where one rewrite step replaces a
// cyclic subword by the parallel path on the other side of a two-face
// derivative relation. Plain ideal membership cannot see m (fundamental
// cycles already lie in J), so the search walks the rewriting classes; the
// ideal basis only bounds the search by its cap. Absent when no power is
// reachable within the cap.
inline std::optional<std::pair<int, Path>>
essential_length(const Path& l, const IQP& p, const IdealBasis& basis,
                 const std::vector<Path>& fundamental)
{
    if (!l.is_cycle() || l.is_trivial())
        throw std::invalid_argument("essential_length: input must be a nontrivial cycle");
    const IcedQuiver& q = p.quiver;
    const int cap = basis.cap();

    auto rels = binomial_relations(p);
    std::set<Path> seen;
    std::vector<Path> queue = {canonical_rotation(q, l)};
    seen.insert(queue.front());

    auto match_power = [&](const Path& c) -> std::optional<std::pair<int, Path>> {
        for (const Path& f : fundamental) {
            if (c.length() % f.length() != 0)
                continue;
            int m = c.length() / f.length();
            if (detail::is_power_of(q, c, f, m)) {
                // report the fundamental cycle rotated to l's endpoint when
                // it passes through it
                const auto& arr = f.arrows();
                for (std::size_t o = 0; o < arr.size(); ++o)
                    if (q.source(arr[o]) == l.source())
                        return std::make_pair(m, rotate_cycle(q, f, static_cast<int>(o)));
                return std::make_pair(m, f);
            }
        }
        return std::nullopt;
    };

    for (std::size_t head = 0; head < queue.size(); ++head) {
        Path cur = queue[head];
        if (auto hit = match_power(cur))
            return hit;
        const auto& arr = cur.arrows();
        const int L = cur.length();
        for (const auto& [u, v] : rels) {
            for (int side = 0; side < 2; ++side) {
                const Path& from = side == 0 ? u : v;
                const Path& to = side == 0 ? v : u;
                const auto& fw = from.arrows();
                if (static_cast<int>(fw.size()) > L)
                    continue;
                for (int o = 0; o < L; ++o) {
                    bool match = true;
                    for (std::size_t t = 0; t < fw.size() && match; ++t)
                        if (arr[(o + t) % L] != fw[t])
                            match = false;
                    if (!match)
                        continue;
                    std::vector<int> word = to.arrows();
                    for (std::size_t t = fw.size(); t < static_cast<std::size_t>(L); ++t)
                        word.push_back(arr[(o + t) % L]);
                    if (static_cast<int>(word.size()) > cap)
                        continue;
                    // rotate to a valid cycle word starting where "to" starts
                    Path nc = canonical_rotation(q, Path::of(q, word));
                    if (seen.insert(nc).second)
                        queue.push_back(nc);
                }
            }
        }
    }
    return std::nullopt;
}

struct JacobiProbe {
    bool stabilized = false;
    int dim = 0;
    int through_cap = 0;
    std::vector<std::pair<int, int>> dims; // (cap, dim)
};

// Quotient dimensions over increasing caps; stabilized when the dimension
// stops moving and the per-cap stabilization rule fires.
inline JacobiProbe jacobi_finite_probe(const IQP& p, const std::vector<int>& caps)
{
    JacobiProbe probe;
    int prev = -1;
    bool flat = false, flag = false;
    for (int cap : caps) {
        QuotientDimension d = quotient_dimension(p, cap);
        probe.dims.push_back({cap, d.dim});
        flat = (prev == d.dim);
        flag = d.stabilized;
        prev = d.dim;
        probe.through_cap = cap;
    }
    probe.stabilized = flat && flag;
    if (probe.stabilized)
        probe.dim = prev;
    return probe;
}

} // namespace grassqp
