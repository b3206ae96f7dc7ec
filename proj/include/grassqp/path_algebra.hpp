#pragma once

#include <grassqp/quiver.hpp>
#include <grassqp/rational.hpp>

#include <compare>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace grassqp {

// A path in a quiver. Arrows are stored in application order (the arrow
// applied first comes first), while rendering follows the right-to-left
// composition convention: the path j --b--> i --a--> k is stored as [b, a]
// and printed "a b". Trivial paths carry their base vertex.
class Path {
public:
    static Path trivial(int vertex)
    {
        Path p;
        p.src_ = p.tgt_ = vertex;
        return p;
    }

    static Path of(const IcedQuiver& q, std::vector<int> arrow_ids_in_application_order)
    {
        if (arrow_ids_in_application_order.empty())
            throw std::invalid_argument("Path::of: empty arrow list; use trivial()");
        Path p;
        p.arrows_ = std::move(arrow_ids_in_application_order);
        p.src_ = q.source(p.arrows_.front());
        p.tgt_ = q.target(p.arrows_.front());
        for (std::size_t i = 1; i < p.arrows_.size(); ++i) {
            if (q.source(p.arrows_[i]) != p.tgt_)
                throw std::invalid_argument("Path::of: arrows not composable");
            p.tgt_ = q.target(p.arrows_[i]);
        }
        return p;
    }

    int source() const { return src_; }
    int target() const { return tgt_; }
    int length() const { return static_cast<int>(arrows_.size()); }
    bool is_trivial() const { return arrows_.empty(); }
    bool is_cycle() const { return src_ == tgt_; }
    const std::vector<int>& arrows() const { return arrows_; }

    // Product p * q (this = p, applied after q); requires s(p) = t(q).
    Path after(const Path& q) const
    {
        if (q.tgt_ != src_)
            throw std::invalid_argument("Path::after: sources/targets do not match");
        Path r;
        r.src_ = q.src_;
        r.tgt_ = tgt_;
        r.arrows_ = q.arrows_;
        r.arrows_.insert(r.arrows_.end(), arrows_.begin(), arrows_.end());
        return r;
    }

    bool contains_arrow(int id) const
    {
        for (int a : arrows_)
            if (a == id)
                return true;
        return false;
    }

    int count_arrow(int id) const
    {
        int c = 0;
        for (int a : arrows_)
            if (a == id)
                ++c;
        return c;
    }

    // Canonical order: by length, then by arrow-id sequence, then by base
    // vertex (relevant for trivial paths only).
    friend std::strong_ordering operator<=>(const Path& a, const Path& b)
    {
        if (a.arrows_.size() != b.arrows_.size())
            return a.arrows_.size() <=> b.arrows_.size();
        if (auto c = a.arrows_ <=> b.arrows_; c != 0)
            return c;
        if (auto c = a.src_ <=> b.src_; c != 0)
            return c;
        return a.tgt_ <=> b.tgt_;
    }
    friend bool operator==(const Path&, const Path&) = default;

    std::string str() const
    {
        if (is_trivial())
            return "e" + std::to_string(src_);
        std::ostringstream os;
        for (auto it = arrows_.rbegin(); it != arrows_.rend(); ++it) {
            if (it != arrows_.rbegin())
                os << ".";
            os << "a" << *it;
        }
        return os.str();
    }

private:
    std::vector<int> arrows_;
    int src_ = 0;
    int tgt_ = 0;
};

// Rotation of a cycle starting at offset o (in application order).
inline Path rotate_cycle(const IcedQuiver& q, const Path& c, int o)
{
    if (!c.is_cycle() || c.is_trivial())
        throw std::invalid_argument("rotate_cycle: not a nontrivial cycle");
    const auto& a = c.arrows();
    const int L = c.length();
    std::vector<int> rotated;
    rotated.reserve(L);
    for (int t = 0; t < L; ++t)
        rotated.push_back(a[(o + t) % L]);
    return Path::of(q, rotated);
}

// The rotation whose arrow-id sequence is lexicographically minimal; for
// periodic cycles the smallest starting offset realizing the minimum.
inline Path canonical_rotation(const IcedQuiver& q, const Path& c)
{
    if (!c.is_cycle() || c.is_trivial())
        throw std::invalid_argument("canonical_rotation: not a nontrivial cycle");
    const auto& a = c.arrows();
    const int L = c.length();
    int best = 0;
    for (int o = 1; o < L; ++o) {
        for (int t = 0; t < L; ++t) {
            int x = a[(o + t) % L], y = a[(best + t) % L];
            if (x != y) {
                if (x < y)
                    best = o;
                break;
            }
        }
    }
    return rotate_cycle(q, c, best);
}

inline bool cyclically_equivalent(const IcedQuiver& q, const Path& c1, const Path& c2)
{
    if (!c1.is_cycle() || !c2.is_cycle())
        throw std::invalid_argument("cyclically_equivalent: inputs must be cycles");
    if (c1.is_trivial() || c2.is_trivial())
        return c1 == c2;
    if (c1.length() != c2.length())
        return false;
    return canonical_rotation(q, c1) == canonical_rotation(q, c2);
}

constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

// Exact-coefficient noncommutative polynomial over paths, truncated at a
// fixed m-adic cap: terms of length > cap are dropped on construction and
// by every operation. Binary operations require equal caps.
class PathSum {
public:
    explicit PathSum(int cap = 64)
        : cap_(cap)
    {
    }

    static PathSum zero(int cap) { return PathSum(cap); }

    static PathSum of(const Path& p, Rational coeff, int cap)
    {
        PathSum s(cap);
        s.add_term(p, std::move(coeff));
        return s;
    }

    int cap() const { return cap_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Path, Rational>& terms() const { return terms_; }

    void add_term(const Path& p, const Rational& c)
    {
        if (c == 0 || p.length() > cap_)
            return;
        auto it = terms_.find(p);
        if (it == terms_.end()) {
            terms_.emplace(p, c);
        } else {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Rational coefficient(const Path& p) const
    {
        auto it = terms_.find(p);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    PathSum& operator+=(const PathSum& o)
    {
        require_same_cap(o);
        for (const auto& [p, c] : o.terms_)
            add_term(p, c);
        return *this;
    }

    PathSum& operator-=(const PathSum& o)
    {
        require_same_cap(o);
        for (const auto& [p, c] : o.terms_)
            add_term(p, -c);
        return *this;
    }

    friend PathSum operator+(PathSum a, const PathSum& b) { return a += b; }
    friend PathSum operator-(PathSum a, const PathSum& b) { return a -= b; }

    friend PathSum operator*(const Rational& c, PathSum s)
    {
        if (c == 0)
            return PathSum(s.cap_);
        for (auto& [p, v] : s.terms_)
            v *= c;
        return s;
    }

    // Noncommutative product, truncated at the cap. Pairs whose sources
    // and targets do not match contribute zero.
    friend PathSum product(const IcedQuiver& q, const PathSum& a, const PathSum& b)
    {
        a.require_same_cap(b);
        PathSum r(a.cap_);
        for (const auto& [pa, ca] : a.terms_)
            for (const auto& [pb, cb] : b.terms_) {
                if (pa.source() != pb.target())
                    continue;
                if (pa.length() + pb.length() > a.cap_)
                    continue;
                if (pa.is_trivial()) {
                    r.add_term(pb, ca * cb);
                } else if (pb.is_trivial()) {
                    r.add_term(pa, ca * cb);
                } else {
                    r.add_term(pa.after(pb), ca * cb);
                }
            }
        return r;
    }

    PathSum truncated(int new_cap) const
    {
        PathSum r(new_cap);
        for (const auto& [p, c] : terms_)
            r.add_term(p, c);
        return r;
    }

    int m_adic_order() const
    {
        if (terms_.empty())
            return kInfiniteOrder;
        // map is ordered by length first
        return terms_.begin()->first.length();
    }

    int max_term_length() const
    {
        if (terms_.empty())
            return 0;
        return terms_.rbegin()->first.length();
    }

    friend bool operator==(const PathSum& a, const PathSum& b)
    {
        return a.terms_ == b.terms_;
    }

    std::string str() const
    {
        if (terms_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [p, c] : terms_) {
            if (c > 0 && !first)
                os << " + ";
            else if (c < 0)
                os << (first ? "-" : " - ");
            Rational ac = c < 0 ? Rational(-c) : c;
            if (ac != 1)
                os << to_string(ac) << "*";
            os << p.str();
            first = false;
        }
        return os.str();
    }

private:
    void require_same_cap(const PathSum& o) const
    {
        if (cap_ != o.cap_)
            throw std::invalid_argument("PathSum: mixed truncation caps ("
                                        + std::to_string(cap_) + " vs "
                                        + std::to_string(o.cap_) + ")");
    }

    int cap_;
    std::map<Path, Rational> terms_;
};

inline int m_adic_order(const PathSum& x) { return x.m_adic_order(); }

// A PathSum whose every term is a cycle stored in canonical rotation, so
// that cyclic equivalence of terms is key equality.
class Potential {
public:
    explicit Potential(int cap = 64)
        : sum_(cap)
    {
    }

    static Potential zero(int cap) { return Potential(cap); }

    int cap() const { return sum_.cap(); }
    bool is_zero() const { return sum_.is_zero(); }
    const std::map<Path, Rational>& terms() const { return sum_.terms(); }
    const PathSum& as_path_sum() const { return sum_; }

    void add_cycle(const IcedQuiver& q, const Path& c, const Rational& coeff)
    {
        if (!c.is_cycle() || c.is_trivial())
            throw std::invalid_argument("Potential: terms must be nontrivial cycles");
        sum_.add_term(canonical_rotation(q, c), coeff);
    }

    void add(const IcedQuiver& q, const PathSum& s)
    {
        if (s.cap() != cap())
            throw std::invalid_argument("Potential::add: mixed caps");
        for (const auto& [p, c] : s.terms())
            add_cycle(q, p, c);
    }

    Rational coefficient_of_class(const IcedQuiver& q, const Path& c) const
    {
        return sum_.coefficient(canonical_rotation(q, c));
    }

    int longest_cycle_len() const { return sum_.max_term_length(); }

    friend bool operator==(const Potential& a, const Potential& b)
    {
        return a.sum_ == b.sum_;
    }

    std::string str() const { return sum_.str(); }

private:
    PathSum sum_;
};

inline int longest_cycle_len(const Potential& w) { return w.longest_cycle_len(); }

// Cyclic derivative with respect to arrow a: the linear extension of
// l |-> sum over all decompositions l = p a q of the path q then p.
inline PathSum cyclic_derivative(const IcedQuiver& q, const Potential& w, int arrow_id)
{
    PathSum r(w.cap());
    for (const auto& [cycle, coeff] : w.terms()) {
        const auto& arr = cycle.arrows();
        const int L = cycle.length();
        for (int i = 0; i < L; ++i) {
            if (arr[i] != arrow_id)
                continue;
            std::vector<int> rest;
            rest.reserve(L - 1);
            for (int t = 1; t < L; ++t)
                rest.push_back(arr[(i + t) % L]);
            if (rest.empty())
                r.add_term(Path::trivial(q.target(arrow_id)), coeff);
            else
                r.add_term(Path::of(q, rest), coeff);
        }
    }
    return r;
}

// The unique continuous algebra endomorphism fixing vertices and sending
// each arrow a to phi(a); phi(a) must be a sum of paths parallel to a.
// Arrows absent from phi map to themselves.
class ArrowSubstitution {
public:
    explicit ArrowSubstitution(int cap)
        : cap_(cap)
    {
    }

    int cap() const { return cap_; }
    const std::map<int, PathSum>& images() const { return images_; }

    void set(const IcedQuiver& q, int arrow_id, PathSum image)
    {
        if (image.cap() != cap_)
            throw std::invalid_argument("ArrowSubstitution: image cap mismatch");
        const Arrow& a = q.arrow(arrow_id);
        for (const auto& [p, c] : image.terms())
            if (p.source() != a.src || p.target() != a.tgt)
                throw std::invalid_argument("ArrowSubstitution: image of a"
                                            + std::to_string(arrow_id)
                                            + " is not parallel to it");
        images_[arrow_id] = std::move(image);
    }

    PathSum image_of_arrow(const IcedQuiver& q, int arrow_id) const
    {
        auto it = images_.find(arrow_id);
        if (it != images_.end())
            return it->second;
        const Arrow& a = q.arrow(arrow_id);
        return PathSum::of(Path::of(q, {arrow_id}), 1, cap_);
    }

    PathSum apply(const IcedQuiver& q, const PathSum& x) const
    {
        if (x.cap() != cap_)
            throw std::invalid_argument("ArrowSubstitution::apply: cap mismatch");
        PathSum r(cap_);
        for (const auto& [p, c] : x.terms()) {
            PathSum acc = PathSum::of(Path::trivial(p.source()), c, cap_);
            for (int a : p.arrows())
                acc = product(q, image_of_arrow(q, a), acc);
            r += acc;
        }
        return r;
    }

private:
    int cap_;
    std::map<int, PathSum> images_;
};

inline PathSum apply_endomorphism(const IcedQuiver& q, const ArrowSubstitution& phi,
                                  const PathSum& x)
{
    return phi.apply(q, x);
}

} // namespace grassqp
