#pragma once

#include <grassqp/quiver.hpp>
#include <grassqp/rational.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace grassqp {

// Laurent polynomial in a fixed number of variables with exact integer
// coefficients; exponents may be negative. Terms are kept in a map under
// lexicographic exponent order, which doubles as the normal form.
class LaurentPoly {
public:
    LaurentPoly() = default;

    explicit LaurentPoly(int nvars)
        : nvars_(nvars)
    {
    }

    static LaurentPoly constant(int nvars, Int c)
    {
        LaurentPoly p(nvars);
        if (c != 0)
            p.terms_[std::vector<int>(nvars, 0)] = std::move(c);
        return p;
    }

    static LaurentPoly variable(int nvars, int index)
    {
        LaurentPoly p(nvars);
        std::vector<int> e(nvars, 0);
        e.at(index) = 1;
        p.terms_[std::move(e)] = 1;
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<std::vector<int>, Int>& terms() const { return terms_; }

    bool is_one() const
    {
        return terms_.size() == 1 && terms_.begin()->second == 1
               && terms_.begin()->first == std::vector<int>(nvars_, 0);
    }

    bool is_monomial() const { return terms_.size() == 1; }

    void add_term(std::vector<int> exp, const Int& c)
    {
        if (c == 0)
            return;
        auto it = terms_.find(exp);
        if (it == terms_.end()) {
            terms_.emplace(std::move(exp), c);
        } else {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly r = a;
        for (const auto& [e, c] : b.terms_)
            r.add_term(e, c);
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly r = a;
        for (const auto& [e, c] : b.terms_)
            r.add_term(e, -c);
        return r;
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly r(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                std::vector<int> e(a.nvars_);
                for (int i = 0; i < a.nvars_; ++i)
                    e[i] = ea[i] + eb[i];
                r.add_term(std::move(e), ca * cb);
            }
        return r;
    }

    // Exact division in the Laurent ring; empty when b does not divide a.
    static std::optional<LaurentPoly> divide_exact(const LaurentPoly& a, const LaurentPoly& b)
    {
        if (b.is_zero())
            throw std::invalid_argument("LaurentPoly: division by zero");
        if (a.is_zero())
            return LaurentPoly(a.nvars_);
        // shift both to honest polynomials: subtract the minimum exponent
        auto min_exp = [](const LaurentPoly& p) {
            std::vector<int> m(p.nvars_, 0);
            bool first = true;
            for (const auto& [e, c] : p.terms_) {
                if (first) {
                    m = e;
                    first = false;
                } else {
                    for (int i = 0; i < p.nvars_; ++i)
                        m[i] = std::min(m[i], e[i]);
                }
            }
            return m;
        };
        std::vector<int> sa = min_exp(a), sb = min_exp(b);
        LaurentPoly rem = a.shifted(sa, -1);
        LaurentPoly div = b.shifted(sb, -1);
        LaurentPoly quo(a.nvars_);
        // divisor leading term under the map order (largest key)
        const auto& [eb, cb] = *div.terms_.rbegin();
        while (!rem.is_zero()) {
            const auto& [er, cr] = *rem.terms_.rbegin();
            std::vector<int> q(a.nvars_);
            for (int i = 0; i < a.nvars_; ++i) {
                q[i] = er[i] - eb[i];
                if (q[i] < 0)
                    return std::nullopt;
            }
            if (cr % cb != 0)
                return std::nullopt;
            Int qc = cr / cb;
            LaurentPoly t(a.nvars_);
            t.add_term(std::move(q), qc);
            quo = quo + t;
            rem = rem - t * div;
        }
        // undo the shifts: quo * x^(sa - sb)
        std::vector<int> shift(a.nvars_);
        for (int i = 0; i < a.nvars_; ++i)
            shift[i] = sa[i] - sb[i];
        return quo.shifted(shift, +1);
    }

    Rational evaluate(const std::vector<Rational>& values) const
    {
        Rational total = 0;
        for (const auto& [e, c] : terms_) {
            Rational term(c);
            for (int i = 0; i < nvars_; ++i) {
                if (e[i] == 0)
                    continue;
                if (values[i] == 0)
                    throw std::invalid_argument("LaurentPoly::evaluate: zero value");
                Rational p = 1;
                int k = e[i] > 0 ? e[i] : -e[i];
                for (int t = 0; t < k; ++t)
                    p *= values[i];
                term *= e[i] > 0 ? p : Rational(1) / p;
            }
            total += term;
        }
        return total;
    }

    bool has_negative_coefficient() const
    {
        for (const auto& [e, c] : terms_)
            if (c < 0)
                return true;
        return false;
    }

    friend auto operator<=>(const LaurentPoly& a, const LaurentPoly& b) = default;

    std::string str(const std::vector<std::string>& names) const
    {
        if (terms_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first)
                os << (c > 0 ? " + " : " - ");
            else if (c < 0)
                os << "-";
            Int ac = c < 0 ? Int(-c) : c;
            bool printed = false;
            if (ac != 1) {
                os << ac.str();
                printed = true;
            }
            for (int i = 0; i < nvars_; ++i)
                if (e[i] != 0) {
                    if (printed)
                        os << "*";
                    os << names.at(i);
                    if (e[i] != 1)
                        os << "^" << e[i];
                    printed = true;
                }
            if (!printed)
                os << "1";
            first = false;
        }
        return os.str();
    }

private:
    LaurentPoly shifted(const std::vector<int>& s, int sign) const
    {
        LaurentPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            std::vector<int> ne(nvars_);
            for (int i = 0; i < nvars_; ++i)
                ne[i] = e[i] + sign * s[i];
            r.terms_.emplace(std::move(ne), c);
        }
        return r;
    }

    int nvars_ = 0;
    std::map<std::vector<int>, Int> terms_;
};

enum class CoefficientMode { Trivial, Geometric };

// Seed: an iced quiver with one exact rational-function normal form per
// vertex, expressed as a Laurent polynomial in the initial indeterminates.
// Trivial mode sets the frozen variables to 1.
struct Seed {
    IcedQuiver quiver;
    std::vector<LaurentPoly> vars; // index v-1 for vertex v

    static Seed initial(const IcedQuiver& q, CoefficientMode mode)
    {
        Seed s{q, {}};
        const int nv = q.vertex_count();
        for (int v = 1; v <= nv; ++v) {
            if (q.is_frozen(v) && mode == CoefficientMode::Trivial)
                s.vars.push_back(LaurentPoly::constant(nv, 1));
            else
                s.vars.push_back(LaurentPoly::variable(nv, v - 1));
        }
        return s;
    }

    // Unordered multiset of exchangeable variables: the seed identity used
    // by exchange-graph deduplication.
    std::vector<LaurentPoly> cluster_key() const
    {
        std::vector<LaurentPoly> key(vars.begin(), vars.begin() + quiver.n_exchangeable());
        std::sort(key.begin(), key.end());
        return key;
    }

    friend bool operator==(const Seed& a, const Seed& b)
    {
        return a.quiver == b.quiver && a.vars == b.vars;
    }
};

// Seed mutation: the quiver mutates and x_i is replaced via the exchange
// relation x_i x_i' = prod over arrows out of i + prod over arrows into i.
inline Seed mutate_seed(const Seed& s, int i)
{
    if (!s.quiver.is_exchangeable(i))
        throw std::invalid_argument("mutate_seed: vertex is frozen or out of range");
    const int nv = s.quiver.vertex_count();
    LaurentPoly out_prod = LaurentPoly::constant(nv, 1);
    LaurentPoly in_prod = LaurentPoly::constant(nv, 1);
    for (const Arrow& a : s.quiver.arrows()) {
        if (a.src == i)
            out_prod = out_prod * s.vars[a.tgt - 1];
        if (a.tgt == i)
            in_prod = in_prod * s.vars[a.src - 1];
    }
    auto quo = LaurentPoly::divide_exact(out_prod + in_prod, s.vars[i - 1]);
    if (!quo)
        throw std::runtime_error("mutate_seed: exchange relation is not Laurent");
    Seed r{mutate_quiver(s.quiver, i), s.vars};
    r.vars[i - 1] = *quo;
    return r;
}

struct ExchangeGraphResult {
    bool exceeded = false;
    long seed_count = 0;
    int diameter = 0; // eccentricity of the start seed in the explored graph
    long quiver_iso_classes = 0;
};

// Breadth-first closure of the seed mutation graph, seeds identified by
// their unordered exchangeable clusters. Exact count when the closure
// completes under the bound.
inline ExchangeGraphResult explore_exchange_graph(const Seed& start, long max_seeds)
{
    ExchangeGraphResult res;
    std::set<std::vector<LaurentPoly>> seen;
    std::vector<Seed> frontier = {start};
    std::vector<IcedQuiver> iso_reps;
    seen.insert(start.cluster_key());
    int depth = 0;
    auto classify = [&](const IcedQuiver& q) {
        for (const IcedQuiver& rep : iso_reps)
            if (are_isomorphic(rep, q).has_value())
                return;
        iso_reps.push_back(q);
    };
    classify(start.quiver);
    while (!frontier.empty()) {
        std::vector<Seed> next;
        for (const Seed& s : frontier) {
            for (int i = 1; i <= s.quiver.n_exchangeable(); ++i) {
                Seed m = mutate_seed(s, i);
                if (seen.insert(m.cluster_key()).second) {
                    if (static_cast<long>(seen.size()) > max_seeds) {
                        res.exceeded = true;
                        res.seed_count = static_cast<long>(seen.size());
                        res.diameter = depth + 1;
                        res.quiver_iso_classes = static_cast<long>(iso_reps.size());
                        return res;
                    }
                    classify(m.quiver);
                    next.push_back(std::move(m));
                }
            }
        }
        if (!next.empty())
            ++depth;
        frontier = std::move(next);
    }
    res.seed_count = static_cast<long>(seen.size());
    res.diameter = depth;
    res.quiver_iso_classes = static_cast<long>(iso_reps.size());
    return res;
}

// True when every cluster variable reached along the mutation path is a
// Laurent polynomial in the start seed's variables (the division by the
// leaving variable is exact at every step).
inline bool laurent_check(const Seed& start, const std::vector<int>& path)
{
    Seed s = start;
    for (int i : path) {
        try {
            s = mutate_seed(s, i);
        } catch (const std::runtime_error&) {
            return false;
        }
    }
    return true;
}

} // namespace grassqp
