#pragma once

#include <grassqp/initial.hpp>
#include <grassqp/parallel.hpp>
#include <grassqp/postnikov.hpp>
#include <grassqp/qp.hpp>
#include <grassqp/rational.hpp>

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace grassqp {

// Canonical arrow relabeling: ids 0..E-1 assigned by (source, target, old
// id). Parallel arrows keep their relative id order.
inline std::pair<IcedQuiver, std::map<int, int>> canonicalize_arrows(const IcedQuiver& q)
{
    std::vector<Arrow> sorted = q.arrows();
    std::sort(sorted.begin(), sorted.end(), [](const Arrow& a, const Arrow& b) {
        return std::tie(a.src, a.tgt, a.id) < std::tie(b.src, b.tgt, b.id);
    });
    std::map<int, int> remap;
    std::vector<Arrow> renamed;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        remap[sorted[i].id] = static_cast<int>(i);
        renamed.push_back(Arrow{static_cast<int>(i), sorted[i].src, sorted[i].tgt});
    }
    return {IcedQuiver(q.n_exchangeable(), q.n_frozen(), renamed), remap};
}

inline Potential rename_potential(const IcedQuiver& target, const Potential& w,
                                  const std::map<int, int>& remap)
{
    Potential out(w.cap());
    for (const auto& [cyc, c] : w.terms()) {
        std::vector<int> word;
        for (int a : cyc.arrows())
            word.push_back(remap.at(a));
        out.add_cycle(target, Path::of(target, word), c);
    }
    return out;
}

// Exchangeable vertices where a geometric exchange applies: degree four,
// two arrows in and two out, no 2-cycle.
inline std::vector<int> admissible_exchange_vertices(const FaceDiagram& fd)
{
    std::vector<int> out;
    for (int v = 1; v <= fd.quiver.n_exchangeable(); ++v) {
        if (fd.quiver.arrows_in(v).size() == 2 && fd.quiver.arrows_out(v).size() == 2
            && !fd.quiver.has_two_cycle_through(v))
            out.push_back(v);
    }
    return out;
}

struct CompatCheck {
    bool diagram_valid = false;
    bool quiver_match = false;     // type III quivers agree after normalization
    bool potential_match = false;  // potentials agree up to signs and rotation
    bool scott_match = false;      // type I quivers agree after dropping externals
    std::string detail;

    bool ok() const { return diagram_valid && quiver_match && potential_match && scott_match; }
};

// One step of the double pipeline at a vertex: geometric exchange on the
// face diagram against mutation of the type III IQP (and the external-free
// comparison for the type I quiver). Returns the exchanged diagram.
inline CompatCheck check_exchange_compatibility(const FaceDiagram& fd, int vertex,
                                                FaceDiagram* out = nullptr)
{
    CompatCheck res;
    const int cap = static_cast<int>(fd.quiver.arrow_count()) + 8;

    FaceDiagram fd2 = geometric_exchange(fd, vertex);
    res.diagram_valid = validate(fd2).ok();
    if (!res.diagram_valid)
        res.detail = "exchanged diagram invalid: " + validate(fd2).str();

    IQP before = diagram_iqp(fd, QuiverVariant::TypeIII, cap);
    MutationResult mut = mutate(before, vertex);

    auto [qa, mapa] = canonicalize_arrows(mut.iqp.quiver);
    auto [qb, mapb] = canonicalize_arrows(build_quiver_variant(fd2, QuiverVariant::TypeIII));
    res.quiver_match = qa == qb;
    if (!res.quiver_match && res.detail.empty())
        res.detail = "type III quivers differ";

    if (res.quiver_match) {
        Potential wa = rename_potential(qa, mut.iqp.potential, mapa);
        Potential wb = rename_potential(qb, face_potential(fd2, QuiverVariant::TypeIII, cap), mapb);
        res.potential_match = equivalent_up_to_signs(wa, wb, qa).has_value();
        if (!res.potential_match)
            res.detail = "potentials not sign-equivalent";
    }

    {
        IcedQuiver q1 = mutate_quiver(build_quiver_variant(fd, QuiverVariant::TypeI), vertex);
        std::vector<Arrow> kept;
        for (const Arrow& a : q1.arrows())
            if (q1.classify(a.id) != ArrowClass::External)
                kept.push_back(a);
        IcedQuiver q1ne(q1.n_exchangeable(), q1.n_frozen(), kept);
        auto [c1, m1] = canonicalize_arrows(q1ne);
        auto [c2, m2] = canonicalize_arrows(build_quiver_variant(fd2, QuiverVariant::TypeI));
        res.scott_match = c1 == c2;
        if (!res.scott_match && res.detail.empty())
            res.detail = "type I quivers differ";
    }

    if (out)
        *out = std::move(fd2);
    return res;
}

struct CompatTrialReport {
    int trials = 0;
    int steps = 0;
    int failures = 0;
    std::vector<std::string> witnesses;

    bool ok() const { return failures == 0; }
};

// Random admissible exchange sequences on the initial diagram of Gr(k,n),
// checking the double pipeline at every step. Trials run in parallel with
// per-trial generators derived from the seed, so reports are independent of
// scheduling. The corrupt flag disables the untwisting step inside the
// surgery, a negative control that must produce witnesses.
inline CompatTrialReport run_compatibility_trials(int k, int n, int trials, int max_len,
                                                  std::uint64_t seed, bool corrupt = false)
{
    CompatTrialReport rep;
    FaceDiagram start = initial_diagram(k, n);

    struct TrialOutcome {
        int steps = 0;
        std::vector<std::string> witnesses;
    };
    std::function<TrialOutcome(std::size_t)> run_one = [&](std::size_t t) {
        TrialOutcome out;
        Rng rng(seed * 0x9e3779b97f4a7c15ULL + t + 1);
        FaceDiagram fd = start;
        int len = max_len <= 1 ? 1 : 1 + static_cast<int>(rng.below(std::uint64_t(max_len)));
        std::vector<int> chosen;
        for (int s = 0; s < len; ++s) {
            auto verts = admissible_exchange_vertices(fd);
            if (verts.empty())
                break;
            int v = verts[rng.below(verts.size())];
            chosen.push_back(v);
            FaceDiagram next;
            CompatCheck chk;
            if (corrupt) {
                try {
                    FaceDiagram broken =
                        geometric_exchange(fd, v, ExchangeOptions{.skip_digons = true});
                    chk.diagram_valid = validate(broken).ok();
                    chk.quiver_match = chk.potential_match = chk.scott_match =
                        chk.diagram_valid;
                    chk.detail = "corrupted surgery left digons";
                } catch (const std::exception& e) {
                    chk.detail = e.what();
                }
            } else {
                chk = check_exchange_compatibility(fd, v, &next);
            }
            ++out.steps;
            if (!chk.ok()) {
                std::ostringstream os;
                os << "trial " << t << " step " << s << " vertex " << v << ": " << chk.detail
                   << " (sequence:";
                for (int c : chosen)
                    os << " " << c;
                os << ")";
                out.witnesses.push_back(os.str());
                break;
            }
            fd = std::move(next);
        }
        return out;
    };

    auto outcomes = parallel_map<TrialOutcome>(static_cast<std::size_t>(trials), run_one);
    for (auto& out : outcomes) {
        ++rep.trials;
        rep.steps += out.steps;
        if (!out.witnesses.empty()) {
            ++rep.failures;
            for (auto& w : out.witnesses)
                rep.witnesses.push_back(std::move(w));
        }
    }
    return rep;
}

} // namespace grassqp
