#pragma once

#include <grassqp/cluster.hpp>
#include <grassqp/postnikov.hpp>
#include <grassqp/qp.hpp>

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace grassqp {

using nlohmann::json;

inline json to_json(const IcedQuiver& q)
{
    json arrows = json::array();
    for (const Arrow& a : q.arrows())
        arrows.push_back({a.id, a.src, a.tgt});
    return json{{"schema", "quiver.v1"},
                {"n", q.n_exchangeable()},
                {"m", q.n_frozen()},
                {"arrows", arrows}};
}

inline IcedQuiver quiver_from_json(const json& j)
{
    if (j.value("schema", "") != "quiver.v1")
        throw std::invalid_argument("quiver_from_json: expected schema quiver.v1");
    std::vector<Arrow> arrows;
    for (const auto& a : j.at("arrows"))
        arrows.push_back(Arrow{a.at(0).get<int>(), a.at(1).get<int>(), a.at(2).get<int>()});
    return IcedQuiver(j.at("n").get<int>(), j.at("m").get<int>(), std::move(arrows));
}

inline json to_json(const PathSum& s)
{
    json terms = json::array();
    for (const auto& [p, c] : s.terms()) {
        json ids = json::array();
        for (int a : p.arrows())
            ids.push_back(a);
        terms.push_back({numerator(c).convert_to<long long>(),
                         denominator(c).convert_to<long long>(), ids});
    }
    return terms;
}

inline json to_json(const Potential& w) { return to_json(w.as_path_sum()); }

inline Potential potential_from_json(const IcedQuiver& q, const json& j, int cap)
{
    Potential w(cap);
    for (const auto& t : j) {
        Rational c(Int(t.at(0).get<long long>()), Int(t.at(1).get<long long>()));
        std::vector<int> ids;
        for (const auto& a : t.at(2))
            ids.push_back(a.get<int>());
        w.add_cycle(q, Path::of(q, ids), c);
    }
    return w;
}

inline json to_json(const IQP& p)
{
    return json{{"schema", "iqp.v1"},
                {"quiver", to_json(p.quiver)},
                {"potential", to_json(p.potential)},
                {"cap", p.cap()}};
}

inline IQP iqp_from_json(const json& j)
{
    if (j.value("schema", "") != "iqp.v1")
        throw std::invalid_argument("iqp_from_json: expected schema iqp.v1");
    IcedQuiver q = quiver_from_json(j.at("quiver"));
    int cap = j.at("cap").get<int>();
    Potential w = potential_from_json(q, j.at("potential"), cap);
    return IQP(std::move(q), std::move(w));
}

inline json to_json(const FaceDiagram& fd)
{
    json faces = json::array();
    for (const DiagramFace& f : fd.faces) {
        json ids = json::array();
        for (int a : f.arrows)
            ids.push_back(a);
        faces.push_back({ids, to_string(f.tag), f.closed});
    }
    json rot = json::object();
    for (const auto& [v, order] : rotation_system(fd))
        rot[std::to_string(v)] = order;
    return json{{"schema", "facediagram.v1"},
                {"k", fd.k},
                {"quiver", to_json(fd.quiver)},
                {"rotation", rot},
                {"faces", faces},
                {"markers", fd.marker_external}};
}

inline FaceDiagram facediagram_from_json(const json& j)
{
    if (j.value("schema", "") != "facediagram.v1")
        throw std::invalid_argument("facediagram_from_json: expected schema facediagram.v1");
    FaceDiagram fd;
    fd.quiver = quiver_from_json(j.at("quiver"));
    fd.k = j.at("k").get<int>();
    fd.n = fd.quiver.n_frozen();
    for (const auto& f : j.at("faces")) {
        DiagramFace df;
        for (const auto& a : f.at(0))
            df.arrows.push_back(a.get<int>());
        df.tag = f.at(1).get<std::string>() == "CW" ? FaceTag::CW : FaceTag::ACW;
        df.closed = f.at(2).get<bool>();
        fd.faces.push_back(std::move(df));
    }
    for (const auto& m : j.at("markers"))
        fd.marker_external.push_back(m.get<int>());
    return fd;
}

inline json to_json(const Seed& s)
{
    json vars = json::array();
    for (const LaurentPoly& v : s.vars) {
        json terms = json::array();
        for (const auto& [e, c] : v.terms())
            terms.push_back({c.convert_to<long long>(), e});
        vars.push_back(terms);
    }
    return json{{"schema", "seed.v1"}, {"quiver", to_json(s.quiver)}, {"vars", vars}};
}

inline Seed seed_from_json(const json& j)
{
    if (j.value("schema", "") != "seed.v1")
        throw std::invalid_argument("seed_from_json: expected schema seed.v1");
    Seed s{quiver_from_json(j.at("quiver")), {}};
    const int nv = s.quiver.vertex_count();
    for (const auto& v : j.at("vars")) {
        LaurentPoly p(nv);
        for (const auto& t : v)
            p.add_term(t.at(1).get<std::vector<int>>(), Int(t.at(0).get<long long>()));
        s.vars.push_back(std::move(p));
    }
    return s;
}

// DOT export: frozen vertices boxed, external arrows dashed.
inline std::string to_dot(const IcedQuiver& q)
{
    std::ostringstream os;
    os << "digraph quiver {\n";
    for (int v = 1; v <= q.vertex_count(); ++v)
        os << "  v" << v << " [shape=" << (q.is_frozen(v) ? "box" : "circle") << "];\n";
    for (const Arrow& a : q.arrows()) {
        os << "  v" << a.src << " -> v" << a.tgt << " [label=\"a" << a.id << "\"";
        if (q.classify(a.id) == ArrowClass::External)
            os << ", style=dashed";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

// TikZ export of the embedded quiver: frozen ring on a circle, interior
// vertices relaxed to the average of their neighbours, faces shaded by
// orientation.
inline std::string to_tikz(const FaceDiagram& fd)
{
    const int nv = fd.quiver.vertex_count();
    std::vector<double> x(nv + 1, 0), y(nv + 1, 0);
    // ring order of frozen vertices via markers
    std::vector<int> ring;
    for (int m = 0; m < fd.marker_count(); ++m) {
        int e = fd.marker_external[m];
        int between = fd.marker_is_clockwise(m) ? fd.quiver.target(e) : fd.quiver.source(e);
        ring.push_back(between);
    }
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        double ang = pi / 2 - 2 * pi * static_cast<double>(i) / static_cast<double>(ring.size());
        x[ring[i]] = 4 * std::cos(ang);
        y[ring[i]] = 4 * std::sin(ang);
    }
    for (int iter = 0; iter < 200; ++iter) {
        for (int v = 1; v <= fd.quiver.n_exchangeable(); ++v) {
            double sx = 0, sy = 0;
            int deg = 0;
            for (int a : fd.quiver.arrows_at(v)) {
                int u = fd.quiver.source(a) == v ? fd.quiver.target(a) : fd.quiver.source(a);
                sx += x[u];
                sy += y[u];
                ++deg;
            }
            if (deg) {
                x[v] = sx / deg;
                y[v] = sy / deg;
            }
        }
    }
    std::ostringstream os;
    os << "\\begin{tikzpicture}[scale=0.8]\n";
    for (const DiagramFace& f : fd.faces) {
        os << "  \\fill[" << (f.tag == FaceTag::CW ? "blue!12" : "red!12") << "] ";
        for (int a : f.arrows)
            os << "(" << x[fd.quiver.source(a)] << "," << y[fd.quiver.source(a)] << ") -- ";
        os << "cycle;\n";
    }
    for (int v = 1; v <= nv; ++v)
        os << "  \\node[" << (fd.quiver.is_frozen(v) ? "rectangle,draw" : "circle,draw")
           << ", inner sep=1pt] (v" << v << ") at (" << x[v] << "," << y[v] << ") {"
           << v << "};\n";
    for (const Arrow& a : fd.quiver.arrows())
        os << "  \\draw[-latex"
           << (fd.quiver.classify(a.id) == ArrowClass::External ? ",dashed" : "") << "] (v"
           << a.src << ") -- (v" << a.tgt << ");\n";
    os << "\\end{tikzpicture}\n";
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

} // namespace grassqp
