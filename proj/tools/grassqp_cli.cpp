// Command-line driver: generation of initial data, the exchange-mutation
// verification suite, Jacobian-algebra probes, rigidity certificates and
// exchange-graph exploration, with JSON and table output.

#include <grassqp/cluster.hpp>
#include <grassqp/compat.hpp>
#include <grassqp/initial.hpp>
#include <grassqp/jacobian.hpp>
#include <grassqp/json_io.hpp>
#include <grassqp/postnikov.hpp>
#include <grassqp/qp.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr const char* kVersion = "grassqp 1.0.0";

using namespace grassqp;

QuiverVariant parse_variant(const std::string& s)
{
    if (s == "type1")
        return QuiverVariant::TypeI;
    if (s == "type2")
        return QuiverVariant::TypeII;
    if (s == "type3")
        return QuiverVariant::TypeIII;
    if (s == "bkm")
        return QuiverVariant::BKM;
    throw CLI::ValidationError("variant must be one of type1, type2, type3, bkm");
}

json base_report(const std::string& command, const std::string& property)
{
    return json{{"tool", kVersion}, {"command", command}, {"property", property}};
}

void emit(const json& report, bool as_json, const std::string& out,
          const std::string& table)
{
    std::string payload = as_json ? report.dump(2) + "\n" : table;
    if (out.empty())
        std::cout << payload;
    else
        write_file(out, payload);
}

int cmd_init(int k, int n, const std::string& variant_name, int cap, bool as_json,
             const std::string& out)
{
    QuiverVariant variant = parse_variant(variant_name);
    FaceDiagram fd = initial_diagram(k, n);
    if (cap <= 0)
        cap = static_cast<int>(fd.quiver.arrow_count()) + 8;
    IQP p = diagram_iqp(fd, variant, cap);

    std::string stem = out.empty()
                           ? "gr" + std::to_string(k) + "_" + std::to_string(n)
                           : out;
    write_file(stem + ".facediagram.json", to_json(fd).dump(2) + "\n");
    write_file(stem + ".iqp.json", to_json(p).dump(2) + "\n");
    write_file(stem + ".dot", to_dot(p.quiver));
    write_file(stem + ".tikz", to_tikz(fd));

    json rep = base_report("init", "initial-diagram");
    rep["k"] = k;
    rep["n"] = n;
    rep["variant"] = variant_name;
    rep["cap"] = cap;
    rep["vertices"] = p.quiver.vertex_count();
    rep["arrows"] = p.quiver.arrow_count();
    rep["potential_terms"] = p.potential.terms().size();
    rep["files"] = {stem + ".facediagram.json", stem + ".iqp.json", stem + ".dot",
                    stem + ".tikz"};
    std::ostringstream table;
    table << "initial diagram Gr(" << k << "," << n << ") variant " << variant_name << "\n"
          << "  vertices " << p.quiver.vertex_count() << " (" << p.quiver.n_exchangeable()
          << " exchangeable), arrows " << p.quiver.arrow_count() << ", potential terms "
          << p.potential.terms().size() << "\n"
          << "  wrote " << stem << ".facediagram.json, .iqp.json, .dot, .tikz\n";
    emit(rep, as_json, "", table.str());
    return 0;
}

int cmd_verify_compat(int k, int n, int trials, int len, std::uint64_t seed, bool corrupt,
                      bool as_json, const std::string& out)
{
    CompatTrialReport rep = run_compatibility_trials(k, n, trials, len, seed, corrupt);
    json j = base_report("verify-compat", "exchange-mutation-compatibility");
    j["k"] = k;
    j["n"] = n;
    j["trials"] = rep.trials;
    j["steps"] = rep.steps;
    j["failures"] = rep.failures;
    j["seed"] = seed;
    j["len"] = len;
    j["corrupt_hook"] = corrupt;
    j["witnesses"] = rep.witnesses;
    std::ostringstream table;
    table << "exchange-mutation compatibility Gr(" << k << "," << n << ") seed " << seed
          << "\n  trials " << rep.trials << ", steps " << rep.steps << ", failures "
          << rep.failures << (rep.ok() ? "  [pass]" : "  [FAIL]") << "\n";
    for (const auto& w : rep.witnesses)
        table << "  witness: " << w << "\n";
    emit(j, as_json, out, table.str());
    return rep.ok() ? 0 : 1;
}

int cmd_jacobian(int k, int n, const std::string& variant_name, int cap,
                 std::uint64_t seed, bool as_json, const std::string& out)
{
    QuiverVariant variant = parse_variant(variant_name);
    FaceDiagram fd = initial_diagram(k, n);
    IQP p = diagram_iqp(fd, variant, cap);
    std::vector<int> caps;
    for (int c = 6; c <= cap; c += 2)
        caps.push_back(c);
    if (caps.empty())
        caps.push_back(cap);
    JacobiProbe probe = jacobi_finite_probe(p, caps);

    json j = base_report("jacobian", "jacobian-dimension");
    j["k"] = k;
    j["n"] = n;
    j["variant"] = variant_name;
    j["seed"] = seed;
    j["dims"] = probe.dims;
    j["verdict"] = probe.stabilized ? "stabilized" : "growing";
    if (probe.stabilized)
        j["dim"] = probe.dim;
    j["through_cap"] = probe.through_cap;
    std::ostringstream table;
    table << "jacobian dimensions Gr(" << k << "," << n << ") variant " << variant_name
          << "\n  cap:dim";
    for (auto [c, d] : probe.dims)
        table << "  " << c << ":" << d;
    table << "\n  verdict: "
          << (probe.stabilized ? "stabilized at " + std::to_string(probe.dim)
                               : "growing through cap " + std::to_string(probe.through_cap))
          << "\n";
    emit(j, as_json, out, table.str());
    return 0;
}

int cmd_rigidity(int k, int n, const std::string& variant_name, int cap,
                 std::uint64_t seed, bool as_json, const std::string& out)
{
    QuiverVariant variant = parse_variant(variant_name);
    FaceDiagram fd = initial_diagram(k, n);
    IQP p = diagram_iqp(fd, variant, cap);
    RigidityReport rep = rigidity_certificate(p, cap);

    json j = base_report("rigidity", "rigidity-certificate");
    j["k"] = k;
    j["n"] = n;
    j["variant"] = variant_name;
    j["cap"] = cap;
    j["seed"] = seed;
    j["rigid_up_to_cap"] = rep.rigid_up_to_cap;
    j["certified"] = rep.certified;
    json wit = json::array();
    for (const Path& w : rep.witnesses)
        wit.push_back(w.str());
    j["witnesses"] = wit;
    std::ostringstream table;
    table << "rigidity certificate Gr(" << k << "," << n << ") variant " << variant_name
          << " cap " << cap << "\n  "
          << (rep.rigid_up_to_cap ? (rep.certified ? "rigid (certified)" : "rigid up to cap")
                                  : "NOT rigid")
          << "\n";
    for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
        table << "  witness cycle: " << rep.witnesses[i].str() << "\n";
        if (i >= 9 && rep.witnesses.size() > 10) {
            table << "  ... (" << rep.witnesses.size() << " witnesses)\n";
            break;
        }
    }
    emit(j, as_json, out, table.str());
    return 0;
}

int cmd_exchange_graph(int k, int n, long max_seeds, std::uint64_t seed, bool as_json,
                       const std::string& out)
{
    FaceDiagram fd = initial_diagram(k, n);
    IcedQuiver q = build_quiver_variant(fd, QuiverVariant::TypeIII);
    Seed s0 = Seed::initial(q, CoefficientMode::Trivial);
    ExchangeGraphResult res = explore_exchange_graph(s0, max_seeds);

    json j = base_report("exchange-graph", "exchange-graph-count");
    j["k"] = k;
    j["n"] = n;
    j["max_seeds"] = max_seeds;
    j["seed"] = seed;
    j["exceeded"] = res.exceeded;
    j["seed_count"] = res.seed_count;
    j["diameter"] = res.diameter;
    j["quiver_iso_classes"] = res.quiver_iso_classes;
    std::ostringstream table;
    table << "exchange graph Gr(" << k << "," << n << ") bound " << max_seeds << "\n  "
          << (res.exceeded ? "exceeded bound at " : "closed with ") << res.seed_count
          << " seeds, diameter " << res.diameter << ", quiver classes "
          << res.quiver_iso_classes << "\n";
    if (!out.empty() && !as_json) {
        std::ostringstream csv;
        csv << "k,n,max_seeds,exceeded,seed_count,diameter,quiver_iso_classes\n"
            << k << "," << n << "," << max_seeds << "," << res.exceeded << ","
            << res.seed_count << "," << res.diameter << "," << res.quiver_iso_classes
            << "\n";
        write_file(out, csv.str());
        std::cout << table.str();
        return 0;
    }
    emit(j, as_json, out, table.str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact quivers-with-potentials toolkit for Grassmannian cluster algebras"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    int k = 3, n = 7, cap = 0, trials = 100, len = 6;
    long max_seeds = 10000;
    std::uint64_t seed = 1;
    bool as_json = false, corrupt = false;
    std::string variant = "type3", out;

    auto add_common = [&](CLI::App* c, bool with_variant) {
        c->add_option("--k", k, "number of rows of the Grassmannian")->required();
        c->add_option("--n", n, "ambient dimension")->required();
        if (with_variant)
            c->add_option("--variant", variant, "type1|type2|type3|bkm");
        c->add_flag("--json", as_json, "machine-readable output");
        c->add_option("--out", out, "output path (default stdout)");
        c->add_option("--seed", seed, "random seed, echoed into every report");
    };

    CLI::App* init = app.add_subcommand("init", "write the initial diagram and IQP files");
    add_common(init, true);
    init->add_option("--cap", cap, "truncation cap (default: arrows + 8)");

    CLI::App* verify = app.add_subcommand(
        "verify-compat", "exchange sequences against IQP mutation, both pipelines");
    add_common(verify, false);
    verify->add_option("--trials", trials, "number of random sequences");
    verify->add_option("--len", len, "maximal sequence length");
    verify->add_flag("--corrupt-surgery", corrupt,
                     "negative control: break the untwisting step");

    CLI::App* jac = app.add_subcommand("jacobian", "quotient dimensions over growing caps");
    add_common(jac, true);
    jac->add_option("--cap", cap, "largest truncation cap")->default_val(12);

    CLI::App* rig = app.add_subcommand("rigidity", "cycle membership certificate");
    add_common(rig, true);
    rig->add_option("--cap", cap, "truncation cap")->default_val(10);

    CLI::App* ex = app.add_subcommand("exchange-graph", "breadth-first seed closure");
    add_common(ex, false);
    ex->add_option("--max-seeds", max_seeds, "exploration bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (init->parsed())
            return cmd_init(k, n, variant, cap, as_json, out);
        if (verify->parsed())
            return cmd_verify_compat(k, n, trials, len, seed, corrupt, as_json, out);
        if (jac->parsed()) {
            if (cap < 4)
                throw std::invalid_argument("jacobian: cap must be at least 4");
            return cmd_jacobian(k, n, variant, cap, seed, as_json, out);
        }
        if (rig->parsed()) {
            if (cap < 4)
                throw std::invalid_argument("rigidity: cap must be at least 4");
            return cmd_rigidity(k, n, variant, cap, seed, as_json, out);
        }
        if (ex->parsed())
            return cmd_exchange_graph(k, n, max_seeds, seed, as_json, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
