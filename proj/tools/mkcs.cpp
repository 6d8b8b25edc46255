// Command-line front end: wraps the reduction, spectral, and verifier modules
// behind a single binary with JSON/TSV reports. Exit codes: 0 ok, 1 input
// error, 2 budget refusal, 3 failed lemma-derived check.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mkcs/csp.hpp"
#include "mkcs/fourier.hpp"
#include "mkcs/graph.hpp"
#include "mkcs/pcp.hpp"
#include "mkcs/reduce3.hpp"
#include "mkcs/reducek.hpp"
#include "mkcs/serialize.hpp"
#include "mkcs/spectral.hpp"

namespace fs = std::filesystem;
using namespace mkcs;

namespace {

struct LemmaFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw InputError("bad JSON in '" + path + "': " + e.what());
    }
    return j;
}

void save_text(const fs::path& path, const std::string& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << body;
}

void save_json(const fs::path& path, const Json& j) { save_text(path, j.dump(2) + "\n"); }

void save_graph(const fs::path& path, const WeightedGraph& g) {
    std::ostringstream os;
    write_graph(os, g);
    save_text(path, os.str());
}

WeightedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return read_graph(in);
}

std::string json_scalar(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

void flatten(const Json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (const auto& [key, val] : j.items())
            flatten(val, prefix.empty() ? key : prefix + "." + key, rows);
    } else if (j.is_array()) {
        int i = 0;
        for (const auto& val : j) flatten(val, prefix + "." + std::to_string(i++), rows);
    } else {
        rows.emplace_back(prefix, json_scalar(j));
    }
}

void emit_report(const Json& j, const std::string& format) {
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(j, "", rows);
    std::cout << "key\tvalue\n";
    for (const auto& [key, val] : rows) std::cout << key << "\t" << val << "\n";
}

// Accumulates two-sided lemma checks so the report always shows what was
// compared, not just a verdict.
struct CheckList {
    Json rows = Json::array();
    bool all_pass = true;

    void add(const std::string& name, const std::string& lhs, const std::string& rel,
             const std::string& rhs, bool pass) {
        rows.push_back(Json{{"check", name}, {"lhs", lhs}, {"rel", rel}, {"rhs", rhs},
                            {"pass", pass}});
        all_pass = all_pass && pass;
    }
    void add_rational(const std::string& name, const Rational& lhs, const std::string& rel,
                      const Rational& rhs, bool pass) {
        add(name, display_rational(lhs), rel, display_rational(rhs), pass);
    }
};

// --- csp ---------------------------------------------------------------

struct CspGenArgs {
    std::uint64_t seed = 1;
    int nx = 4, ny = 3, nz = 3, m = 6;
    bool random = false;
    std::string out = ".";
    std::string format = "json";
};

void run_csp_gen(const CspGenArgs& a) {
    Json report{{"schema", "mkcs.cspgen.v1"}, {"seed", a.seed}, {"nx", a.nx}, {"ny", a.ny},
                {"nz", a.nz}, {"m", a.m}};
    fs::path dir(a.out);
    if (a.random) {
        auto inst = generate_random(a.seed, a.nx, a.ny, a.nz, a.m);
        save_json(dir / "csp_instance.json", csp_to_json(inst));
        report["planted"] = false;
        report["files"] = Json::array({(dir / "csp_instance.json").string()});
    } else {
        auto [inst, assign] = generate_planted(a.seed, a.nx, a.ny, a.nz, a.m);
        save_json(dir / "csp_instance.json", csp_to_json(inst));
        save_json(dir / "csp_assignment.json", assignment_to_json(assign));
        report["planted"] = true;
        report["planted_satisfied"] = count_satisfied(inst, assign);
        report["files"] = Json::array({(dir / "csp_instance.json").string(),
                                       (dir / "csp_assignment.json").string()});
    }
    emit_report(report, a.format);
}

struct CspSolveArgs {
    std::string instance;
    std::uint64_t budget = 1u << 22;
    std::string format = "json";
};

void run_csp_solve(const CspSolveArgs& a) {
    auto inst = csp_from_json(load_json(a.instance));
    auto [best, count] = exact_max_sat(inst, a.budget);
    Json report{{"schema", "mkcs.cspsolve.v1"},
                {"m", static_cast<int>(inst.constraints.size())},
                {"best_satisfied", count},
                {"assignment", assignment_to_json(best)}};
    emit_report(report, a.format);
}

// --- reduce ------------------------------------------------------------

struct Reduce3Args {
    std::string instance;
    std::string out = ".";
    std::string format = "json";
};

void run_reduce_3color(const Reduce3Args& a) {
    auto inst = csp_from_json(load_json(a.instance));
    auto red = build_3color_instance(inst);
    fs::path dir(a.out);
    save_graph(dir / "graph3.txt", red.graph);
    save_json(dir / "reduce3_layout.json", reduce3_layout_to_json(red.layout, red.provenance));
    int m = static_cast<int>(inst.constraints.size());
    Rational total = red.graph.total_weight();
    Rational want = Rational(33 * static_cast<long long>(m), 2);
    Json report{{"schema", "mkcs.reduce3.report.v1"},
                {"m", m},
                {"nodes", red.layout.node_count()},
                {"edges", static_cast<long long>(red.graph.edges.size())},
                {"total_weight", display_rational(total)},
                {"expected_weight", display_rational(want)},
                {"weight_identity", total == want},
                {"files", Json::array({(dir / "graph3.txt").string(),
                                       (dir / "reduce3_layout.json").string()})}};
    emit_report(report, a.format);
    if (total != want) throw LemmaFailure("gadget total weight identity failed");
}

struct ReduceKArgs {
    std::string graph;
    int k = 6;
    std::string out = ".";
    std::string format = "json";
};

void run_reduce_kcolor(const ReduceKArgs& a) {
    auto g = load_graph(a.graph);
    auto out = tensor_build(g, a.k);
    fs::path dir(a.out);
    save_graph(dir / "graphk.txt", out.graph);
    save_json(dir / "tensor_layout.json", tensor_layout_to_json(out.layout));
    Rational total = out.graph.total_weight();
    Rational cap = Rational(static_cast<long long>(a.k) * a.k *
                            static_cast<long long>(g.edges.size()));
    Json report{{"schema", "mkcs.reducek.report.v1"},
                {"k", a.k},
                {"nodes", out.graph.n},
                {"total_weight", display_rational(total)},
                {"weight_cap", display_rational(cap)},
                {"within_cap", total <= cap},
                {"files", Json::array({(dir / "graphk.txt").string(),
                                       (dir / "tensor_layout.json").string()})}};
    emit_report(report, a.format);
    if (total > cap) throw LemmaFailure("tensor weight cap failed");
}

struct PadArgs {
    std::string graph;
    int K = 3;
    int k = 4;
    std::string out = ".";
    std::string format = "json";
};

void run_reduce_pad(const PadArgs& a) {
    auto g = load_graph(a.graph);
    auto [h, lay] = pad_to_k(g, a.K, a.k);
    fs::path dir(a.out);
    save_graph(dir / "padded_graph.txt", h);
    save_json(dir / "padding_layout.json", padding_layout_to_json(lay));
    Rational M = lay.source_weight;
    Rational want = M + Rational(2 * lay.L) * M / a.K + M * (lay.L - 1) / (33 * a.K);
    Rational got = h.total_weight();
    Json report{{"schema", "mkcs.pad.report.v1"},
                {"K", a.K},
                {"k", a.k},
                {"L", lay.L},
                {"source_weight", display_rational(M)},
                {"padded_weight", display_rational(got)},
                {"expected_weight", display_rational(want)},
                {"weight_identity", got == want},
                {"files", Json::array({(dir / "padded_graph.txt").string(),
                                       (dir / "padding_layout.json").string()})}};
    emit_report(report, a.format);
    if (got != want) throw LemmaFailure("padding weight identity failed");
}

struct UnweightArgs {
    std::string graph;
    std::uint64_t cap = 1u << 22;
    std::string out = ".";
    std::string format = "json";
};

void run_reduce_unweight(const UnweightArgs& a) {
    auto g = load_graph(a.graph);
    auto h = unweight(g, a.cap);
    fs::path dir(a.out);
    save_graph(dir / "unit_graph.txt", h);
    Json report{{"schema", "mkcs.unweight.report.v1"},
                {"source_edges", static_cast<long long>(g.edges.size())},
                {"unit_edges", static_cast<long long>(h.edges.size())},
                {"total_weight", display_rational(h.total_weight())},
                {"files", Json::array({(dir / "unit_graph.txt").string()})}};
    emit_report(report, a.format);
}

// --- spectral ----------------------------------------------------------

struct SpectralArgs {
    int q = 16;
    std::string format = "json";
};

void run_spectral_report(const SpectralArgs& a) {
    if (a.q < 6 || a.q > 20) throw InputError("spectral report supports q in [6, 20]");
    Json rows = Json::array();
    bool all = true;
    for (int q = 6; q <= a.q; ++q) {
        double rho = spectral_radius(dmr_operator(q));
        double bound = 4.0 / (q - 1);
        bool ok = rho <= bound + 1e-9;
        all = all && ok;
        rows.push_back(Json{{"q", q}, {"rho", fmt_double(rho)}, {"bound", fmt_double(bound)},
                            {"within", ok}});
    }
    Json report{{"schema", "mkcs.spectral.report.v1"}, {"rows", rows}, {"pass", all}};
    emit_report(report, a.format);
    if (!all) throw LemmaFailure("spectral radius bound failed");
}

// --- pcp ---------------------------------------------------------------

struct PcpGenArgs {
    std::uint64_t seed = 1;
    int nu = 2, nv = 3, degree = 2, R = 1, k = 4;
    bool random = false;
    std::string out = ".";
    std::string format = "json";
};

void run_pcp_gen(const PcpGenArgs& a) {
    auto gen = gen_label_cover(a.seed, a.nu, a.nv, a.degree, a.R, !a.random);
    ProofBundle bundle;
    bundle.instance = gen.instance;
    bundle.planted = gen.planted;
    if (gen.planted) {
        bundle.proof = long_code_proof(gen.instance, *gen.planted, a.k);
    } else {
        // random tables when no planted labeling exists
        Rng rng(a.seed ^ 0x9e3779b97f4a7c15ull);
        bundle.proof.k = a.k;
        bundle.proof.R = a.R;
        long long pts = checked_table_points(a.k, 2 * a.R);
        for (int v = 0; v < a.nv; ++v) {
            std::vector<int> tbl(pts);
            for (int& c : tbl) c = 1 + rng.below_int(a.k);
            bundle.proof.tables.push_back(std::move(tbl));
        }
    }
    fs::path dir(a.out);
    save_json(dir / "pcp_bundle.json",
              proof_bundle_to_json(bundle.instance, bundle.proof, bundle.planted));
    Json report{{"schema", "mkcs.pcpgen.v1"},
                {"seed", a.seed},
                {"nu", a.nu},
                {"nv", a.nv},
                {"degree", a.degree},
                {"R", a.R},
                {"k", a.k},
                {"planted", gen.planted.has_value()},
                {"files", Json::array({(dir / "pcp_bundle.json").string()})}};
    emit_report(report, a.format);
}

struct PcpSimArgs {
    std::string proof;
    int R = 0;  // 0 = take from bundle
    int k = 0;
    std::int64_t budget = 100'000'000;
    int t = 2;
    double delta = 0.1;
    std::string format = "json";
};

void run_pcp_simulate(const PcpSimArgs& a) {
    auto bundle = proof_bundle_from_json(load_json(a.proof));
    if (a.R != 0 && a.R != bundle.instance.R)
        throw InputError("--R does not match the bundle");
    if (a.k != 0 && a.k != bundle.proof.k) throw InputError("--k does not match the bundle");
    auto acc = acceptance_probability(bundle.instance, bundle.proof, a.budget);
    auto dec = influence_decode(bundle.instance, bundle.proof, a.t, a.delta);
    Json report{{"schema", "mkcs.pcpsim.v1"},
                {"R", bundle.instance.R},
                {"k", bundle.proof.k},
                {"acceptance", display_rational(acc)},
                {"acceptance_double", fmt_double(to_double(acc))},
                {"decoded_satisfied", dec.satisfied},
                {"decoded_value", display_rational(dec.value)},
                {"labeling", labeling_to_json(dec.labeling)}};
    if (bundle.planted) {
        report["planted_value"] =
            display_rational(labeling_value(bundle.instance, *bundle.planted));
    }
    emit_report(report, a.format);
}

// --- verify ------------------------------------------------------------

struct VerifyArgs {
    std::uint64_t seed = 1;
    int k = 6;
    std::uint64_t budget = 1u << 22;
    std::string format = "json";
    std::string out;
    bool timing = false;
};

void run_verify_pipeline(const VerifyArgs& a) {
    if (a.k < 3 || a.k % 3 != 0) throw InputError("pipeline needs k a positive multiple of 3");
    auto start = std::chrono::steady_clock::now();
    CheckList checks;
    Rng rng(a.seed);

    // constraint instance -> weighted graph -> encode/decode round trip
    auto [inst, planted] = generate_planted(a.seed, 3, 3, 3, 6);
    int m = static_cast<int>(inst.constraints.size());
    auto red = build_3color_instance(inst);
    checks.add_rational("gadget-total-weight", red.graph.total_weight(), "==",
                        Rational(33 * static_cast<long long>(m), 2),
                        red.graph.total_weight() == Rational(33 * static_cast<long long>(m), 2));

    auto chi = encode_assignment(inst, red.layout, planted);
    Rational enc_misc = score(red.graph, chi).miscolored_weight;
    checks.add_rational("encode-proper", enc_misc, "==", Rational(0), enc_misc == 0);

    auto dec = decode_coloring(inst, red, chi);
    int dec_sat = count_satisfied(inst, dec.assignment);
    checks.add("decode-planted-satisfied", std::to_string(dec_sat), "==", std::to_string(m),
               dec_sat == m);

    // perturb two non-anchor nodes, then the decoded assignment must satisfy
    // >= m - tau whenever the guarantee condition holds
    auto noisy = chi;
    for (int rep = 0; rep < 2; ++rep) {
        int v = 3 + rng.below_int(red.layout.node_count() - 3);
        noisy.colors[v] = 1 + rng.below_int(3);
    }
    auto dec2 = decode_coloring(inst, red, noisy);
    int sat2 = count_satisfied(inst, dec2.assignment);
    bool bound_ok = !dec2.guarantee || Rational(sat2) >= Rational(m) - dec2.tau;
    checks.add("decode-perturbed-bound", std::to_string(sat2), ">=",
               display_rational(Rational(m) - dec2.tau) +
                   (dec2.guarantee ? "" : " (vacuous: no guarantee)"),
               bound_ok);

    // unweighting preserves the proper fraction
    auto unit = unweight(red.graph, a.budget);
    Rational f_src = score(red.graph, chi).fraction_proper;
    Rational f_unit = score(unit, chi).fraction_proper;
    checks.add_rational("unweight-fraction", f_unit, "==", f_src, f_unit == f_src);

    // padding identities plus an explicit proper witness on the padded graph
    for (int kk = 4; kk <= 5; ++kk) {
        auto [padded, lay] = pad_to_k(unit, 3, kk);
        Rational M = lay.source_weight;
        Rational want = M + Rational(2 * lay.L) * M / 3 + M * (lay.L - 1) / 99;
        checks.add_rational("pad" + std::to_string(kk) + "-weight", padded.total_weight(), "==",
                            want, padded.total_weight() == want);
        Coloring wit{kk, chi.colors};
        for (int l = 0; l < lay.L; ++l) wit.colors.push_back(4 + l);
        Rational wmisc = score(padded, wit).miscolored_weight;
        checks.add_rational("pad" + std::to_string(kk) + "-witness-proper", wmisc, "==",
                            Rational(0), wmisc == 0);
    }

    // tensor chain on the triangle
    WeightedGraph tri;
    tri.n = 3;
    tri.add_edge(0, 1, 1);
    tri.add_edge(1, 2, 1);
    tri.add_edge(0, 2, 1);
    auto ten = tensor_build(tri, a.k);
    Rational cap = Rational(static_cast<long long>(a.k) * a.k * 3);
    checks.add_rational("tensor-weight-cap", ten.graph.total_weight(), "<=", cap,
                        ten.graph.total_weight() <= cap);
    auto chi3 = Coloring{3, {1, 2, 3}};
    auto chik = encode_3_to_k(ten.layout, chi3);
    Rational ten_misc = score(ten.graph, chik).miscolored_weight;
    checks.add_rational("tensor-encode-proper", ten_misc, "==", Rational(0), ten_misc == 0);
    auto [back3, cert0] = decode_k_to_3(tri, ten.layout, chik);
    checks.add_rational("tensor-roundtrip", Rational(cert0.miscolored), "==", Rational(0),
                        cert0.miscolored == 0);
    Coloring randk{a.k, {}};
    for (int v = 0; v < ten.graph.n; ++v) randk.colors.push_back(1 + rng.below_int(a.k));
    auto [backr, certr] = decode_k_to_3(tri, ten.layout, randk);
    checks.add_rational("tensor-decode-bound", Rational(certr.miscolored), "<=", certr.bound,
                        Rational(certr.miscolored) <= certr.bound);

    // spectral bounds
    for (int q = 6; q <= 10; ++q) {
        double rho = spectral_radius(dmr_operator(q));
        double bound = 4.0 / (q - 1);
        checks.add("spectral-radius-q" + std::to_string(q), fmt_double(rho), "<=",
                   fmt_double(bound) + " + 1e-9", rho <= bound + 1e-9);
    }
    {
        auto op = dmr_operator(6);
        double worst = 0;
        for (int x = 0; x < op.q; ++x)
            for (int y = 0; y < op.q; ++y) {
                double two = 0;
                for (int mid = 0; mid < op.q; ++mid) two += op.at(x, mid) * op.at(mid, y);
                worst = std::max(worst,
                                 std::abs(two - tsquare_closed_form(6, x % 6, x / 6, y % 6, y / 6)));
            }
        checks.add("tsquare-match", fmt_double(worst), "<=", "1e-12", worst <= 1e-12);
    }

    // fourier machinery on random tables
    {
        double worst_inf = 0, worst_par = 0;
        auto basis = fourier_basis(3);
        for (int it = 0; it < 10; ++it) {
            int N = 1 + rng.below_int(3);
            auto f = TabulatedFunction::zeros(3, N, 2);
            for (auto& v : f.values) v = rng.unit() * 2 - 1;
            auto rep = influences(f, 1);
            for (int i = 0; i < N; ++i)
                worst_inf = std::max(worst_inf,
                                     std::abs(rep.total_fourier[i] - rep.total_variance[i]));
            auto co = fourier_coefficients(f, basis);
            double energy = 0;
            for (double v : co.values) energy += v * v;
            worst_par = std::max(worst_par, std::abs(energy - norm_squared(f)));
        }
        checks.add("influence-routes", fmt_double(worst_inf), "<=", "1e-10", worst_inf <= 1e-10);
        checks.add("parseval", fmt_double(worst_par), "<=", "1e-10", worst_par <= 1e-10);

        int violations = 0;
        for (int it = 0; it < 20; ++it) {
            auto f = TabulatedFunction::zeros(3, 4, 1);
            for (auto& v : f.values) v = rng.unit() * 2 - 1;
            auto res = check_claim_infrel(f, 1 + static_cast<int>(it % 2), 1);
            if (!res.holds) ++violations;
        }
        checks.add("regroup-claim", std::to_string(violations), "==", "0", violations == 0);
    }

    // planted verifier run
    {
        auto gen = gen_label_cover(a.seed, 1, 2, 2, 1, true);
        auto proof = long_code_proof(gen.instance, *gen.planted, 4);
        auto acc = acceptance_probability(gen.instance, proof);
        checks.add_rational("pcp-completeness", acc, "==", Rational(1), acc == 1);
        auto decp = influence_decode(gen.instance, proof);
        checks.add_rational("pcp-decode-value", decp.value, "==", Rational(1), decp.value == 1);
    }

    Json report{{"schema", "mkcs.pipeline.v1"},
                {"seed", a.seed},
                {"k", a.k},
                {"checks", checks.rows},
                {"pass", checks.all_pass}};
    if (a.timing) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        report["elapsed_ms"] = ms;
    }
    if (!a.out.empty()) save_json(fs::path(a.out) / "pipeline_report.json", report);
    emit_report(report, a.format);
    if (!checks.all_pass) throw LemmaFailure("pipeline check failed");
}

void add_format_flag(CLI::App* cmd, std::string& fmt) {
    cmd->add_option("--format", fmt, "report format")->check(CLI::IsMember({"json", "tsv"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"max k-colorable subgraph reduction toolkit"};
    app.require_subcommand(1);

    CspGenArgs csp_gen_args;
    CspSolveArgs csp_solve_args;
    Reduce3Args r3_args;
    ReduceKArgs rk_args;
    PadArgs pad_args;
    UnweightArgs uw_args;
    SpectralArgs sp_args;
    PcpGenArgs pg_args;
    PcpSimArgs ps_args;
    VerifyArgs vf_args;

    auto* csp = app.add_subcommand("csp", "constraint instances");
    csp->require_subcommand(1);
    auto* cg = csp->add_subcommand("gen", "generate an instance");
    cg->add_option("--seed", csp_gen_args.seed);
    cg->add_option("--nx", csp_gen_args.nx);
    cg->add_option("--ny", csp_gen_args.ny);
    cg->add_option("--nz", csp_gen_args.nz);
    cg->add_option("--m", csp_gen_args.m);
    cg->add_flag("--random", csp_gen_args.random, "skip the planted assignment");
    cg->add_option("--out", csp_gen_args.out);
    add_format_flag(cg, csp_gen_args.format);
    cg->callback([&] { run_csp_gen(csp_gen_args); });

    auto* cs = csp->add_subcommand("solve", "exact maximum satisfied count");
    cs->add_option("instance", csp_solve_args.instance)->required();
    cs->add_option("--budget", csp_solve_args.budget);
    add_format_flag(cs, csp_solve_args.format);
    cs->callback([&] { run_csp_solve(csp_solve_args); });

    auto* red = app.add_subcommand("reduce", "graph reductions");
    red->require_subcommand(1);
    auto* r3 = red->add_subcommand("3color", "constraint instance to weighted graph");
    r3->add_option("instance", r3_args.instance)->required();
    r3->add_option("--out", r3_args.out);
    add_format_flag(r3, r3_args.format);
    r3->callback([&] { run_reduce_3color(r3_args); });

    auto* rk = red->add_subcommand("kcolor", "tensor lift of a unit graph");
    rk->add_option("graph", rk_args.graph)->required();
    rk->add_option("--k", rk_args.k);
    rk->add_option("--out", rk_args.out);
    add_format_flag(rk, rk_args.format);
    rk->callback([&] { run_reduce_kcolor(rk_args); });

    auto* pd = red->add_subcommand("pad", "append apex vertices for k = K + 1 or K + 2");
    pd->add_option("graph", pad_args.graph)->required();
    pd->add_option("--K", pad_args.K);
    pd->add_option("--k", pad_args.k);
    pd->add_option("--out", pad_args.out);
    add_format_flag(pd, pad_args.format);
    pd->callback([&] { run_reduce_pad(pad_args); });

    auto* uw = red->add_subcommand("unweight", "expand rational weights to parallel unit edges");
    uw->add_option("graph", uw_args.graph)->required();
    uw->add_option("--budget", uw_args.cap);
    uw->add_option("--out", uw_args.out);
    add_format_flag(uw, uw_args.format);
    uw->callback([&] { run_reduce_unweight(uw_args); });

    auto* sp = app.add_subcommand("spectral", "noise operator reports");
    sp->require_subcommand(1);
    auto* spr = sp->add_subcommand("report", "rho(T) against 4/(q-1) for q = 6..Q");
    spr->add_option("--q", sp_args.q);
    add_format_flag(spr, sp_args.format);
    spr->callback([&] { run_spectral_report(sp_args); });

    auto* pcp = app.add_subcommand("pcp", "two-query verifier");
    pcp->require_subcommand(1);
    auto* pg = pcp->add_subcommand("gen", "label cover plus long-code proof bundle");
    pg->add_option("--seed", pg_args.seed);
    pg->add_option("--nu", pg_args.nu);
    pg->add_option("--nv", pg_args.nv);
    pg->add_option("--degree", pg_args.degree);
    pg->add_option("--R", pg_args.R);
    pg->add_option("--k", pg_args.k);
    pg->add_flag("--random", pg_args.random, "random tables instead of a planted proof");
    pg->add_option("--out", pg_args.out);
    add_format_flag(pg, pg_args.format);
    pg->callback([&] { run_pcp_gen(pg_args); });

    auto* ps = pcp->add_subcommand("simulate", "exact acceptance and influence decoding");
    ps->add_option("--proof", ps_args.proof)->required();
    ps->add_option("--R", ps_args.R);
    ps->add_option("--k", ps_args.k);
    ps->add_option("--budget", ps_args.budget);
    ps->add_option("--t", ps_args.t);
    ps->add_option("--delta", ps_args.delta);
    add_format_flag(ps, ps_args.format);
    ps->callback([&] { run_pcp_simulate(ps_args); });

    auto* vf = app.add_subcommand("verify", "end-to-end checks");
    vf->require_subcommand(1);
    auto* vp = vf->add_subcommand("pipeline", "generate, reduce, solve, decode, check bounds");
    vp->add_option("--seed", vf_args.seed);
    vp->add_option("--k", vf_args.k);
    vp->add_option("--budget", vf_args.budget);
    vp->add_option("--out", vf_args.out);
    vp->add_flag("--timing", vf_args.timing, "include elapsed time in the report");
    add_format_flag(vp, vf_args.format);
    vp->callback([&] { run_verify_pipeline(vf_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const BudgetError& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 2;
    } catch (const LemmaFailure& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 3;
    } catch (const std::logic_error& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
