#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mkcs/csp.hpp"
#include "mkcs/errors.hpp"
#include "mkcs/pcp.hpp"
#include "mkcs/rational.hpp"
#include "mkcs/reduce3.hpp"
#include "mkcs/reducek.hpp"

namespace mkcs {

using Json = nlohmann::json;

// Weights travel as exact "num/den" strings; no floats in files.
inline Json rational_to_json(const Rational& r) { return format_rational(r); }

inline Rational rational_from_json(const Json& j) {
    if (!j.is_string()) throw InputError("expected a rational encoded as a string");
    return parse_rational(j.get<std::string>());
}

namespace detail {

inline const Json& need(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing key: ") + key);
    return *it;
}

inline int need_int(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_number_integer()) throw InputError(std::string("expected integer at: ") + key);
    return v.get<int>();
}

}  // namespace detail

// --- constraint instances ----------------------------------------------

inline Json csp_to_json(const CspInstance& inst) {
    Json cs = Json::array();
    for (const auto& c : inst.constraints)
        cs.push_back({{"x", c.x},
                      {"y", c.y},
                      {"yneg", c.y_negated},
                      {"zk", c.zk},
                      {"zl", c.zl}});
    return Json{{"nx", inst.nx}, {"ny", inst.ny}, {"nz", inst.nz}, {"constraints", cs}};
}

inline CspInstance csp_from_json(const Json& j) {
    CspInstance inst;
    inst.nx = detail::need_int(j, "nx");
    inst.ny = detail::need_int(j, "ny");
    inst.nz = detail::need_int(j, "nz");
    const Json& cs = detail::need(j, "constraints");
    if (!cs.is_array()) throw InputError("constraints must be an array");
    for (const auto& cj : cs) {
        Constraint c;
        c.x = detail::need_int(cj, "x");
        c.y = detail::need_int(cj, "y");
        const Json& neg = detail::need(cj, "yneg");
        if (!neg.is_boolean()) throw InputError("yneg must be a boolean");
        c.y_negated = neg.get<bool>();
        c.zk = detail::need_int(cj, "zk");
        c.zl = detail::need_int(cj, "zl");
        inst.constraints.push_back(c);
    }
    inst.validate();
    return inst;
}

inline Json assignment_to_json(const Assignment& a) {
    Json jx = Json::array(), jy = Json::array(), jz = Json::array();
    for (auto v : a.x) jx.push_back(static_cast<int>(v));
    for (auto v : a.y) jy.push_back(static_cast<int>(v));
    for (auto v : a.z) jz.push_back(static_cast<int>(v));
    return Json{{"x", jx}, {"y", jy}, {"z", jz}};
}

inline Assignment assignment_from_json(const Json& j) {
    Assignment a;
    auto read = [&](const char* key, std::vector<std::uint8_t>& out) {
        const Json& arr = detail::need(j, key);
        if (!arr.is_array()) throw InputError("assignment component must be an array");
        for (const auto& v : arr) {
            if (!v.is_number_integer()) throw InputError("assignment entries must be 0 or 1");
            int b = v.get<int>();
            if (b != 0 && b != 1) throw InputError("assignment entries must be 0 or 1");
            out.push_back(static_cast<std::uint8_t>(b));
        }
    };
    read("x", a.x);
    read("y", a.y);
    read("z", a.z);
    return a;
}

// --- gadget reduction layout --------------------------------------------

inline const char* edge_source_name(EdgeSource s) {
    switch (s) {
        case EdgeSource::GlobalTriangle: return "global-triangle";
        case EdgeSource::LiteralTriangle: return "literal-triangle";
        case EdgeSource::RSpoke: return "r-spoke";
        case EdgeSource::Gadget: return "gadget";
    }
    return "?";
}

inline EdgeSource edge_source_from_name(const std::string& s) {
    if (s == "global-triangle") return EdgeSource::GlobalTriangle;
    if (s == "literal-triangle") return EdgeSource::LiteralTriangle;
    if (s == "r-spoke") return EdgeSource::RSpoke;
    if (s == "gadget") return EdgeSource::Gadget;
    throw InputError("unknown edge source: " + s);
}

inline Json reduce3_layout_to_json(const GadgetLayout& lay,
                                   const std::vector<EdgeProvenance>& prov) {
    Json jd = Json::array();
    for (auto d : lay.delta) jd.push_back(d);
    Json jw = Json::array();
    for (const auto& w : lay.wy) jw.push_back(rational_to_json(w));
    Json jp = Json::array();
    for (const auto& p : prov)
        jp.push_back({{"source", edge_source_name(p.source)}, {"index", p.index}});
    return Json{{"schema", "mkcs.reduce3.v1"}, {"nx", lay.nx},    {"ny", lay.ny},
                {"nz", lay.nz},                {"m", lay.m},      {"delta", jd},
                {"wy", jw},                    {"provenance", jp}};
}

struct Reduce3LayoutFile {
    GadgetLayout layout;
    std::vector<EdgeProvenance> provenance;
};

inline Reduce3LayoutFile reduce3_layout_from_json(const Json& j) {
    Reduce3LayoutFile out;
    out.layout.nx = detail::need_int(j, "nx");
    out.layout.ny = detail::need_int(j, "ny");
    out.layout.nz = detail::need_int(j, "nz");
    out.layout.m = detail::need_int(j, "m");
    for (const auto& d : detail::need(j, "delta")) out.layout.delta.push_back(d.get<long long>());
    for (const auto& w : detail::need(j, "wy")) out.layout.wy.push_back(rational_from_json(w));
    for (const auto& p : detail::need(j, "provenance")) {
        EdgeProvenance ep;
        ep.source = edge_source_from_name(detail::need(p, "source").get<std::string>());
        ep.index = detail::need_int(p, "index");
        out.provenance.push_back(ep);
    }
    if (static_cast<int>(out.layout.delta.size()) != out.layout.node_count())
        throw InputError("delta table size does not match node count");
    if (static_cast<int>(out.layout.wy.size()) != out.layout.ny)
        throw InputError("literal-triangle weight table size mismatch");
    return out;
}

// --- tensor / padding layouts ---------------------------------------------

inline Json tensor_layout_to_json(const TensorLayout& lay) {
    Json jd = Json::array();
    for (auto d : lay.d) jd.push_back(d);
    return Json{{"schema", "mkcs.tensor.v1"}, {"k", lay.k}, {"n", lay.n_src}, {"d", jd}};
}

inline TensorLayout tensor_layout_from_json(const Json& j) {
    TensorLayout lay;
    lay.k = detail::need_int(j, "k");
    lay.n_src = detail::need_int(j, "n");
    for (const auto& d : detail::need(j, "d")) lay.d.push_back(d.get<long long>());
    if (static_cast<int>(lay.d.size()) != lay.n_src)
        throw InputError("degree table size mismatch");
    return lay;
}

inline Json padding_layout_to_json(const PaddingLayout& lay) {
    Json jv = Json::array();
    for (auto v : lay.new_vertices) jv.push_back(v);
    return Json{{"schema", "mkcs.padding.v1"},
                {"K", lay.K},
                {"L", lay.L},
                {"new_vertices", jv},
                {"source_weight", rational_to_json(lay.source_weight)}};
}

inline PaddingLayout padding_layout_from_json(const Json& j) {
    PaddingLayout lay;
    lay.K = detail::need_int(j, "K");
    lay.L = detail::need_int(j, "L");
    for (const auto& v : detail::need(j, "new_vertices")) lay.new_vertices.push_back(v.get<int>());
    lay.source_weight = rational_from_json(detail::need(j, "source_weight"));
    return lay;
}

// --- label cover and proofs -----------------------------------------------

inline Json label_cover_to_json(const LabelCoverInstance& inst) {
    Json je = Json::array();
    for (const auto& e : inst.edges) {
        Json jp = Json::array();
        for (int x : e.pi) jp.push_back(x);
        je.push_back({{"u", e.u}, {"v", e.v}, {"pi", jp}});
    }
    return Json{{"schema", "mkcs.labelcover.v1"},
                {"nu", inst.nu},
                {"nv", inst.nv},
                {"R", inst.R},
                {"edges", je}};
}

inline LabelCoverInstance label_cover_from_json(const Json& j) {
    LabelCoverInstance inst;
    inst.nu = detail::need_int(j, "nu");
    inst.nv = detail::need_int(j, "nv");
    inst.R = detail::need_int(j, "R");
    for (const auto& ej : detail::need(j, "edges")) {
        LabelCoverEdge e;
        e.u = detail::need_int(ej, "u");
        e.v = detail::need_int(ej, "v");
        for (const auto& x : detail::need(ej, "pi")) e.pi.push_back(x.get<int>());
        inst.edges.push_back(std::move(e));
    }
    inst.validate();
    return inst;
}

inline Json labeling_to_json(const Labeling& lab) {
    Json ju = Json::array(), jv = Json::array();
    for (int x : lab.ell_u) ju.push_back(x);
    for (int x : lab.ell_v) jv.push_back(x);
    return Json{{"ell_u", ju}, {"ell_v", jv}};
}

inline Labeling labeling_from_json(const Json& j) {
    Labeling lab;
    for (const auto& x : detail::need(j, "ell_u")) lab.ell_u.push_back(x.get<int>());
    for (const auto& x : detail::need(j, "ell_v")) lab.ell_v.push_back(x.get<int>());
    return lab;
}

// A proof file is self-contained: it embeds the instance it certifies, and
// optionally the planted labeling it was encoded from.
inline Json proof_bundle_to_json(const LabelCoverInstance& inst, const LongCodeProof& proof,
                                 const std::optional<Labeling>& planted = std::nullopt) {
    Json jt = Json::array();
    for (const auto& t : proof.tables) {
        Json row = Json::array();
        for (int c : t) row.push_back(c);
        jt.push_back(std::move(row));
    }
    Json out{{"schema", "mkcs.proof.v1"},
             {"k", proof.k},
             {"R", proof.R},
             {"tables", jt},
             {"instance", label_cover_to_json(inst)}};
    if (planted) out["planted"] = labeling_to_json(*planted);
    return out;
}

struct ProofBundle {
    LabelCoverInstance instance;
    LongCodeProof proof;
    std::optional<Labeling> planted;
};

inline ProofBundle proof_bundle_from_json(const Json& j) {
    ProofBundle b;
    b.instance = label_cover_from_json(detail::need(j, "instance"));
    b.proof.k = detail::need_int(j, "k");
    b.proof.R = detail::need_int(j, "R");
    for (const auto& row : detail::need(j, "tables")) {
        std::vector<int> t;
        for (const auto& c : row) t.push_back(c.get<int>());
        b.proof.tables.push_back(std::move(t));
    }
    b.proof.validate(b.instance);
    if (j.contains("planted")) b.planted = labeling_from_json(j["planted"]);
    return b;
}

}  // namespace mkcs
