#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlc/error.hpp"
#include "nlc/graph.hpp"
#include "nlc/hypergraph.hpp"
#include "nlc/tranquil.hpp"
#include "nlc/tutte.hpp"

namespace nlc::io {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// ------------------------------------------------------------- helpers

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

inline const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        parse_fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* key)
{
    try {
        return field(j, key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        parse_fail(std::string("field '") + key + "': " + e.what());
    }
}

inline void expect_format(const Json& j, const char* format)
{
    if (get_as<std::string>(j, "format") != format)
        parse_fail(std::string("expected format '") + format + "'");
    if (get_as<int>(j, "version") != schema_version)
        parse_fail("unsupported schema version");
}

// Domain errors raised while rebuilding objects become parse errors.
template <typename F>
auto rebuild(F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::parse_error)
            throw;
        parse_fail(e.what());
    } catch (const nlohmann::json::exception& e) {
        parse_fail(e.what());
    }
}

inline Json walk_to_json(const ClosedWalk& w) { return Json { { "vertices", w.vertices }, { "edges", w.edges } }; }

inline ClosedWalk walk_from_json(const Json& j)
{
    return { get_as<std::vector<Vertex>>(j, "vertices"), get_as<std::vector<EdgeId>>(j, "edges") };
}

// ------------------------------------------------------------ hypergraphs

/// Labels are positional: labels[f][i] belongs to the i-th smallest vertex of
/// hyperedge f.
inline Json labelling_to_json(const Hypergraph& h, const LabellingFamily& lam)
{
    Json out = Json::array();
    for (EdgeId f = 0; f < h.edge_count(); ++f) {
        Json row = Json::array();
        for (auto v : h.edge(f))
            row.push_back(*lam.label(f, v));
        out.push_back(std::move(row));
    }
    return out;
}

/// method is "enumeration" (complete walk enumeration) or "cuts".
inline Json certificate_to_json(const TranquilityCertificate& cert, const std::string& method = "enumeration")
{
    Json j;
    j["method"] = method;
    j["tranquil"] = cert.tranquil();
    j["walk_count"] = cert.walk_count;
    j["max_walk_length"] = cert.max_walk_length;
    if (cert.counterexample) {
        const auto& cx = *cert.counterexample;
        j["counterexample"] = Json { { "walk", walk_to_json(cx.walk) }, { "bridge_step", cx.bridge_step },
            { "bridge", Json::array({ cx.from, cx.to }) } };
    } else {
        j["counterexample"] = nullptr;
    }
    return j;
}

inline TranquilityCertificate certificate_from_json(const Json& j)
{
    TranquilityCertificate cert;
    cert.walk_count = get_as<std::size_t>(j, "walk_count");
    cert.max_walk_length = get_as<std::size_t>(j, "max_walk_length");
    const auto& cx = field(j, "counterexample");
    if (!cx.is_null()) {
        auto bridge = get_as<std::vector<Label>>(cx, "bridge");
        if (bridge.size() != 2)
            parse_fail("bridge must have two labels");
        cert.counterexample = TranquilityCounterexample { walk_from_json(field(cx, "walk")),
            get_as<EdgeId>(cx, "bridge_step"), bridge[0], bridge[1] };
    }
    if (get_as<bool>(j, "tranquil") != cert.tranquil())
        parse_fail("certificate verdict disagrees with counterexample");
    return cert;
}

struct HypergraphDocument {
    Hypergraph hypergraph;
    LabellingFamily labelling;
    std::optional<TranquilityCertificate> certificate;
    std::string certificate_method = "enumeration";
    Json source; // free-form provenance, kept verbatim
};

inline Json hypergraph_body(const Hypergraph& h, const LabellingFamily& lam)
{
    Json j;
    j["vertex_count"] = h.vertex_count();
    j["uniformity"] = h.uniformity();
    j["edges"] = h.edges();
    j["labelling"] = labelling_to_json(h, lam);
    return j;
}

inline Json to_json(const HypergraphDocument& doc)
{
    Json j;
    j["format"] = "nlc-hypergraph";
    j["version"] = schema_version;
    j["source"] = doc.source.is_null() ? Json::object() : doc.source;
    auto body = hypergraph_body(doc.hypergraph, doc.labelling);
    for (auto& [k, v] : body.items())
        j[k] = std::move(v);
    j["certificate"] = doc.certificate ? certificate_to_json(*doc.certificate, doc.certificate_method) : Json(nullptr);
    return j;
}

inline std::pair<Hypergraph, LabellingFamily> hypergraph_from_body(const Json& j)
{
    return rebuild([&] {
        Hypergraph h(get_as<std::size_t>(j, "vertex_count"), get_as<std::size_t>(j, "uniformity"),
            get_as<std::vector<std::vector<Vertex>>>(j, "edges"));
        for (EdgeId f = 0; f < h.edge_count(); ++f)
            if (!std::is_sorted(field(j, "edges")[f].begin(), field(j, "edges")[f].end()))
                parse_fail("hyperedge vertices must be sorted");
        auto lam = LabellingFamily::from_positions(h, get_as<std::vector<std::vector<Label>>>(j, "labelling"));
        return std::pair { std::move(h), std::move(lam) };
    });
}

inline HypergraphDocument hypergraph_document_from_json(const Json& j)
{
    expect_format(j, "nlc-hypergraph");
    auto [h, lam] = hypergraph_from_body(j);
    HypergraphDocument doc { std::move(h), std::move(lam), std::nullopt, "enumeration", field(j, "source") };
    const auto& cert = field(j, "certificate");
    if (!cert.is_null()) {
        doc.certificate = rebuild([&] { return certificate_from_json(cert); });
        doc.certificate_method = get_as<std::string>(cert, "method");
    }
    return doc;
}

// -------------------------------------------------------------- instances

inline Json instance_body(const ConstructedGraph& cg)
{
    Json j;
    j["level"] = cg.level;
    j["girth_target"] = cg.girth_target;
    j["supplier"] = cg.supplier;
    j["vertex_count"] = cg.vertex_count();
    Json edges = Json::array();
    for (EdgeId e = 0; e < cg.graph.edge_count(); ++e) {
        const auto& edge = cg.graph.edge(e);
        edges.push_back(Json::array({ edge.u, edge.v, cg.colouring[e] }));
    }
    j["edges"] = std::move(edges);
    j["independent_set"] = cg.independent_set;
    j["nu"] = cg.nu;
    j["copies"] = cg.copies;
    j["mu"] = cg.mu;
    j["hypergraph"] = cg.hypergraph ? hypergraph_body(*cg.hypergraph, *cg.labelling) : Json(nullptr);
    j["child"] = cg.child ? instance_body(*cg.child) : Json(nullptr);
    return j;
}

/// Canonical document for a constructed graph with its whole level chain.
inline Json to_json(const ConstructedGraph& cg)
{
    Json j;
    j["format"] = "nlc-instance";
    j["version"] = schema_version;
    auto body = instance_body(cg);
    for (auto& [k, v] : body.items())
        j[k] = std::move(v);
    return j;
}

inline ConstructedGraph instance_from_body(const Json& j)
{
    ConstructedGraph cg;
    cg.level = get_as<std::size_t>(j, "level");
    cg.girth_target = get_as<std::size_t>(j, "girth_target");
    cg.supplier = get_as<std::string>(j, "supplier");
    auto n = get_as<std::size_t>(j, "vertex_count");
    auto rows = get_as<std::vector<std::vector<std::uint64_t>>>(j, "edges");
    std::vector<Edge> edges;
    std::vector<Colour> colours;
    for (const auto& row : rows) {
        if (row.size() != 3)
            parse_fail("edge rows are [u, v, colour]");
        if (row[0] >= row[1])
            parse_fail("edge rows must have u < v");
        edges.push_back({ static_cast<Vertex>(row[0]), static_cast<Vertex>(row[1]) });
        colours.push_back(static_cast<Colour>(row[2]));
    }
    if (!std::is_sorted(edges.begin(), edges.end()))
        parse_fail("edges must be sorted");
    cg.graph = rebuild([&] { return Graph(n, edges); });
    cg.colouring = EdgeColouring(std::move(colours));
    cg.independent_set = get_as<std::vector<Vertex>>(j, "independent_set");
    cg.nu = get_as<std::vector<Vertex>>(j, "nu");
    cg.copies = get_as<std::vector<std::vector<Vertex>>>(j, "copies");
    cg.mu = get_as<std::vector<std::size_t>>(j, "mu");

    const auto& hj = field(j, "hypergraph");
    if (!hj.is_null()) {
        auto [h, lam] = hypergraph_from_body(hj);
        cg.hypergraph = std::move(h);
        cg.labelling = std::move(lam);
    }
    const auto& cj = field(j, "child");
    if (!cj.is_null())
        cg.child = std::make_shared<const ConstructedGraph>(instance_from_body(cj));

    // Structural consistency; the mathematical properties are left to verify.
    auto within = [n](Vertex v) { return v < n; };
    if (!std::all_of(cg.independent_set.begin(), cg.independent_set.end(), within))
        parse_fail("independent set vertex out of range");
    for (const auto& block : cg.copies)
        if (!std::all_of(block.begin(), block.end(), within))
            parse_fail("copy vertex out of range");
    if (cg.nu.size() != cg.independent_set.size())
        parse_fail("nu must cover the independent set");
    if (cg.mu.size() != cg.copies.size())
        parse_fail("mu must cover every copy");
    if (cg.hypergraph) {
        if (cg.hypergraph->vertex_count() != cg.nu.size() || cg.hypergraph->edge_count() != cg.mu.size())
            parse_fail("hypergraph size disagrees with nu / mu");
        for (auto v : cg.nu)
            if (v >= cg.hypergraph->vertex_count())
                parse_fail("nu maps outside the hypergraph");
        for (auto c : cg.mu)
            if (c >= cg.copies.size())
                parse_fail("mu maps outside the copies");
    }
    if (cg.level > 1 && !cg.child)
        parse_fail("missing child level");
    return cg;
}

inline ConstructedGraph instance_from_json(const Json& j)
{
    expect_format(j, "nlc-instance");
    return instance_from_body(j);
}

inline Json to_json(const VerificationReport& report)
{
    Json j;
    j["format"] = "nlc-report";
    j["version"] = schema_version;
    Json checks = Json::array();
    for (const auto& o : report.outcomes) {
        Json c;
        c["check"] = to_string(o.check);
        c["verdict"] = to_string(o.verdict);
        c["detail"] = o.detail;
        c["value"] = o.value ? Json(*o.value) : Json(nullptr);
        c["witness_cycle"] = o.witness_cycle ? Json(*o.witness_cycle) : Json(nullptr);
        c["colour"] = o.colour ? Json(*o.colour) : Json(nullptr);
        c["vertex"] = o.vertex ? Json(*o.vertex) : Json(nullptr);
        checks.push_back(std::move(c));
    }
    j["checks"] = std::move(checks);
    return j;
}

// ----------------------------------------------------------- text output

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::string to_dot(const Graph& g, const EdgeColouring& c)
{
    std::ostringstream out;
    out << "graph G {\n";
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        out << "  " << v << ";\n";
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edge(e);
        out << "  " << edge.u << " -- " << edge.v << " [colour=" << c[e] << ", label=\"" << c[e] << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

inline std::string to_graphml(const Graph& g, const EdgeColouring& c)
{
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"colour\" for=\"edge\" attr.name=\"colour\" attr.type=\"int\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        out << "    <node id=\"n" << v << "\"/>\n";
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edge(e);
        out << "    <edge id=\"e" << e << "\" source=\"n" << edge.u << "\" target=\"n" << edge.v << "\">"
            << "<data key=\"colour\">" << c[e] << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

// ------------------------------------------------------------------ files

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Json parse(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        parse_fail(e.what());
    }
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::ios_base::failure("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out)
            throw std::ios_base::failure("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::ios_base::failure("cannot rename onto " + path.string());
    }
}

} // namespace nlc::io
