#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "nlc/io.hpp"
#include "nlc/nlc.hpp"

using namespace nlc;
using nlc::io::Json;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::invalid_argument;
}

} // namespace

TEST(Instance, RoundTripIsByteIdentical)
{
    for (std::size_t k = 1; k <= 3; ++k) {
        auto cg = build(6, k, standard_supplier());
        auto text = io::dump(io::to_json(cg));
        auto back = io::instance_from_json(io::parse(text));
        EXPECT_EQ(io::dump(io::to_json(back)), text);
        EXPECT_EQ(back.graph, cg.graph);
        EXPECT_EQ(back.level, k);
        EXPECT_TRUE(verify_constructed(back).all_pass());
    }
}

TEST(Instance, KeyOrderIsStable)
{
    auto j = io::to_json(build(3, 3, standard_supplier()));
    std::vector<std::string> keys;
    for (auto& [k, v] : j.items())
        keys.push_back(k);
    EXPECT_EQ(keys,
        (std::vector<std::string> { "format", "version", "level", "girth_target", "supplier", "vertex_count", "edges",
            "independent_set", "nu", "copies", "mu", "hypergraph", "child" }));
    EXPECT_EQ(j["child"]["level"], 2);
    EXPECT_TRUE(j["child"]["child"]["child"].is_null());
}

TEST(Instance, RejectsMalformedDocuments)
{
    auto good = io::to_json(build(3, 3, standard_supplier()));

    EXPECT_EQ(code_of([] { io::parse("{ not json"); }), ErrorCode::parse_error);

    auto wrong_format = good;
    wrong_format["format"] = "nlc-hypergraph";
    EXPECT_EQ(code_of([&] { io::instance_from_json(wrong_format); }), ErrorCode::parse_error);

    auto newer = good;
    newer["version"] = 99;
    EXPECT_EQ(code_of([&] { io::instance_from_json(newer); }), ErrorCode::parse_error);

    auto missing = good;
    missing.erase("mu");
    EXPECT_EQ(code_of([&] { io::instance_from_json(missing); }), ErrorCode::parse_error);

    auto bad_edge = good;
    bad_edge["edges"][0] = Json::array({ 3, 3, 0 });
    EXPECT_EQ(code_of([&] { io::instance_from_json(bad_edge); }), ErrorCode::parse_error);

    auto out_of_range = good;
    out_of_range["edges"][0] = Json::array({ 0, 999, 0 });
    EXPECT_EQ(code_of([&] { io::instance_from_json(out_of_range); }), ErrorCode::parse_error);

    auto wrong_type = good;
    wrong_type["level"] = "three";
    EXPECT_EQ(code_of([&] { io::instance_from_json(wrong_type); }), ErrorCode::parse_error);

    auto orphan = good;
    orphan["child"] = nullptr;
    EXPECT_EQ(code_of([&] { io::instance_from_json(orphan); }), ErrorCode::parse_error);

    auto bad_mu = good;
    bad_mu["mu"][0] = 77;
    EXPECT_EQ(code_of([&] { io::instance_from_json(bad_mu); }), ErrorCode::parse_error);
}

TEST(Instance, CorruptedColourLoadsButFailsVerification)
{
    auto j = io::to_json(build(3, 3, standard_supplier()));
    for (auto& row : j["edges"])
        if (row[2] != 0) {
            row[2] = 9;
            break;
        }
    auto cg = io::instance_from_json(j);
    EXPECT_EQ(verify_constructed(cg).find(Check::no_lonely_colour)->verdict, Verdict::fail);
}

TEST(HypergraphDocument, RoundTrip)
{
    auto slice = build_slice({ 2, 4, 3 });
    io::HypergraphDocument doc { slice.hypergraph, slice.labelling, certify_tranquil(slice.hypergraph, slice.labelling),
        "enumeration", Json { { "kind", "slice" }, { "d", 2 }, { "n", 4 }, { "r_max", 3 } } };
    auto text = io::dump(io::to_json(doc));
    auto back = io::hypergraph_document_from_json(io::parse(text));
    EXPECT_EQ(back.hypergraph, slice.hypergraph);
    EXPECT_EQ(back.labelling, slice.labelling);
    ASSERT_TRUE(back.certificate);
    EXPECT_TRUE(back.certificate->tranquil());
    EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(HypergraphDocument, CounterexampleSurvivesRoundTrip)
{
    Hypergraph berge_triangle(7, 3, { { 1, 2, 3 }, { 2, 5, 6 }, { 3, 4, 5 } });
    auto bridged = LabellingFamily::from_positions(berge_triangle, { { 3, 2, 1 }, { 1, 2, 3 }, { 3, 2, 1 } });
    auto cert = certify_tranquil(berge_triangle, bridged);
    ASSERT_FALSE(cert.tranquil());
    io::HypergraphDocument doc { berge_triangle, bridged, cert, "enumeration", {} };
    auto j = io::to_json(doc);
    EXPECT_FALSE(j["certificate"]["tranquil"].get<bool>());
    auto back = io::hypergraph_document_from_json(io::parse(io::dump(j)));
    ASSERT_TRUE(back.certificate && back.certificate->counterexample);
    EXPECT_EQ(back.certificate->counterexample->walk, cert.counterexample->walk);
    EXPECT_TRUE(bridge_in_projection(back.certificate->counterexample->walk, back.labelling, 3));

    auto lying = j;
    lying["certificate"]["tranquil"] = true;
    EXPECT_EQ(code_of([&] { io::hypergraph_document_from_json(lying); }), ErrorCode::parse_error);

    auto unsorted = j;
    unsorted["edges"][0] = Json::array({ 3, 2, 1 });
    EXPECT_EQ(code_of([&] { io::hypergraph_document_from_json(unsorted); }), ErrorCode::parse_error);

    auto bad_labels = j;
    bad_labels["labelling"][0] = Json::array({ 1, 1, 2 });
    EXPECT_EQ(code_of([&] { io::hypergraph_document_from_json(bad_labels); }), ErrorCode::parse_error);
}

TEST(Report, Shape)
{
    auto j = io::to_json(verify_constructed(build(3, 3, standard_supplier())));
    EXPECT_EQ(j["format"], "nlc-report");
    ASSERT_EQ(j["checks"].size(), 6u);
    for (const auto& c : j["checks"])
        EXPECT_EQ(c["verdict"], "PASS");
}

TEST(Export, DotAndGraphml)
{
    auto cg = build(3, 3, standard_supplier());
    auto dot = io::to_dot(cg.graph, cg.colouring);
    EXPECT_EQ(dot.rfind("graph G {", 0), 0u);
    EXPECT_EQ(count_of(dot, " -- "), 9u);
    EXPECT_EQ(count_of(dot, ";\n") - count_of(dot, " -- "), 9u);
    std::set<std::string> classes;
    for (Colour c = 0; c < 8; ++c)
        if (count_of(dot, "colour=" + std::to_string(c) + ",") > 0)
            classes.insert(std::to_string(c));
    EXPECT_EQ(classes.size(), 4u);

    auto xml = io::to_graphml(cg.graph, cg.colouring);
    EXPECT_EQ(count_of(xml, "<node "), 9u);
    EXPECT_EQ(count_of(xml, "<edge "), 9u);

    auto base = base_graph(3);
    auto single = io::to_dot(base.graph, base.colouring);
    EXPECT_EQ(single, "graph G {\n  0;\n}\n");
}

TEST(Files, AtomicWriteAndRead)
{
    auto dir = std::filesystem::temp_directory_path() / "nlc_io_test";
    std::filesystem::create_directories(dir);
    auto path = dir / "doc.json";
    io::write_atomic(path, "first\n");
    io::write_atomic(path, "second\n");
    EXPECT_EQ(io::read_file(path), "second\n");
    auto tmp = path;
    tmp += ".tmp";
    EXPECT_FALSE(std::filesystem::exists(tmp));
    EXPECT_THROW(io::read_file(dir / "absent.json"), std::ios_base::failure);
    std::filesystem::remove_all(dir);
}
