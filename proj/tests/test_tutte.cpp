#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"

using namespace nlc;

namespace {

std::shared_ptr<const ConstructedGraph> share(ConstructedGraph cg) { return std::make_shared<const ConstructedGraph>(std::move(cg)); }

// A bare level carrying an arbitrary graph, used as a child in fixtures.
std::shared_ptr<const ConstructedGraph> bare_child(Graph g)
{
    ConstructedGraph cg;
    cg.colouring = EdgeColouring(std::vector<Colour>(g.edge_count(), 0));
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        cg.colouring.set(e, static_cast<Colour>(e));
    cg.graph = std::move(g);
    cg.level = 2;
    cg.girth_target = 3;
    return share(std::move(cg));
}

Graph complete(std::size_t n)
{
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            edges.push_back({ u, v });
    return Graph(n, edges);
}

HypergraphSupplier fixed_level3(SuppliedHypergraph s)
{
    return override_supplier(2, std::move(s), standard_supplier());
}

std::map<Colour, std::size_t> colour_histogram(const EdgeColouring& c)
{
    std::map<Colour, std::size_t> h;
    for (std::size_t e = 0; e < c.size(); ++e)
        ++h[c[e]];
    return h;
}

ConstructedGraph c9() { return build(3, 3, standard_supplier()); }

} // namespace

TEST(Base, SingleVertex)
{
    for (std::size_t g : { 3u, 100u }) {
        auto b = base_graph(g);
        EXPECT_EQ(b.vertex_count(), 1u);
        EXPECT_EQ(b.graph.edge_count(), 0u);
        EXPECT_EQ(b.level, 1u);
        EXPECT_EQ(chromatic_number(b.graph), 1u);
    }
    EXPECT_THROW(base_graph(0), Error);
}

TEST(Extend, SingletonGivesK2)
{
    auto s = singleton_hypergraph();
    auto k2 = extend(base_graph(3), s.hypergraph, s.labelling);
    EXPECT_EQ(k2.vertex_count(), 2u);
    ASSERT_EQ(k2.graph.edge_count(), 1u);
    EXPECT_EQ(k2.colouring[0], 0u);
    EXPECT_EQ(k2.level, 2u);
    EXPECT_EQ(k2.independent_set, std::vector<Vertex> { 0 });
    EXPECT_EQ(k2.copies, (std::vector<std::vector<Vertex>> { { 1 } }));
}

TEST(Extend, TriangleGivesC9)
{
    auto s = singleton_hypergraph();
    auto k2 = extend(base_graph(3), s.hypergraph, s.labelling);
    auto t = cycle_hypergraph(3);
    auto g = extend(k2, t.hypergraph, t.labelling);
    EXPECT_EQ(g.vertex_count(), 9u);
    EXPECT_EQ(g.graph.edge_count(), 9u);
    for (Vertex v = 0; v < 9; ++v)
        EXPECT_EQ(g.graph.degree(v), 2u);
    auto cycles = enumerate_cycles(g.graph).cycles;
    ASSERT_EQ(cycles.size(), 1u);
    EXPECT_EQ(cycles[0].size(), 9u);
    EXPECT_EQ(colour_histogram(g.colouring), (std::map<Colour, std::size_t> { { 0, 3 }, { 1, 2 }, { 2, 2 }, { 3, 2 } }));
}

TEST(Extend, Errors)
{
    auto t = cycle_hypergraph(3);
    try {
        extend(base_graph(3), t.hypergraph, t.labelling);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::uniformity_mismatch);
    }
    Hypergraph berge_triangle(7, 3, { { 1, 2, 3 }, { 2, 5, 6 }, { 3, 4, 5 } });
    auto bridged = LabellingFamily::from_positions(berge_triangle, { { 3, 2, 1 }, { 1, 2, 3 }, { 3, 2, 1 } });
    try {
        extend(bare_child(Graph(3, { { 0, 1 }, { 1, 2 } })), berge_triangle, bridged);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_tranquil);
    }
}

TEST(Extend, MatchingFollowsLabels)
{
    Hypergraph berge_triangle(7, 3, { { 1, 2, 3 }, { 2, 5, 6 }, { 3, 4, 5 } });
    auto lam = LabellingFamily::from_positions(berge_triangle, { { 1, 2, 3 }, { 3, 1, 2 }, { 1, 3, 2 } });
    auto child = bare_child(Graph(3, { { 0, 1 }, { 1, 2 } }));
    auto g = extend(child, berge_triangle, lam);
    EXPECT_EQ(g.vertex_count(), 7u + 3u * 3u);
    const auto inherited = child->colouring.colour_count();
    for (EdgeId f = 0; f < 3; ++f)
        for (Vertex i = 0; i < 3; ++i) {
            auto t = *lam.vertex_with_label(f, i + 1);
            auto copy_vertex = g.copies[g.mu[f]][i];
            auto e = g.graph.edge_between(t, copy_vertex);
            ASSERT_TRUE(e);
            EXPECT_EQ(g.colouring[*e], inherited + f);
        }
    // T is independent.
    for (auto u : g.independent_set)
        for (auto v : g.independent_set)
            EXPECT_FALSE(g.graph.adjacent(u, v));
    EXPECT_EQ(g.colouring.colour_count(), inherited + 3);
    EXPECT_TRUE(is_proper_edge_colouring(g.graph, g.colouring).proper);
}

TEST(Build, SmallLevels)
{
    EXPECT_EQ(build(3, 1, standard_supplier()).vertex_count(), 1u);
    auto k2 = build(3, 2, standard_supplier());
    EXPECT_EQ(k2.vertex_count(), 2u);
    EXPECT_EQ(k2.graph.edge_count(), 1u);
    auto g = c9();
    EXPECT_EQ(g.vertex_count(), 9u);
    EXPECT_EQ(girth(g.graph), Extended(9));
    EXPECT_EQ(chromatic_number(g.graph), 3u);
    EXPECT_EQ(oracle::girth(g.graph), 9u);
    EXPECT_EQ(oracle::chromatic_number(g.graph), 3u);
    ASSERT_TRUE(g.child);
    EXPECT_EQ(g.child->vertex_count(), 2u);
    EXPECT_EQ(g.supplier, "cycle:3");
}

TEST(Build, SupplierFailures)
{
    try {
        build(3, 6, standard_supplier());
        FAIL();
    } catch (const SupplierFailure& e) {
        EXPECT_EQ(e.code(), ErrorCode::supplier_failure);
        EXPECT_EQ(e.level(), 4u);
    }
    HypergraphSupplier none = [](const SupplyRequest&) { return std::optional<SuppliedHypergraph> {}; };
    try {
        build(3, 2, none);
        FAIL();
    } catch (const SupplierFailure& e) {
        EXPECT_EQ(e.level(), 2u);
    }
    // A 2-uniform even cycle is 2-colourable, so it cannot serve level 3.
    Hypergraph c4(4, 2, { { 0, 1 }, { 1, 2 }, { 2, 3 }, { 0, 3 } });
    try {
        build(3, 3, fixed_level3({ c4, LabellingFamily::ascending(c4), "c4" }));
        FAIL();
    } catch (const SupplierFailure& e) {
        EXPECT_EQ(e.level(), 3u);
        EXPECT_NE(e.requirement().find("chromatic"), std::string::npos);
    }
    // Girth requirement ceil(12 / 3) = 4 rules out a triangle.
    try {
        build(12, 3, fixed_level3(cycle_hypergraph(3)));
        FAIL();
    } catch (const SupplierFailure& e) {
        EXPECT_NE(e.requirement().find("girth"), std::string::npos);
    }
}

TEST(Build, DefaultCycleLengthTracksGirth)
{
    for (std::size_t g : { 3u, 9u, 10u, 13u, 21u }) {
        auto cg = build(g, 3, standard_supplier());
        auto m = std::max<std::size_t>(3, (g + 2) / 3);
        if (m % 2 == 0)
            ++m;
        EXPECT_EQ(cg.hypergraph->vertex_count(), m);
        EXPECT_GE(girth(cg.graph), Extended(g));
        EXPECT_EQ(chromatic_number(cg.graph), 3u);
    }
}

TEST(InducedWalk, C9)
{
    auto g = c9();
    auto cycles = enumerate_cycles(g.graph).cycles;
    auto traced = induced_walk(g, cycles[0]);
    ASSERT_TRUE(std::holds_alternative<InducedWalk>(traced));
    const auto& iw = std::get<InducedWalk>(traced);
    EXPECT_EQ(iw.walk.length(), 3u);
    EXPECT_EQ(iw.segments.size(), 3u);
    EXPECT_FALSE(iw.violation);
    EXPECT_FALSE(walk_violation(*g.hypergraph, iw.walk));
}

TEST(InducedWalk, WithinCopyAndMalformed)
{
    auto child = bare_child(complete(3));
    Hypergraph h(3, 3, { { 0, 1, 2 } });
    auto g = extend(child, h, LabellingFamily::ascending(h));
    auto copy = g.copies[0];
    auto traced = induced_walk(g, std::vector<Vertex> { copy[0], copy[1], copy[2] });
    ASSERT_TRUE(std::holds_alternative<WithinCopy>(traced));
    EXPECT_EQ(std::get<WithinCopy>(traced).copy, 0u);
    try {
        induced_walk(g, std::vector<Vertex> { 0, 1, 2 });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::malformed_cycle);
    }
}

TEST(InducedWalk, RepeatedHyperedgeWalk)
{
    // T vertices a..f = 0..5; hyperedges F1..F5 = 0..4, 4-uniform, child K4.
    Hypergraph h(6, 4,
        {
            { 0, 1, 2, 4 }, // F1 = {a, b, c, e}
            { 1, 2, 3, 4 }, // F2 = {b, c, d, e}
            { 0, 2, 3, 5 }, // F3 = {a, c, d, f}
            { 0, 1, 3, 4 }, // F4 = {a, b, d, e}
            { 1, 2, 4, 5 }, // F5 = {b, c, e, f}
        });
    auto lam = LabellingFamily::ascending(h);
    auto g = assemble(bare_child(complete(4)), h, lam);
    EXPECT_EQ(g.copies.size(), 5u);

    // a F1 b F2 c F3 d F4 e F5 f F3 a
    const std::vector<Vertex> t_walk { 0, 1, 2, 3, 4, 5 };
    const std::vector<EdgeId> f_walk { 0, 1, 2, 3, 4, 2 };
    std::vector<Vertex> cycle;
    for (std::size_t i = 0; i < 6; ++i) {
        auto x = t_walk[i], y = t_walk[(i + 1) % 6];
        auto f = f_walk[i];
        cycle.push_back(x);
        cycle.push_back(g.copies[g.mu[f]][*lam.label(f, x) - 1]);
        cycle.push_back(g.copies[g.mu[f]][*lam.label(f, y) - 1]);
    }
    ASSERT_TRUE(is_cycle_of(g.graph, cycle));
    auto traced = induced_walk(g, cycle);
    ASSERT_TRUE(std::holds_alternative<InducedWalk>(traced));
    const auto& iw = std::get<InducedWalk>(traced);
    EXPECT_EQ(iw.walk.vertices, t_walk);
    EXPECT_EQ(iw.walk.edges, f_walk);
    EXPECT_FALSE(iw.violation);
    ASSERT_EQ(iw.segments.size(), 6u);
    EXPECT_EQ(iw.segments[2].copy, iw.segments[5].copy);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(iw.segments[i].start + 1, *lam.label(f_walk[i], t_walk[i]));
        EXPECT_EQ(iw.segments[i].end + 1, *lam.label(f_walk[i], t_walk[(i + 1) % 6]));
    }

    // Rotating the cycle rotates the walk.
    std::rotate(cycle.begin(), cycle.begin() + 3, cycle.end());
    auto rotated = std::get<InducedWalk>(induced_walk(g, cycle));
    EXPECT_EQ(rotated.walk.vertices.front(), 1u);
    EXPECT_EQ(canonical_form(rotated.walk), canonical_form(iw.walk));
}

TEST(Verify, C9AllPass)
{
    auto g = c9();
    auto report = verify_constructed(g);
    ASSERT_EQ(report.outcomes.size(), 6u);
    for (const auto& o : report.outcomes)
        EXPECT_EQ(o.verdict, Verdict::pass) << to_string(o.check) << ": " << o.detail;
    EXPECT_EQ(report.find(Check::girth)->value, "9");
    EXPECT_EQ(report.find(Check::chromatic_number)->value, "3");
}

TEST(Verify, K2PassesVacuously)
{
    auto report = verify_constructed(build(3, 2, standard_supplier()));
    EXPECT_TRUE(report.all_pass());
    EXPECT_EQ(report.find(Check::girth)->value, "INFINITY");
}

TEST(Verify, CorruptedMatchingColourFails)
{
    auto g = c9();
    // Recolour one matching edge (colour >= 1) to a fresh colour.
    for (EdgeId e = 0; e < g.graph.edge_count(); ++e)
        if (g.colouring[e] >= 1) {
            g.colouring.set(e, 4);
            break;
        }
    auto report = verify_constructed(g);
    const auto* nlc = report.find(Check::no_lonely_colour);
    EXPECT_EQ(nlc->verdict, Verdict::fail);
    ASSERT_TRUE(nlc->witness_cycle);
    EXPECT_EQ(lonely_colour_on(g.graph, g.colouring, *nlc->witness_cycle), nlc->colour);
    EXPECT_TRUE(report.find(Check::proper_colouring)->verdict == Verdict::pass);
}

TEST(Verify, CycleCapIsInconclusive)
{
    auto cg = build(3, 3, fixed_level3(*slice_hypergraph({ 2, 4, 3 }, 1, 3, 1)));
    VerifyOptions options;
    options.cycle_cap = 5;
    auto report = verify_constructed(cg, options);
    EXPECT_EQ(report.find(Check::no_lonely_colour)->verdict, Verdict::inconclusive);
    EXPECT_EQ(report.find(Check::walk_certificates)->verdict, Verdict::inconclusive);
    EXPECT_FALSE(report.any(Verdict::fail));
}

TEST(Verify, ThreadsDoNotChangeTheReport)
{
    auto cg = build(3, 3, fixed_level3(*slice_hypergraph({ 2, 4, 3 }, 1, 3, 1)));
    VerifyOptions one;
    one.checks = { Check::walk_certificates };
    VerifyOptions four = one;
    four.threads = 4;
    auto a = verify_constructed(cg, one).outcomes[0];
    auto b = verify_constructed(cg, four).outcomes[0];
    EXPECT_EQ(a.verdict, Verdict::pass);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.value, b.value);
}

TEST(Invariants, LevelThreeMatrix)
{
    struct Case {
        std::size_t g;
        SuppliedHypergraph level3;
    };
    std::vector<Case> cases;
    for (std::size_t g : { 3u, 6u, 9u }) {
        cases.push_back({ g, cycle_hypergraph(3) });
        cases.push_back({ g, *slice_hypergraph({ 2, 3, 2 }, (g + 2) / 3, 3, 1) });
        cases.push_back({ g, *slice_hypergraph({ 2, 4, 3 }, (g + 2) / 3, 3, 2) });
    }
    for (std::size_t g : { 3u, 12u, 15u }) {
        cases.push_back({ g, cycle_hypergraph(5) });
        cases.push_back({ g, cycle_hypergraph(7) });
    }
    for (const auto& c : cases) {
        auto cg = build(c.g, 3, fixed_level3(c.level3));
        const auto& h = *cg.hypergraph;
        const auto& child = *cg.child;
        EXPECT_EQ(cg.vertex_count(), h.vertex_count() + h.edge_count() * child.vertex_count());
        EXPECT_EQ(cg.colouring.colour_count(), child.colouring.colour_count() + h.edge_count());

        auto gh = berge_girth(h);
        auto bound = std::min(gh.times(3), girth(child.graph));
        EXPECT_GE(girth(cg.graph), bound) << c.level3.description;
        EXPECT_GE(girth(cg.graph), Extended(c.g));
        EXPECT_GE(chromatic_number(cg.graph), 3u);

        // Matching colours appear an even number of times on every cycle.
        const auto first_matching = child.colouring.colour_count();
        for (const auto& cycle : enumerate_cycles(cg.graph).cycles) {
            std::map<Colour, std::size_t> count;
            for (auto e : cycle_edges(cg.graph, cycle))
                ++count[cg.colouring[e]];
            for (auto [colour, k] : count)
                if (colour >= first_matching)
                    EXPECT_EQ(k % 2, 0u);
        }
        EXPECT_TRUE(verify_constructed(cg).all_pass()) << c.level3.description;
    }
}
