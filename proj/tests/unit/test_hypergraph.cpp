#include "support.hpp"

#include "repairlab/error.hpp"
#include "repairlab/hypergraph/hypergraph.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <algorithm>

using namespace repairlab;
using hypergraph::ConflictHypergraph;
using support::fact;

namespace {

ConflictHypergraph fixture_graph(const support::Fixture &fx)
{
    return hypergraph::build(fx.data, fx.constraints.as_denials());
}

std::vector<Instance> maximal_independent_sets(const ConflictHypergraph &h)
{
    std::vector<Instance> out;
    std::size_t n = h.vertex_count();
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        hypergraph::VertexSet members(n);
        for (std::size_t i = 0; i < n; ++i)
            members[i] = (mask >> i) & 1U;
        if (h.is_maximal_independent(members))
            out.push_back(h.to_instance(members));
    }
    std::sort(out.begin(), out.end(), [](const Instance &a, const Instance &b) { return a.to_vector() < b.to_vector(); });
    return out;
}

}

TEST(Hypergraph, PersonHasOneConflict)
{
    auto fx = support::load_fixture("person");
    auto h = fixture_graph(fx);
    ASSERT_EQ(h.vertex_count(), 3U);
    ASSERT_EQ(h.edges().size(), 1U);
    EXPECT_EQ(h.edges()[0], (hypergraph::Edge{0, 1}));
    auto green = fact("Person", {sym("Green"), sym("Clarence"), sym("4000 Transit")});
    EXPECT_TRUE(hypergraph::edges_containing(h, green).empty());
    EXPECT_THROW(h.require_id(fact("Person", {sym("x"), sym("y"), sym("z")})), InvalidArgument);

    auto r1 = support::load_instance("person", "repair1", fx.schema);
    auto r2 = support::load_instance("person", "repair2", fx.schema);
    auto cand = support::load_instance("person", "candidate", fx.schema);
    EXPECT_TRUE(hypergraph::is_maximal_independent(h, r1));
    EXPECT_TRUE(hypergraph::is_maximal_independent(h, r2));
    EXPECT_TRUE(hypergraph::is_independent(h, cand));
    EXPECT_FALSE(hypergraph::is_maximal_independent(h, cand));
    EXPECT_FALSE(hypergraph::is_independent(h, fx.data));
}

TEST(Hypergraph, SingletonEdges)
{
    auto fx = support::load_fixture("emp");
    auto h = fixture_graph(fx);
    auto cat = h.require_id(fact("Emp", {sym("cat"), num(250000), sym("cat")}));
    EXPECT_TRUE(h.in_singleton_edge(cat));
    hypergraph::VertexSet none(h.vertex_count());
    EXPECT_TRUE(h.blocked(cat, none));
    auto full = h.greedy_extend(none, {0, 1, 2, 3});
    EXPECT_FALSE(full[cat]);
    EXPECT_TRUE(h.is_maximal_independent(full));
    EXPECT_EQ(h.to_instance(full), (Instance{fact("Emp", {sym("ann"), num(150000), sym("bob")}),
                                             fact("Emp", {sym("dan"), num(90000), sym("bob")})}));
    auto other = h.greedy_extend(none, {1, 0, 2, 3});
    EXPECT_EQ(h.to_instance(other), support::load_instance("emp", "repair1", fx.schema));
}

TEST(Hypergraph, DotAndJsonSnapshots)
{
    auto person = fixture_graph(support::load_fixture("person"));
    EXPECT_EQ(person.to_dot(), "graph conflicts {\n"
                               "  v0 [label=\"Person('Brown', 'Amherst', '115 Klein')\"];\n"
                               "  v1 [label=\"Person('Brown', 'Amherst', '120 Maple')\"];\n"
                               "  v2 [label=\"Person('Green', 'Clarence', '4000 Transit')\"];\n"
                               "  v0 -- v1;\n"
                               "}\n");
    auto json = nlohmann::json::parse(person.to_json());
    EXPECT_EQ(json["vertices"].size(), 3U);
    EXPECT_EQ(json["vertices"][1]["tuple"][2], "120 Maple");
    EXPECT_EQ(json["edges"], nlohmann::json::parse("[[0, 1]]"));
    auto emp = fixture_graph(support::load_fixture("emp"));
    auto dot = emp.to_dot();
    EXPECT_NE(dot.find("e1 [shape=point];\n  e1 -- v2;"), std::string::npos) << dot;
}

TEST(Hypergraph, EdgesAreMinimalViolationsAndMisAreRepairs)
{
    support::Rng rng(11);
    for (int round = 0; round < 300; ++round) {
        auto shape = round % 2 ? support::Shape::Denials : support::Shape::Fds;
        auto g = support::random_problem(rng, shape, 10);
        auto h = hypergraph::build(g.data, g.constraints.as_denials());
        for (const auto &edge : h.edges()) {
            Instance sub;
            for (auto v : edge)
                sub.insert(h.vertex(v));
            ASSERT_FALSE(support::consistent(sub, g.constraints));
        }
        for (std::size_t v = 0; v < h.vertex_count(); ++v)
            for (auto e : h.incident(v))
                ASSERT_TRUE(std::binary_search(h.edges()[e].begin(), h.edges()[e].end(), v));
        ASSERT_EQ(maximal_independent_sets(h), support::powerset_repairs(g.data, g.constraints));
    }
}

TEST(Hypergraph, GreedyExtendIsMaximalForAnyOrder)
{
    support::Rng rng(12);
    for (int round = 0; round < 200; ++round) {
        auto g = support::random_problem(rng, support::Shape::Denials, 12);
        auto h = hypergraph::build(g.data, g.constraints.as_denials());
        std::vector<hypergraph::VertexId> order(h.vertex_count());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        auto members = h.greedy_extend(hypergraph::VertexSet(h.vertex_count()), order);
        ASSERT_TRUE(h.is_maximal_independent(members));
        ASSERT_FALSE(h.addable(members).has_value());
        ASSERT_TRUE(support::consistent(h.to_instance(members), g.constraints));
    }
}

TEST(Hypergraph, MembershipRejectsForeignFacts)
{
    auto fx = support::load_fixture("person");
    auto h = fixture_graph(fx);
    EXPECT_THROW(h.membership(Instance{fact("Person", {sym("a"), sym("b"), sym("c")})}), InvalidArgument);
}
