#include "support.hpp"

#include "repairlab/error.hpp"
#include "repairlab/oracle/oracle.hpp"
#include "repairlab/textio/textio.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <set>

using namespace repairlab;
using support::fact;

namespace {

std::vector<Instance> sorted(std::vector<Instance> v)
{
    std::sort(v.begin(), v.end(), [](const Instance &a, const Instance &b) { return a.to_vector() < b.to_vector(); });
    return v;
}

}

TEST(Oracle, ExampleFixtures)
{
    for (const char *name : {"person", "employee"}) {
        auto fx = support::load_fixture(name);
        auto set = oracle::enumerate_repairs(fx.data, fx.constraints);
        EXPECT_TRUE(set.exhaustive);
        auto expected = sorted({support::load_instance(name, "repair1", fx.schema),
                                support::load_instance(name, "repair2", fx.schema)});
        EXPECT_EQ(sorted(set.repairs), expected) << name;
    }
    auto fx = support::load_fixture("address");
    auto set = oracle::enumerate_repairs(fx.data, fx.constraints);
    ASSERT_EQ(set.repairs.size(), 1U);
    EXPECT_EQ(set.repairs[0], support::load_instance("address", "repair1", fx.schema));
}

TEST(Oracle, ExponentialFamilyHasTwoToTheN)
{
    for (std::size_t n = 1; n <= 8; ++n) {
        auto b = reductions::gen_exponential_family(n);
        EXPECT_EQ(b.instance.size(), 2 * n);
        auto set = oracle::enumerate_repairs(b.instance, b.constraints, 18);
        EXPECT_EQ(set.repairs.size(), std::size_t{1} << n) << n;
        std::set<std::vector<Fact>> distinct;
        for (const auto &r : set.repairs) {
            EXPECT_EQ(r.size(), n);
            distinct.insert(r.to_vector());
        }
        EXPECT_EQ(distinct.size(), set.repairs.size());
    }
}

TEST(Oracle, CapAndLimit)
{
    auto b = reductions::gen_exponential_family(5);
    EXPECT_THROW(oracle::enumerate_repairs(b.instance, b.constraints, 9), CapExceededError);
    auto limited = oracle::enumerate_repairs(b.instance, b.constraints, 10, 3);
    EXPECT_EQ(limited.repairs.size(), 3U);
    EXPECT_FALSE(limited.exhaustive);
    auto exact = oracle::enumerate_repairs(b.instance, b.constraints, 10, 32);
    EXPECT_EQ(exact.repairs.size(), 32U);

    ::setenv("REPAIRLAB_ORACLE_CAP", "7", 1);
    EXPECT_EQ(oracle::cap_from_environment(), 7U);
    ::setenv("REPAIRLAB_ORACLE_CAP", "zero", 1);
    EXPECT_EQ(oracle::cap_from_environment(), oracle::default_cap);
    ::setenv("REPAIRLAB_ORACLE_CAP", "0", 1);
    EXPECT_EQ(oracle::cap_from_environment(5), 5U);
    ::unsetenv("REPAIRLAB_ORACLE_CAP");
    EXPECT_EQ(oracle::cap_from_environment(), oracle::default_cap);
}

TEST(Oracle, PruneSkipsRepairsContainingCommittedFacts)
{
    auto b = reductions::gen_exponential_family(3);
    auto banned = *b.instance.begin();
    std::size_t seen = 0;
    oracle::for_each_repair(
        b.instance, b.constraints, 18,
        [&](const Instance &r) {
            EXPECT_FALSE(r.contains(banned));
            ++seen;
            return true;
        },
        [&](const Instance &committed) { return committed.contains(banned); });
    EXPECT_EQ(seen, 4U);
}

TEST(Oracle, ExtensionAndCheck)
{
    auto fx = support::load_fixture("employee");
    auto cand = support::load_instance("employee", "candidate", fx.schema);
    auto ext = oracle::oracle_extension(fx.data, cand, fx.constraints);
    ASSERT_TRUE(ext.has_value());
    EXPECT_TRUE(ext->contains(fact("Manager", {num(555555555)})));
    EXPECT_FALSE(oracle::oracle_extension(fx.data, support::load_instance("employee", "repair2", fx.schema),
                                          fx.constraints));
    EXPECT_THROW(oracle::oracle_extension(fx.data, fx.data, fx.constraints), InvalidArgument);
    EXPECT_FALSE(oracle::oracle_repair_check(fx.data, fx.data, fx.constraints));
    EXPECT_TRUE(oracle::oracle_repair_check(fx.data, support::load_instance("employee", "repair1", fx.schema),
                                            fx.constraints));
}

class OracleProperty : public ::testing::TestWithParam<support::Shape>
{ };

TEST_P(OracleProperty, EnumerationMatchesPowerSetAndLattice)
{
    support::Rng rng(300 + static_cast<int>(GetParam()));
    for (int round = 0; round < 120; ++round) {
        auto g = support::random_problem(rng, GetParam(), 12);
        auto brute = support::powerset_repairs(g.data, g.constraints);
        auto set = oracle::enumerate_repairs(g.data, g.constraints);
        ASSERT_EQ(sorted(set.repairs), brute) << textio::serialize_constraints(g.constraints);
        ASSERT_EQ(sorted(oracle::enumerate_repairs_lattice(g.data, g.constraints).repairs), brute);
        for (const auto &sub : support::all_subsets(g.data)) {
            bool expected = std::find(brute.begin(), brute.end(), sub) != brute.end();
            ASSERT_EQ(oracle::oracle_repair_check(g.data, sub, g.constraints), expected);
        }
    }
}

TEST_P(OracleProperty, CqaMatchesBruteForce)
{
    support::Rng rng(400 + static_cast<int>(GetParam()));
    for (int round = 0; round < 120; ++round) {
        auto g = support::random_problem(rng, GetParam(), 10);
        auto brute = support::powerset_repairs(g.data, g.constraints);
        auto ground = support::random_ground_query(rng, g);
        bool expected = std::all_of(brute.begin(), brute.end(),
                                    [&](const Instance &r) { return support::adom_evaluate(*ground.formula, r); });
        auto answer = oracle::oracle_cqa(g.data, g.constraints, Query{ground});
        ASSERT_EQ(answer.consistent, expected) << ground.to_string();
        if (!answer.consistent) {
            ASSERT_TRUE(answer.witness.has_value());
            ASSERT_NE(std::find(brute.begin(), brute.end(), *answer.witness), brute.end());
            ASSERT_FALSE(support::adom_evaluate(*ground.formula, *answer.witness));
        }

        auto cq = support::random_simple_cq(rng, g);
        bool cq_expected = std::all_of(brute.begin(), brute.end(),
                                       [&](const Instance &r) { return support::adom_evaluate(*cq.to_formula(), r); });
        ASSERT_EQ(oracle::oracle_cqa(g.data, g.constraints, Query{cq}).consistent, cq_expected) << cq.to_string();
    }
}

INSTANTIATE_TEST_SUITE_P(Shapes, OracleProperty,
                         ::testing::Values(support::Shape::Denials, support::Shape::Fds,
                                           support::Shape::AcyclicFdInd, support::Shape::SingleKey,
                                           support::Shape::CyclicFdInd, support::Shape::Mixed));

TEST(Oracle, ConsistentAnswersOfOpenQueries)
{
    auto fx = support::load_fixture("person");
    auto full = std::get<ConjunctiveQuery>(support::load_query("person", "query_full.txt", fx.schema));
    auto rows = oracle::oracle_consistent_answers(fx.data, fx.constraints, full);
    ASSERT_EQ(rows.size(), 1U);
    EXPECT_EQ(rows[0], (std::vector<Value>{sym("Green"), sym("Clarence"), sym("4000 Transit")}));
    auto proj = std::get<ConjunctiveQuery>(support::load_query("person", "query_projection.txt", fx.schema));
    auto rows2 = oracle::oracle_consistent_answers(fx.data, fx.constraints, proj);
    EXPECT_EQ(rows2, (std::vector<std::vector<Value>>{{sym("Brown"), sym("Amherst")},
                                                      {sym("Green"), sym("Clarence")}}));
}
