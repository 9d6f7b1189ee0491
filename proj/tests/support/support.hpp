#pragma once

#include "repairlab/model/constraint.hpp"
#include "repairlab/model/instance.hpp"
#include "repairlab/model/query.hpp"
#include "repairlab/reductions/reductions.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace support {

using namespace repairlab;

// ---- brute force ----------------------------------------------------------------------------------------------

bool satisfiable(const reductions::CnfFormula &f);
bool qbf_true(const reductions::Qbf2 &q);
bool three_colorable(const reductions::Graph &g);

/// Every CNF over variables 1..`variables` with 1..max_clauses distinct clauses. A clause is a nonempty set of at
/// most `max_clause_size` literals over distinct variables (no tautological clauses).
std::vector<reductions::CnfFormula> all_cnfs(std::size_t variables, std::size_t max_clauses,
                                             std::size_t max_clause_size = 3);
/// Every simple graph on `nodes` nodes.
std::vector<reductions::Graph> all_graphs(std::size_t nodes);

/// Consistency by direct pairwise/tuple-wise scans, written independently of the library checkers.
bool consistent(const Instance &inst, const ConstraintSet &ics);
/// Maximal consistent subsets by walking the whole power set. At most 16 facts.
std::vector<Instance> powerset_repairs(const Instance &r, const ConstraintSet &ics);
/// Every subset of `r` (at most 16 facts), in mask order.
std::vector<Instance> all_subsets(const Instance &r);

/// Formula evaluation with quantifiers ranging over the active domain of `inst` plus the constants of `f`.
bool adom_evaluate(const Formula &f, const Instance &inst);

// ---- fixtures -------------------------------------------------------------------------------------------------

struct Fixture
{
    Schema schema;
    ConstraintSet constraints;
    Instance data;
};

std::filesystem::path fixture_dir();
/// Loads `tests/fixtures/<name>` (schema.txt, constraints.txt, data/).
Fixture load_fixture(const std::string &name);
Instance load_instance(const std::string &name, const std::string &sub, const Schema &schema);
Query load_query(const std::string &name, const std::string &file, const Schema &schema);

Fact fact(std::string relation, std::vector<Value> values);

// ---- random generators ----------------------------------------------------------------------------------------

using Rng = std::mt19937_64;

struct Generated
{
    Schema schema;
    ConstraintSet constraints;
    Instance data;
};

/// Constraint shapes produced by `random_problem`.
enum class Shape { Denials, Fds, OneFdPerRelation, AcyclicFdInd, SingleKey, CyclicFdInd, Mixed };

/// 1..3 relations of arity 1..3, at most `max_facts` facts over a small domain, constraints of at most 3 atoms.
Generated random_problem(Rng &rng, Shape shape, std::size_t max_facts = 12);
/// Ground quantifier-free sentence over facts of `r` and a few absent facts.
GroundQuery random_ground_query(Rng &rng, const Generated &g);
/// Closed simple conjunctive query over the relations of `g`.
ConjunctiveQuery random_simple_cq(Rng &rng, const Generated &g);

}
