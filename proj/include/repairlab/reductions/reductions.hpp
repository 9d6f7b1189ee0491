#pragma once

#include "repairlab/model/constraint.hpp"
#include "repairlab/model/instance.hpp"
#include "repairlab/model/query.hpp"
#include "repairlab/model/schema.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace repairlab::reductions {

/// CNF over variables 1..variables. Literals use the DIMACS convention: v for p_v, -v for its negation.
struct CnfFormula
{
    std::size_t variables = 0;
    std::vector<std::vector<int>> clauses;

    /// Every clause is all-positive or all-negative.
    bool monotone_partitioned() const;
    /// At most 3 literals per clause, at most 3 occurrences per variable, as many variables as clauses.
    bool restricted() const;
    std::string to_string() const;
};

/// Validates literal ranges. Throws `InvalidArgument`.
CnfFormula make_cnf(std::size_t variables, std::vector<std::vector<int>> clauses);
/// Clauses as DIMACS literals, each terminated by 0: `"1 2 0 -1 0"`. The variable count is the largest index.
CnfFormula parse_cnf(std::string_view text);

/// forall p_1..p_k exists q_1..q_l matrix, where p_i is CNF variable i and q_j is variable k + j.
struct Qbf2
{
    std::size_t universals = 0;
    std::size_t existentials = 0;
    CnfFormula matrix;
};

/// Undirected simple graph on nodes 0..nodes-1.
struct Graph
{
    std::size_t nodes = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// `"3:0-1,1-2"`: node count, then edges. Self-loops and duplicate edges are rejected.
Graph parse_graph(std::string_view text);

/// Edge of a colored graph, as named endpoints plus a color constant.
struct ColoredEdge
{
    std::string from;
    std::string to;
    std::string color;

    friend bool operator==(const ColoredEdge &, const ColoredEdge &) = default;
};

/// Bipartite graph with edges colored `g` or `b`; `from` is on the unprimed side.
struct BipartiteColoredGraph
{
    std::vector<ColoredEdge> edges;
};

/// Directed graph with edges colored `p`, `g` or `b`.
struct EdgeColoredGraph
{
    std::vector<ColoredEdge> edges;
};

/// Ternary hypergraph of typed triangles; `spoiled` marks triangles whose first vertex is spoiled.
struct SpoiledFreeInstance
{
    struct Triangle
    {
        std::string v1;
        std::string v2;
        std::string v3;
        bool spoiled = false;
    };
    std::vector<Triangle> triangles;
};

/// Intermediate combinatorial instance of a reduction.
using ColoredGraphInstance = std::variant<BipartiteColoredGraph, EdgeColoredGraph, SpoiledFreeInstance>;

/// A generated problem instance. `query` and `candidate` are set when the construction has them.
struct Bundle
{
    Schema schema;
    ConstraintSet constraints;
    Instance instance;
    std::optional<Query> query;
    std::optional<Instance> candidate;
    /// The property the construction guarantees, in words.
    std::string property;
};

/// R(i, p, 'c') for p in the i-th negative clause, R(i, p, 'c2') for p in the i-th positive clause, FD A -> B,C,
/// query exists x,y,z: R(x,y,'c') and R(z,y,'c2'). Satisfiable iff the query is not consistently true.
/// Throws `InvalidArgument` unless the formula is monotone-partitioned.
Bundle gen_monotone3sat(const CnfFormula &formula);

/// Ten nodes per graph node, green gadget edges and blue edges between differently colored copies and along graph
/// edges.
BipartiteColoredGraph gen_v_gadget(const Graph &graph);
/// R(x, y, color) over the V-gadget with keys A and B, query exists x,y: R(x,y,'b'). 3-colorable iff the query is
/// not consistently true.
Bundle gen_two_key(const Graph &graph);

/// Four nodes per variable and three per clause, edges colored p, g, b.
EdgeColoredGraph gen_y_gadget(const CnfFormula &formula);
/// R(x, y, color) over the Y-gadget, one denial constraint forbidding two differently colored edges leaving the
/// head of an edge, query exists x,y: R(x,y,'p'). Satisfiable iff the query is not consistently true.
Bundle gen_one_denial(const CnfFormula &formula);

/// Fourteen triangles per graph node and six per graph edge; the non-spoiled ones encode color choices.
SpoiledFreeInstance gen_spoiled_free(const Graph &graph);
/// P(a), Q(a, s) for each spoiled vertex s, R = the triangles; keys Q1 and R1 (primary), R2, R3; foreign keys
/// P <= Q1 and Q2 <= R1; query P('a'). A maximal spoiled-free set exists iff the query is not consistently true.
Bundle gen_acyclic_cqa(const SpoiledFreeInstance &instance);

/// R(p, v, c_i, c_i+1) per literal occurrence with v its polarity, FD A1 -> A2, IND R[A3] <= R[A4], candidate
/// empty. The empty instance is a repair iff the formula is unsatisfiable.
Bundle gen_fd_ind_repaircheck(const CnfFormula &formula);

/// The permutation s(i, j, .) as a table: `s[i][j][l]` is the clause index (1-based) for variable l + 1.
using Permutations = std::vector<std::vector<std::vector<std::size_t>>>;
Permutations keyfk_permutations(const CnfFormula &formula);
/// Ten binary relations with key FDs and foreign keys encoding a restricted formula, candidate empty. The empty
/// instance is a repair iff the formula is unsatisfiable. Throws `InvalidArgument` unless restricted.
Bundle gen_keyfk_repaircheck(const CnfFormula &formula);

/// R(A, B, C, D) with FD A -> B and IND C <= D, query R('a', 'a', 'cl:1', 'a'). The QBF is true iff the query is
/// consistently true.
Bundle gen_qbf_cqa(const Qbf2 &qbf);

/// Extends the single relation R0 by a marker column Z ('c1' for candidate facts, 'c2' for the others) and adds
/// P(W) = {'c2'} with P[W] <= S0[Z]. For a consistent candidate, P('c2') is consistently true iff the candidate is
/// not a repair. Throws `InvalidArgument` for multi-relation schemas.
Bundle reduce_rc_to_cqa(const ConstraintSet &ics, const Instance &r, const Instance &candidate);

/// R(A, B) with facts (a_i, b0), (a_i, b1) for i = 1..n and FD A -> B: 2n facts, 2^n repairs.
Bundle gen_exponential_family(std::size_t n);

/// Names accepted by `generate`: monotone3sat, two-key, one-denial, acyclic-cqa, fd-ind, keyfk, qbf, exponential,
/// rc-to-cqa.
const std::vector<std::string> &family_names();

}
