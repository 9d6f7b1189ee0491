#include "repairlab/error.hpp"
#include "repairlab/reductions/reductions.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <set>

namespace repairlab::reductions {

namespace {

Attribute symbolic(std::string name) { return Attribute{std::move(name), Sort::Symbolic}; }

Fact fact(std::string relation, std::vector<Value> values) { return Fact{std::move(relation), std::move(values)}; }

std::string clause_name(std::size_t index) { return "cl:" + std::to_string(index); }
std::string variable_name(std::size_t v) { return "v:p" + std::to_string(v); }

ConjunctiveQuery closed_cq(std::vector<Atom> atoms)
{
    ConjunctiveQuery q;
    std::set<std::string> seen;
    for (const auto &atom : atoms)
        for (const auto &t : atom.args)
            if (is_variable(t) && seen.insert(as_variable(t).name).second)
                q.bound_variables.push_back(as_variable(t).name);
    q.atoms = std::move(atoms);
    return normalize(q);
}

Schema ternary_colored_schema()
{
    Schema schema;
    schema.add_relation(RelationSchema("R", {symbolic("A"), symbolic("B"), symbolic("C")}));
    return schema;
}

Instance colored_facts(const std::vector<ColoredEdge> &edges)
{
    Instance r;
    for (const auto &e : edges)
        r.insert(fact("R", {sym(e.from), sym(e.to), sym(e.color)}));
    return r;
}

}

Bundle gen_monotone3sat(const CnfFormula &formula)
{
    if (!formula.monotone_partitioned())
        throw InvalidArgument("gen_monotone3sat needs a monotone-partitioned formula, got " + formula.to_string());
    Bundle b;
    b.schema = ternary_colored_schema();
    b.schema.find("R")->add_key(Key{{0}, true});
    b.constraints = ConstraintSet(b.schema);
    b.constraints.add(FunctionalDependency{"R", {0}, {1, 2}});
    for (std::size_t i = 0; i < formula.clauses.size(); ++i)
        for (int lit : formula.clauses[i])
            b.instance.insert(fact("R", {sym(clause_name(i + 1)), sym(variable_name(static_cast<std::size_t>(std::abs(lit)))),
                                         sym(lit > 0 ? "c2" : "c")}));
    b.query = closed_cq({Atom{"R", {var("x"), var("y"), sym("c")}}, Atom{"R", {var("z"), var("y"), sym("c2")}}});
    b.property = "formula satisfiable <=> query not consistently true";
    return b;
}

BipartiteColoredGraph gen_v_gadget(const Graph &graph)
{
    BipartiteColoredGraph out;
    auto node = [](std::size_t v, char e) { return "n" + std::to_string(v) + "." + e; };
    auto primed = [](std::size_t v, char e) { return "p" + std::to_string(v) + "." + e; };
    static constexpr std::array<std::pair<char, char>, 8> green = {
        {{'m', 'r'}, {'m', 'b'}, {'n', 'b'}, {'n', 'g'}, {'r', 'm'}, {'b', 'm'}, {'b', 'n'}, {'g', 'n'}}};
    static constexpr std::array<char, 3> colors = {'r', 'g', 'b'};
    for (std::size_t v = 0; v < graph.nodes; ++v) {
        for (auto [x, y] : green)
            out.edges.push_back({node(v, x), primed(v, y), "g"});
        for (char x : colors)
            for (char y : colors)
                if (x != y)
                    out.edges.push_back({node(v, x), primed(v, y), "b"});
    }
    for (auto [u, v] : graph.edges)
        for (char c : colors) {
            out.edges.push_back({node(v, c), primed(u, c), "b"});
            out.edges.push_back({node(u, c), primed(v, c), "b"});
        }
    return out;
}

Bundle gen_two_key(const Graph &graph)
{
    Bundle b;
    b.schema = ternary_colored_schema();
    b.schema.find("R")->add_key(Key{{0}, true});
    b.schema.find("R")->add_key(Key{{1}, false});
    b.constraints = ConstraintSet(b.schema);
    b.constraints.add(FunctionalDependency{"R", {0}, {1, 2}});
    b.constraints.add(FunctionalDependency{"R", {1}, {0, 2}});
    b.instance = colored_facts(gen_v_gadget(graph).edges);
    b.query = closed_cq({Atom{"R", {var("x"), var("y"), sym("b")}}});
    b.property = "graph 3-colorable <=> query not consistently true";
    return b;
}

EdgeColoredGraph gen_y_gadget(const CnfFormula &formula)
{
    EdgeColoredGraph out;
    auto node = [](char kind, std::size_t i) { return std::string(1, kind) + ":" + std::to_string(i); };
    for (std::size_t i = 1; i <= formula.variables; ++i) {
        out.edges.push_back({node('a', i), node('b', i), "p"});
        out.edges.push_back({node('b', i), node('d', i), "g"});
        out.edges.push_back({node('b', i), node('c', i), "b"});
    }
    for (std::size_t j = 1; j <= formula.clauses.size(); ++j) {
        out.edges.push_back({node('e', j), node('f', j), "p"});
        out.edges.push_back({node('e', j), node('g', j), "g"});
        for (int lit : formula.clauses[j - 1])
            out.edges.push_back({node('d', static_cast<std::size_t>(std::abs(lit))), node('e', j), lit > 0 ? "g" : "b"});
    }
    return out;
}

Bundle gen_one_denial(const CnfFormula &formula)
{
    Bundle b;
    b.schema = ternary_colored_schema();
    b.constraints = ConstraintSet(b.schema);
    b.constraints.add(DenialConstraint{{Atom{"R", {var("x"), var("y"), var("s")}},
                                        Atom{"R", {var("y"), var("z"), var("s1")}},
                                        Atom{"R", {var("y"), var("w"), var("s2")}}},
                                       {Comparison{CmpOp::Ne, var("s1"), var("s2")}}});
    b.instance = colored_facts(gen_y_gadget(formula).edges);
    b.query = closed_cq({Atom{"R", {var("x"), var("y"), sym("p")}}});
    b.property = "formula satisfiable <=> query not consistently true";
    return b;
}

SpoiledFreeInstance gen_spoiled_free(const Graph &graph)
{
    SpoiledFreeInstance out;
    auto v2 = [](std::size_t v, char e) { return "n" + std::to_string(v) + "." + e; };
    auto v3 = [](std::size_t v, char e) { return "p" + std::to_string(v) + "." + e; };
    auto add = [&](std::string x, std::string y, bool spoiled) {
        std::string t = "t:" + x + "/" + y;
        out.triangles.push_back({std::move(t), std::move(x), std::move(y), spoiled});
    };
    static constexpr std::array<std::pair<char, char>, 8> plain = {
        {{'r', 'p'}, {'g', 'p'}, {'g', 'q'}, {'b', 'q'}, {'p', 'r'}, {'p', 'g'}, {'q', 'g'}, {'q', 'b'}}};
    static constexpr std::array<char, 3> colors = {'r', 'g', 'b'};
    for (std::size_t v = 0; v < graph.nodes; ++v) {
        for (auto [x, y] : plain)
            add(v2(v, x), v3(v, y), false);
        for (char x : colors)
            for (char y : colors)
                if (x != y)
                    add(v2(v, x), v3(v, y), true);
    }
    for (auto [u, v] : graph.edges)
        for (char c : colors) {
            add(v2(v, c), v3(u, c), true);
            add(v2(u, c), v3(v, c), true);
        }
    return out;
}

Bundle gen_acyclic_cqa(const SpoiledFreeInstance &instance)
{
    Bundle b;
    RelationSchema p("P", {symbolic("A")});
    RelationSchema q("Q", {symbolic("Q1"), symbolic("Q2")});
    q.add_key(Key{{0}, true});
    RelationSchema r("R", {symbolic("R1"), symbolic("R2"), symbolic("R3")});
    r.add_key(Key{{0}, true});
    r.add_key(Key{{1}, false});
    r.add_key(Key{{2}, false});
    b.schema.add_relation(std::move(p));
    b.schema.add_relation(std::move(q));
    b.schema.add_relation(std::move(r));
    b.constraints = ConstraintSet(b.schema);
    b.constraints.add(FunctionalDependency{"Q", {0}, {1}});
    b.constraints.add(FunctionalDependency{"R", {0}, {1, 2}});
    b.constraints.add(FunctionalDependency{"R", {1}, {0, 2}});
    b.constraints.add(FunctionalDependency{"R", {2}, {0, 1}});
    b.constraints.add(InclusionDependency{"P", {0}, "Q", {0}});
    b.constraints.add(InclusionDependency{"Q", {1}, "R", {0}});
    b.instance.insert(fact("P", {sym("a")}));
    for (const auto &t : instance.triangles) {
        if (t.spoiled)
            b.instance.insert(fact("Q", {sym("a"), sym(t.v1)}));
        b.instance.insert(fact("R", {sym(t.v1), sym(t.v2), sym(t.v3)}));
    }
    b.query = GroundQuery{make_atom(Atom{"P", {sym("a")}})};
    b.property = "maximal spoiled-free set exists <=> query not consistently true";
    return b;
}

Bundle gen_fd_ind_repaircheck(const CnfFormula &formula)
{
    Bundle b;
    b.schema.add_relation(RelationSchema(
        "R", {symbolic("A1"), Attribute{"A2", Sort::Numeric}, symbolic("A3"), symbolic("A4")}));
    b.constraints = ConstraintSet(b.schema);
    b.constraints.add(FunctionalDependency{"R", {0}, {1}});
    b.constraints.add(InclusionDependency{"R", {2}, "R", {3}});
    std::size_t m = formula.clauses.size();
    for (std::size_t i = 0; i < m; ++i)
        for (int lit : formula.clauses[i])
            b.instance.insert(fact("R", {sym(variable_name(static_cast<std::size_t>(std::abs(lit)))),
                                         num(lit > 0 ? 1 : 0), sym(clause_name(i + 1)),
                                         sym(clause_name((i + 1) % m + 1))}));
    b.candidate = Instance{};
    b.property = "empty instance is a repair <=> formula unsatisfiable";
    return b;
}

Permutations keyfk_permutations(const CnfFormula &formula)
{
    std::size_t m = formula.clauses.size();
    constexpr std::size_t unset = 0;
    Permutations s(3, std::vector<std::vector<std::size_t>>(3, std::vector<std::size_t>(formula.variables, unset)));
    std::vector<std::size_t> occurrence(formula.variables, 0);
    for (std::size_t c = 1; c <= m; ++c) {
        const auto &clause = formula.clauses[c - 1];
        for (std::size_t i = 0; i < clause.size(); ++i) {
            std::size_t l = static_cast<std::size_t>(std::abs(clause[i])) - 1;
            std::size_t j = occurrence[l]++;
            if (i >= 3 || j >= 3)
                throw InvalidArgument("formula is not restricted: " + formula.to_string());
            // Clause c is phi_{n+1} for n = c - 1, wrapping to m.
            s[i][j][l] = c == 1 ? m : c - 1;
        }
    }
    for (auto &row : s)
        for (auto &perm : row) {
            std::vector<bool> used(m + 1, false);
            for (std::size_t n : perm) {
                if (n != unset && used[n])
                    throw InvalidArgument("permutation construction failed for " + formula.to_string());
                used[n] = true;
            }
            std::size_t next = 1;
            for (auto &n : perm)
                if (n == unset) {
                    while (used[next])
                        ++next;
                    n = next;
                    used[next] = true;
                }
        }
    return s;
}

Bundle gen_keyfk_repaircheck(const CnfFormula &formula)
{
    if (!formula.restricted())
        throw InvalidArgument("gen_keyfk_repaircheck needs a restricted formula, got " + formula.to_string());
    Permutations s = keyfk_permutations(formula);
    auto literal = [](std::size_t v, bool positive) { return "lit:" + std::string(positive ? "" : "-") + "p" + std::to_string(v); };
    Bundle b;
    RelationSchema r("R", {symbolic("A"), symbolic("B")});
    r.add_key(Key{{1}, true});
    b.schema.add_relation(std::move(r));
    std::vector<std::string> names;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            std::string suffix = std::to_string(i) + std::to_string(j);
            RelationSchema rij("R" + suffix, {symbolic("A" + suffix), symbolic("B" + suffix)});
            rij.add_key(Key{{0}, true});
            rij.add_key(Key{{1}, false});
            b.schema.add_relation(std::move(rij));
            names.push_back("R" + suffix);
        }
    b.constraints = ConstraintSet(b.schema);
    b.constraints.add(FunctionalDependency{"R", {1}, {0}});
    for (const auto &name : names) {
        b.constraints.add(FunctionalDependency{name, {0}, {1}});
        b.constraints.add(FunctionalDependency{name, {1}, {0}});
    }
    for (const auto &name : names) {
        b.constraints.add(InclusionDependency{name, {1}, "R", {1}});
        b.constraints.add(InclusionDependency{"R", {0}, name, {0}});
    }
    for (std::size_t c = 0; c < formula.clauses.size(); ++c)
        for (int lit : formula.clauses[c])
            b.instance.insert(fact("R", {sym(literal(static_cast<std::size_t>(std::abs(lit)), lit > 0)),
                                         sym(clause_name(c + 1))}));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t l = 0; l < formula.variables; ++l)
                for (bool positive : {true, false})
                    b.instance.insert(fact(names[i * 3 + j], {sym(literal(l + 1, positive)), sym(clause_name(s[i][j][l]))}));
    b.candidate = Instance{};
    b.property = "empty instance is a repair <=> formula unsatisfiable";
    return b;
}

Bundle gen_qbf_cqa(const Qbf2 &qbf)
{
    Bundle b;
    b.schema.add_relation(RelationSchema("R", {symbolic("A"), symbolic("B"), symbolic("C"), symbolic("D")}));
    b.constraints = ConstraintSet(b.schema);
    b.constraints.add(FunctionalDependency{"R", {0}, {1}});
    b.constraints.add(InclusionDependency{"R", {2}, "R", {3}});
    auto variable = [&](std::size_t v) {
        return v <= qbf.universals ? "v:p" + std::to_string(v) : "v:q" + std::to_string(v - qbf.universals);
    };
    const auto &clauses = qbf.matrix.clauses;
    std::size_t m = clauses.size();
    for (std::size_t j = 0; j < m; ++j)
        for (int lit : clauses[j])
            b.instance.insert(fact("R", {sym(variable(static_cast<std::size_t>(std::abs(lit)))), sym(lit > 0 ? "1" : "0"),
                                         sym(clause_name(j + 1)), sym(clause_name((j + 1) % m + 1))}));
    for (std::size_t i = 1; i <= qbf.universals; ++i)
        for (const char *bit : {"1", "0"})
            b.instance.insert(fact("R", {sym(variable(i)), sym(bit), sym("a:" + std::to_string(i)),
                                         sym("a:" + std::to_string(i))}));
    Fact probe = fact("R", {sym("a"), sym("a"), sym(clause_name(1)), sym("a")});
    b.instance.insert(probe);
    std::vector<Term> args(probe.values.begin(), probe.values.end());
    b.query = GroundQuery{make_atom(Atom{"R", std::move(args)})};
    b.property = "QBF true <=> query consistently true";
    return b;
}

Bundle reduce_rc_to_cqa(const ConstraintSet &ics, const Instance &r, const Instance &candidate)
{
    const Schema &source = ics.schema();
    if (source.size() != 1)
        throw InvalidArgument("reduce_rc_to_cqa needs a single-relation schema, got " +
                              std::to_string(source.size()) + " relations");
    const RelationSchema &r0 = source.relations().front();
    auto fresh = [](std::string base, auto taken) {
        while (taken(base))
            base += "_";
        return base;
    };
    std::string s0 = fresh("S0", [&](const std::string &n) { return n == r0.name(); });
    std::string p = fresh("P", [&](const std::string &n) { return n == r0.name() || n == s0; });
    std::string z = fresh("Z", [&](const std::string &n) { return r0.position_of(n).has_value(); });
    std::size_t k = r0.arity();

    auto attributes = r0.attributes();
    attributes.push_back(symbolic(z));
    RelationSchema extended(s0, std::move(attributes));
    for (const auto &key : r0.keys())
        extended.add_key(key);
    Bundle b;
    b.schema.add_relation(std::move(extended));
    b.schema.add_relation(RelationSchema(p, {symbolic("W")}));
    b.constraints = ConstraintSet(b.schema);
    for (auto fd : ics.fds()) {
        fd.relation = s0;
        b.constraints.add(std::move(fd));
    }
    for (auto ind : ics.inds()) {
        ind.source = s0;
        ind.target = s0;
        ind.full = false;
        b.constraints.add(std::move(ind));
    }
    for (auto denial : ics.denials()) {
        std::set<std::string> names;
        for (const auto &atom : denial.atoms)
            for (const auto &t : atom.args)
                if (is_variable(t))
                    names.insert(as_variable(t).name);
        std::size_t n = 0;
        for (auto &atom : denial.atoms) {
            atom.relation = s0;
            std::string marker;
            do
                marker = "z" + std::to_string(++n);
            while (names.contains(marker));
            atom.args.push_back(var(marker));
        }
        b.constraints.add(std::move(denial));
    }
    b.constraints.add(InclusionDependency{p, {0}, s0, {k}});
    for (const auto &f : r) {
        auto values = f.values;
        values.push_back(sym(candidate.contains(f) ? "c1" : "c2"));
        b.instance.insert(fact(s0, std::move(values)));
    }
    b.instance.insert(fact(p, {sym("c2")}));
    b.query = GroundQuery{make_atom(Atom{p, {sym("c2")}})};
    b.property = "query consistently true <=> candidate is not a repair";
    return b;
}

Bundle gen_exponential_family(std::size_t n)
{
    if (n == 0)
        throw InvalidArgument("gen_exponential_family needs n >= 1");
    Bundle b;
    RelationSchema r("R", {symbolic("A"), symbolic("B")});
    r.add_key(Key{{0}, true});
    b.schema.add_relation(std::move(r));
    b.constraints = ConstraintSet(b.schema);
    b.constraints.add(FunctionalDependency{"R", {0}, {1}});
    for (std::size_t i = 1; i <= n; ++i)
        for (const char *v : {"b0", "b1"})
            b.instance.insert(fact("R", {sym("a" + std::to_string(i)), sym(v)}));
    b.property = std::to_string(2 * n) + " facts, " + std::to_string(1ULL << std::min<std::size_t>(n, 63)) + " repairs";
    return b;
}

const std::vector<std::string> &family_names()
{
    static const std::vector<std::string> names = {"monotone3sat", "two-key", "one-denial", "acyclic-cqa",
                                                   "fd-ind", "keyfk", "qbf", "exponential", "rc-to-cqa"};
    return names;
}

}
