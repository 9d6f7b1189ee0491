#include "support.hpp"

#include "repairlab/textio/textio.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace support {

namespace {

bool clause_true(const std::vector<int> &clause, std::uint64_t assignment)
{
    return std::any_of(clause.begin(), clause.end(), [&](int lit) {
        bool value = (assignment >> (std::abs(lit) - 1)) & 1U;
        return lit > 0 ? value : !value;
    });
}

bool all_clauses_true(const reductions::CnfFormula &f, std::uint64_t assignment)
{
    return std::all_of(f.clauses.begin(), f.clauses.end(),
                       [&](const auto &c) { return clause_true(c, assignment); });
}

}

bool satisfiable(const reductions::CnfFormula &f)
{
    for (std::uint64_t a = 0; a < (1ULL << f.variables); ++a)
        if (all_clauses_true(f, a))
            return true;
    return false;
}

bool qbf_true(const reductions::Qbf2 &q)
{
    std::size_t k = q.universals, l = q.existentials;
    for (std::uint64_t u = 0; u < (1ULL << k); ++u) {
        bool found = false;
        for (std::uint64_t e = 0; e < (1ULL << l) && !found; ++e)
            found = all_clauses_true(q.matrix, u | (e << k));
        if (!found)
            return false;
    }
    return true;
}

bool three_colorable(const reductions::Graph &g)
{
    std::vector<int> color(g.nodes, 0);
    std::function<bool(std::size_t)> go = [&](std::size_t v) {
        if (v == g.nodes)
            return true;
        for (int c = 0; c < 3; ++c) {
            color[v] = c;
            bool ok = true;
            for (auto [a, b] : g.edges)
                if ((a == v && b < v && color[b] == c) || (b == v && a < v && color[a] == c))
                    ok = false;
            if (ok && go(v + 1))
                return true;
        }
        return false;
    };
    return go(0);
}

std::vector<reductions::CnfFormula> all_cnfs(std::size_t variables, std::size_t max_clauses,
                                             std::size_t max_clause_size)
{
    // Each variable is absent, positive or negative in a clause.
    std::vector<std::vector<int>> clause_types;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < variables; ++i)
        combos *= 3;
    for (std::size_t code = 1; code < combos; ++code) {
        std::vector<int> clause;
        std::size_t c = code;
        for (std::size_t v = 1; v <= variables; ++v, c /= 3)
            if (c % 3)
                clause.push_back(c % 3 == 1 ? static_cast<int>(v) : -static_cast<int>(v));
        if (clause.size() <= max_clause_size)
            clause_types.push_back(std::move(clause));
    }
    std::vector<reductions::CnfFormula> out;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> go = [&](std::size_t from) {
        if (!pick.empty()) {
            reductions::CnfFormula f;
            f.variables = variables;
            for (auto i : pick)
                f.clauses.push_back(clause_types[i]);
            out.push_back(std::move(f));
        }
        if (pick.size() == max_clauses)
            return;
        for (std::size_t i = from; i < clause_types.size(); ++i) {
            pick.push_back(i);
            go(i + 1);
            pick.pop_back();
        }
    };
    go(0);
    return out;
}

std::vector<reductions::Graph> all_graphs(std::size_t nodes)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t u = 0; u < nodes; ++u)
        for (std::size_t v = u + 1; v < nodes; ++v)
            pairs.emplace_back(u, v);
    std::vector<reductions::Graph> out;
    for (std::uint64_t mask = 0; mask < (1ULL << pairs.size()); ++mask) {
        reductions::Graph g{nodes, {}};
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if ((mask >> i) & 1U)
                g.edges.push_back(pairs[i]);
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

std::vector<Value> pick(const Fact &f, const std::vector<std::size_t> &positions)
{
    std::vector<Value> out;
    for (auto p : positions)
        out.push_back(f.values[p]);
    return out;
}

bool cmp(CmpOp op, const Value &a, const Value &b)
{
    switch (op) {
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
        case CmpOp::Lt: return a.as_number() < b.as_number();
        case CmpOp::Gt: return a.as_number() > b.as_number();
        case CmpOp::Le: return a.as_number() <= b.as_number();
        case CmpOp::Ge: return a.as_number() >= b.as_number();
    }
    return false;
}

using Env = std::map<std::string, Value>;

const Value &term_value(const Term &t, const Env &env)
{
    return is_variable(t) ? env.at(as_variable(t).name) : as_value(t);
}

bool denial_violated(const std::vector<Fact> &facts, const DenialConstraint &d, std::size_t i, Env &env)
{
    if (i == d.atoms.size())
        return std::all_of(d.conditions.begin(), d.conditions.end(), [&](const Comparison &c) {
            return cmp(c.op, term_value(c.lhs, env), term_value(c.rhs, env));
        });
    const Atom &atom = d.atoms[i];
    for (const auto &f : facts) {
        if (f.relation != atom.relation)
            continue;
        Env saved = env;
        bool ok = true;
        for (std::size_t k = 0; k < atom.args.size() && ok; ++k) {
            const Term &t = atom.args[k];
            if (!is_variable(t)) {
                ok = as_value(t) == f.values[k];
                continue;
            }
            auto [it, inserted] = env.emplace(as_variable(t).name, f.values[k]);
            ok = inserted || it->second == f.values[k];
        }
        if (ok && denial_violated(facts, d, i + 1, env))
            return true;
        env = std::move(saved);
    }
    return false;
}

}

bool consistent(const Instance &inst, const ConstraintSet &ics)
{
    auto facts = inst.to_vector();
    for (const auto &fd : ics.fds())
        for (const auto &f : facts)
            for (const auto &g : facts)
                if (f.relation == fd.relation && g.relation == fd.relation && pick(f, fd.lhs) == pick(g, fd.lhs) &&
                    pick(f, fd.rhs) != pick(g, fd.rhs))
                    return false;
    for (const auto &ind : ics.inds())
        for (const auto &f : facts) {
            if (f.relation != ind.source)
                continue;
            auto want = pick(f, ind.source_positions);
            bool found = std::any_of(facts.begin(), facts.end(), [&](const Fact &g) {
                return g.relation == ind.target && pick(g, ind.target_positions) == want;
            });
            if (!found)
                return false;
        }
    for (const auto &d : ics.denials()) {
        Env env;
        if (denial_violated(facts, d, 0, env))
            return false;
    }
    return true;
}

std::vector<Instance> all_subsets(const Instance &r)
{
    auto facts = r.to_vector();
    std::vector<Instance> out;
    for (std::uint64_t mask = 0; mask < (1ULL << facts.size()); ++mask) {
        Instance s;
        for (std::size_t i = 0; i < facts.size(); ++i)
            if ((mask >> i) & 1U)
                s.insert(facts[i]);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Instance> powerset_repairs(const Instance &r, const ConstraintSet &ics)
{
    auto facts = r.to_vector();
    std::size_t n = facts.size();
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask)
        masks.push_back(mask);
    std::stable_sort(masks.begin(), masks.end(),
                     [](auto a, auto b) { return __builtin_popcount(a) > __builtin_popcount(b); });
    std::vector<std::uint32_t> maximal;
    for (auto mask : masks) {
        if (std::any_of(maximal.begin(), maximal.end(), [&](auto m) { return (mask & m) == mask; }))
            continue;
        Instance s;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1U)
                s.insert(facts[i]);
        if (consistent(s, ics))
            maximal.push_back(mask);
    }
    std::vector<Instance> out;
    for (auto mask : maximal) {
        Instance s;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1U)
                s.insert(facts[i]);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const Instance &a, const Instance &b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    return out;
}

namespace {

void collect_constants(const Formula &f, std::set<Value> &out)
{
    auto term = [&](const Term &t) {
        if (!is_variable(t))
            out.insert(as_value(t));
    };
    if (f.kind == Formula::Kind::Atom)
        for (const auto &t : f.atom.args)
            term(t);
    if (f.kind == Formula::Kind::Compare) {
        term(f.comparison.lhs);
        term(f.comparison.rhs);
    }
    for (const auto &c : f.children)
        collect_constants(*c, out);
}

bool adom(const Formula &f, const Instance &inst, const std::vector<Value> &domain, Env &env)
{
    using K = Formula::Kind;
    switch (f.kind) {
        case K::True: return true;
        case K::False: return false;
        case K::Atom: {
            Fact g{f.atom.relation, {}};
            for (const auto &t : f.atom.args)
                g.values.push_back(term_value(t, env));
            return inst.contains(g);
        }
        case K::Compare: {
            const auto &a = term_value(f.comparison.lhs, env);
            const auto &b = term_value(f.comparison.rhs, env);
            if (is_order(f.comparison.op) && (!a.is_number() || !b.is_number()))
                return false;
            return cmp(f.comparison.op, a, b);
        }
        case K::Not: return !adom(*f.children[0], inst, domain, env);
        case K::And:
            return std::all_of(f.children.begin(), f.children.end(),
                               [&](const auto &c) { return adom(*c, inst, domain, env); });
        case K::Or:
            return std::any_of(f.children.begin(), f.children.end(),
                               [&](const auto &c) { return adom(*c, inst, domain, env); });
        case K::Implies: return !adom(*f.children[0], inst, domain, env) || adom(*f.children[1], inst, domain, env);
        case K::Exists:
        case K::Forall: {
            bool exists = f.kind == K::Exists;
            Env saved = env;
            std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
                if (i == f.variables.size())
                    return adom(*f.children[0], inst, domain, env);
                for (const auto &v : domain) {
                    env[f.variables[i]] = v;
                    if (go(i + 1) == exists)
                        return exists;
                }
                return !exists;
            };
            bool result = go(0);
            env = std::move(saved);
            return result;
        }
    }
    return false;
}

}

bool adom_evaluate(const Formula &f, const Instance &inst)
{
    std::set<Value> values;
    for (const auto &fact : inst)
        values.insert(fact.values.begin(), fact.values.end());
    collect_constants(f, values);
    std::vector<Value> domain(values.begin(), values.end());
    Env env;
    return adom(f, inst, domain, env);
}

std::filesystem::path fixture_dir() { return REPAIRLAB_FIXTURE_DIR; }

Fixture load_fixture(const std::string &name)
{
    auto dir = fixture_dir() / name;
    Fixture fx;
    fx.schema = textio::parse_schema(textio::read_file(dir / "schema.txt"), (dir / "schema.txt").string());
    fx.constraints = textio::parse_constraints(textio::read_file(dir / "constraints.txt"), fx.schema,
                                               (dir / "constraints.txt").string());
    fx.data = textio::read_instance(dir / "data", fx.schema);
    return fx;
}

Instance load_instance(const std::string &name, const std::string &sub, const Schema &schema)
{
    return textio::read_instance(fixture_dir() / name / sub, schema);
}

Query load_query(const std::string &name, const std::string &file, const Schema &schema)
{
    auto path = fixture_dir() / name / file;
    return textio::parse_query(textio::read_file(path), schema, path.string());
}

Fact fact(std::string relation, std::vector<Value> values) { return Fact{std::move(relation), std::move(values)}; }

namespace {

std::size_t uniform(Rng &rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng &rng, double p) { return std::bernoulli_distribution(p)(rng); }

Value random_value(Rng &rng, Sort sort, std::size_t domain)
{
    static const char *symbols[] = {"a", "b", "c", "d"};
    if (sort == Sort::Numeric)
        return num(static_cast<std::int64_t>(uniform(rng, 0, domain - 1)));
    return sym(symbols[uniform(rng, 0, domain - 1)]);
}

std::vector<std::size_t> random_positions(Rng &rng, std::size_t arity, std::size_t count)
{
    std::vector<std::size_t> all(arity);
    for (std::size_t i = 0; i < arity; ++i)
        all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    return all;
}

FunctionalDependency random_fd(Rng &rng, const RelationSchema &rel, bool allow_empty_lhs)
{
    std::size_t arity = rel.arity();
    std::size_t lhs_size = uniform(rng, allow_empty_lhs ? 0 : 1, arity - 1);
    auto order = random_positions(rng, arity, arity);
    FunctionalDependency fd{rel.name(), {order.begin(), order.begin() + static_cast<long>(lhs_size)}, {}};
    std::size_t rhs_size = uniform(rng, 1, arity - lhs_size);
    fd.rhs.assign(order.begin() + static_cast<long>(lhs_size), order.begin() + static_cast<long>(lhs_size + rhs_size));
    return fd;
}

InclusionDependency random_ind(Rng &rng, const RelationSchema &src, const RelationSchema &dst)
{
    std::size_t len = uniform(rng, 1, std::min<std::size_t>({src.arity(), dst.arity(), 2}));
    return InclusionDependency{src.name(), random_positions(rng, src.arity(), len), dst.name(),
                               random_positions(rng, dst.arity(), len)};
}

struct VarPool
{
    std::vector<std::pair<std::string, Sort>> vars;

    Term pick(Rng &rng, Sort sort, double reuse)
    {
        std::vector<std::string> same;
        for (const auto &[n, s] : vars)
            if (s == sort)
                same.push_back(n);
        if (!same.empty() && chance(rng, reuse))
            return var(same[uniform(rng, 0, same.size() - 1)]);
        std::string name = "x" + std::to_string(vars.size() + 1);
        vars.emplace_back(name, sort);
        return var(name);
    }

    std::optional<Comparison> comparison(Rng &rng, std::size_t domain)
    {
        if (vars.empty())
            return std::nullopt;
        auto [lhs, sort] = vars[uniform(rng, 0, vars.size() - 1)];
        std::vector<std::string> same;
        for (const auto &[n, s] : vars)
            if (s == sort && n != lhs)
                same.push_back(n);
        Term rhs = !same.empty() && chance(rng, 0.6) ? var(same[uniform(rng, 0, same.size() - 1)])
                                                     : Term(random_value(rng, sort, domain));
        static constexpr CmpOp all_ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Gt, CmpOp::Le, CmpOp::Ge};
        CmpOp op = sort == Sort::Numeric ? all_ops[uniform(rng, 0, 5)] : (chance(rng, 0.5) ? CmpOp::Eq : CmpOp::Ne);
        return Comparison{op, var(lhs), rhs};
    }
};

DenialConstraint random_denial(Rng &rng, const Schema &schema, std::size_t domain)
{
    const auto &rels = schema.relations();
    std::size_t atoms = chance(rng, 0.2) ? 1 : (chance(rng, 0.7) ? 2 : 3);
    VarPool pool;
    DenialConstraint d;
    for (std::size_t i = 0; i < atoms; ++i) {
        const auto &rel = rels[uniform(rng, 0, rels.size() - 1)];
        Atom a{rel.name(), {}};
        for (std::size_t k = 0; k < rel.arity(); ++k) {
            Sort s = rel.attribute(k).sort;
            if (chance(rng, 0.1))
                a.args.push_back(random_value(rng, s, domain));
            else
                a.args.push_back(pool.pick(rng, s, i == 0 ? 0.2 : 0.5));
        }
        d.atoms.push_back(std::move(a));
    }
    std::size_t conditions = atoms == 1 ? 1 : uniform(rng, 0, 2);
    for (std::size_t i = 0; i < conditions; ++i)
        if (auto c = pool.comparison(rng, domain))
            d.conditions.push_back(*c);
    return d;
}

}

Generated random_problem(Rng &rng, Shape shape, std::size_t max_facts)
{
    static const char *names[] = {"R", "S", "T"};
    Generated g;
    std::size_t relations = uniform(rng, 1, 3);
    bool numeric_ok = shape == Shape::Denials || shape == Shape::Fds || shape == Shape::OneFdPerRelation;
    std::size_t domain = uniform(rng, 2, 3);
    for (std::size_t i = 0; i < relations; ++i) {
        std::size_t arity = uniform(rng, 1, 3);
        std::vector<Attribute> attrs;
        for (std::size_t k = 0; k < arity; ++k)
            attrs.push_back(Attribute{"A" + std::to_string(k + 1),
                                      numeric_ok && chance(rng, 0.25) ? Sort::Numeric : Sort::Symbolic});
        RelationSchema rel(names[i], std::move(attrs));
        if (shape == Shape::SingleKey) {
            std::size_t k = arity == 1 ? 1 : uniform(rng, 1, arity - 1);
            rel.add_key(Key{random_positions(rng, arity, k), true});
        }
        g.schema.add_relation(std::move(rel));
    }
    g.constraints = ConstraintSet(g.schema);
    const auto &rels = g.schema.relations();
    auto add_fds = [&](std::size_t count, bool one_per_relation) {
        std::set<std::string> used;
        for (std::size_t i = 0; i < count; ++i) {
            const auto &rel = rels[uniform(rng, 0, rels.size() - 1)];
            if (rel.arity() < 2 || (one_per_relation && used.contains(rel.name())))
                continue;
            if (g.constraints.add(random_fd(rng, rel, one_per_relation && chance(rng, 0.1))))
                used.insert(rel.name());
        }
    };
    switch (shape) {
        case Shape::Denials:
            for (std::size_t i = uniform(rng, 1, 3); i > 0; --i)
                g.constraints.add(random_denial(rng, g.schema, domain));
            break;
        case Shape::Fds: add_fds(uniform(rng, 1, 3), false); break;
        case Shape::OneFdPerRelation: add_fds(uniform(rng, 1, 3), true); break;
        case Shape::AcyclicFdInd:
        case Shape::CyclicFdInd:
        case Shape::Mixed: {
            add_fds(uniform(rng, 0, 2), false);
            std::size_t inds = uniform(rng, 1, 2);
            for (std::size_t i = 0; i < inds; ++i) {
                std::size_t s = uniform(rng, 0, rels.size() - 1), t = uniform(rng, 0, rels.size() - 1);
                if (shape == Shape::AcyclicFdInd) {
                    if (rels.size() == 1)
                        break;
                    // Edges only go from later to earlier relations.
                    if (s == t)
                        continue;
                    if (s < t)
                        std::swap(s, t);
                }
                g.constraints.add(random_ind(rng, rels[s], rels[t]));
            }
            if (shape == Shape::Mixed)
                g.constraints.add(random_denial(rng, g.schema, domain));
            break;
        }
        case Shape::SingleKey: {
            for (const auto &rel : rels) {
                const auto &key = rel.keys().front().positions;
                std::vector<std::size_t> rest;
                for (std::size_t k = 0; k < rel.arity(); ++k)
                    if (!std::count(key.begin(), key.end(), k))
                        rest.push_back(k);
                if (!rest.empty() && chance(rng, 0.85))
                    g.constraints.add(FunctionalDependency{rel.name(), key, rest});
            }
            std::size_t inds = uniform(rng, 1, 2);
            for (std::size_t i = 0; i < inds; ++i) {
                const auto &dst = rels[uniform(rng, 0, rels.size() - 1)];
                const auto &key = dst.keys().front().positions;
                std::vector<const RelationSchema *> sources;
                for (const auto &rel : rels)
                    if (rel.arity() >= key.size())
                        sources.push_back(&rel);
                const auto &src = *sources[uniform(rng, 0, sources.size() - 1)];
                g.constraints.add(InclusionDependency{src.name(), random_positions(rng, src.arity(), key.size()),
                                                      dst.name(), key});
            }
            break;
        }
    }
    std::size_t facts = uniform(rng, 1, max_facts);
    for (std::size_t i = 0; i < facts * 2 && g.data.size() < facts; ++i) {
        const auto &rel = rels[uniform(rng, 0, rels.size() - 1)];
        Fact f{rel.name(), {}};
        for (std::size_t k = 0; k < rel.arity(); ++k)
            f.values.push_back(random_value(rng, rel.attribute(k).sort, domain));
        g.data.insert(std::move(f));
    }
    return g;
}

GroundQuery random_ground_query(Rng &rng, const Generated &g)
{
    auto facts = g.data.to_vector();
    const auto &rels = g.schema.relations();
    std::function<FormulaPtr(int)> build = [&](int depth) -> FormulaPtr {
        if (depth == 0 || chance(rng, 0.3)) {
            Fact f;
            if (!facts.empty() && chance(rng, 0.75)) {
                f = facts[uniform(rng, 0, facts.size() - 1)];
            } else {
                const auto &rel = rels[uniform(rng, 0, rels.size() - 1)];
                f.relation = rel.name();
                for (std::size_t k = 0; k < rel.arity(); ++k)
                    f.values.push_back(random_value(rng, rel.attribute(k).sort, 3));
            }
            return make_atom(Atom{f.relation, {f.values.begin(), f.values.end()}});
        }
        switch (uniform(rng, 0, 3)) {
            case 0: return make_not(build(depth - 1));
            case 1: return make_and({build(depth - 1), build(depth - 1)});
            case 2: return make_or({build(depth - 1), build(depth - 1)});
            default: return make_implies(build(depth - 1), build(depth - 1));
        }
    };
    return GroundQuery{build(3)};
}

ConjunctiveQuery random_simple_cq(Rng &rng, const Generated &g)
{
    std::vector<std::size_t> order(g.schema.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(uniform(rng, 1, order.size()));
    VarPool pool;
    ConjunctiveQuery q;
    for (auto i : order) {
        const auto &rel = g.schema.relations()[i];
        Atom a{rel.name(), {}};
        for (std::size_t k = 0; k < rel.arity(); ++k) {
            Sort s = rel.attribute(k).sort;
            if (chance(rng, 0.15))
                a.args.push_back(random_value(rng, s, 3));
            else
                a.args.push_back(pool.pick(rng, s, 0.3));
        }
        q.atoms.push_back(std::move(a));
    }
    for (std::size_t i = uniform(rng, 0, 2); i > 0; --i)
        if (auto c = pool.comparison(rng, 3))
            q.conditions.push_back(*c);
    for (const auto &[n, s] : pool.vars)
        q.bound_variables.push_back(n);
    return normalize(q);
}

}
