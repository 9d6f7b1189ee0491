#include "repairlab/model/query.hpp"

#include "repairlab/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace repairlab {

namespace {

using Kind = Formula::Kind;

FormulaPtr make(Kind kind)
{
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    return f;
}

int precedence(const Formula &f)
{
    switch (f.kind) {
        case Kind::Implies:
        case Kind::Exists:
        case Kind::Forall: return 0;
        case Kind::Or: return 1;
        case Kind::And: return 2;
        case Kind::Not: return 3;
        default: return 4;
    }
}

std::string child_text(const Formula &child, int min_precedence)
{
    auto text = child.to_string();
    return precedence(child) < min_precedence ? "(" + text + ")" : text;
}

std::string join_names(const std::vector<std::string> &names)
{
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i)
        out += (i ? ", " : "") + names[i];
    return out;
}

bool term_ground(const Term &t)
{
    return !is_variable(t);
}

}

std::string Formula::to_string() const
{
    switch (kind) {
        case Kind::True: return "true";
        case Kind::False: return "false";
        case Kind::Atom: return atom.to_string();
        case Kind::Compare: return comparison.to_string();
        case Kind::Not: return "not " + child_text(*children[0], 3);
        case Kind::And:
        case Kind::Or: {
            std::string out;
            int p = kind == Kind::And ? 2 : 1;
            for (std::size_t i = 0; i < children.size(); ++i) {
                if (i)
                    out += kind == Kind::And ? " and " : " or ";
                out += child_text(*children[i], p + 1);
            }
            return out;
        }
        case Kind::Implies: return child_text(*children[0], 1) + " -> " + child_text(*children[1], 1);
        case Kind::Exists: return "exists " + join_names(variables) + ": " + children[0]->to_string();
        case Kind::Forall: return "forall " + join_names(variables) + ": " + children[0]->to_string();
    }
    return "?";
}

bool Formula::ground() const
{
    switch (kind) {
        case Kind::True:
        case Kind::False: return true;
        case Kind::Atom: return std::all_of(atom.args.begin(), atom.args.end(), term_ground);
        case Kind::Compare: return term_ground(comparison.lhs) && term_ground(comparison.rhs);
        case Kind::Exists:
        case Kind::Forall: return false;
        default:
            return std::all_of(children.begin(), children.end(), [](const FormulaPtr &c) { return c->ground(); });
    }
}

bool operator==(const Formula &lhs, const Formula &rhs)
{
    if (lhs.kind != rhs.kind || lhs.variables != rhs.variables || lhs.children.size() != rhs.children.size())
        return false;
    if (lhs.kind == Kind::Atom && !(lhs.atom == rhs.atom))
        return false;
    if (lhs.kind == Kind::Compare && !(lhs.comparison == rhs.comparison))
        return false;
    for (std::size_t i = 0; i < lhs.children.size(); ++i)
        if (!(*lhs.children[i] == *rhs.children[i]))
            return false;
    return true;
}

FormulaPtr make_true()
{
    return make(Kind::True);
}

FormulaPtr make_false()
{
    return make(Kind::False);
}

FormulaPtr make_atom(Atom atom)
{
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Atom;
    f->atom = std::move(atom);
    return f;
}

FormulaPtr make_compare(Comparison comparison)
{
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Compare;
    f->comparison = std::move(comparison);
    return f;
}

FormulaPtr make_not(FormulaPtr body)
{
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Not;
    f->children = {std::move(body)};
    return f;
}

FormulaPtr make_and(std::vector<FormulaPtr> children)
{
    if (children.empty())
        return make_true();
    if (children.size() == 1)
        return children.front();
    auto f = std::make_shared<Formula>();
    f->kind = Kind::And;
    f->children = std::move(children);
    return f;
}

FormulaPtr make_or(std::vector<FormulaPtr> children)
{
    if (children.empty())
        return make_false();
    if (children.size() == 1)
        return children.front();
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Or;
    f->children = std::move(children);
    return f;
}

FormulaPtr make_implies(FormulaPtr antecedent, FormulaPtr consequent)
{
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Implies;
    f->children = {std::move(antecedent), std::move(consequent)};
    return f;
}

FormulaPtr make_exists(std::vector<std::string> variables, FormulaPtr body)
{
    if (variables.empty())
        return body;
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Exists;
    f->variables = std::move(variables);
    f->children = {std::move(body)};
    return f;
}

FormulaPtr make_forall(std::vector<std::string> variables, FormulaPtr body)
{
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Forall;
    f->variables = std::move(variables);
    f->children = {std::move(body)};
    return f;
}

std::string GroundQuery::to_string() const
{
    return formula->to_string();
}

bool GroundQuery::negation_free() const
{
    std::function<bool(const Formula &)> walk = [&](const Formula &f) {
        if (f.kind == Kind::Not || f.kind == Kind::Implies)
            return false;
        return std::all_of(f.children.begin(), f.children.end(), [&](const FormulaPtr &c) { return walk(*c); });
    };
    return walk(*formula);
}

bool ConjunctiveQuery::simple() const
{
    std::set<std::string> seen;
    for (const auto &a : atoms)
        if (!seen.insert(a.relation).second)
            return false;
    return true;
}

FormulaPtr ConjunctiveQuery::to_formula() const
{
    std::vector<FormulaPtr> parts;
    for (const auto &a : atoms)
        parts.push_back(make_atom(a));
    for (const auto &c : conditions)
        parts.push_back(make_compare(c));
    return make_exists(bound_variables, make_and(std::move(parts)));
}

std::string ConjunctiveQuery::to_string() const
{
    std::string out;
    if (!bound_variables.empty())
        out = "exists " + join_names(bound_variables) + ": ";
    bool first = true;
    for (const auto &a : atoms) {
        out += (first ? "" : " and ") + a.to_string();
        first = false;
    }
    for (const auto &c : conditions) {
        out += (first ? "" : " and ") + c.to_string();
        first = false;
    }
    return out;
}

std::string to_string(const Query &query)
{
    return std::visit([](const auto &q) { return q.to_string(); }, query);
}

bool is_closed(const Query &query)
{
    if (const auto *cq = std::get_if<ConjunctiveQuery>(&query))
        return cq->closed();
    return true;
}

bool is_monotone(const Query &query)
{
    if (const auto *g = std::get_if<GroundQuery>(&query))
        return g->negation_free();
    return true;
}

ConjunctiveQuery normalize(const ConjunctiveQuery &query)
{
    std::set<std::string> free(query.free_variables.begin(), query.free_variables.end());
    std::set<std::string> seen;
    std::vector<Comparison> ties;
    std::size_t fresh = 0;
    ConjunctiveQuery out;
    out.free_variables = query.free_variables;
    for (const auto &atom : query.atoms) {
        Atom a{atom.relation, {}};
        for (const auto &t : atom.args) {
            if (is_variable(t) && seen.insert(as_variable(t).name).second) {
                a.args.push_back(t);
                continue;
            }
            // Control characters cannot appear in parsed identifiers, so these never collide.
            Term f = var("\x01" + std::to_string(++fresh));
            ties.push_back({CmpOp::Eq, f, t});
            a.args.push_back(std::move(f));
        }
        out.atoms.push_back(std::move(a));
    }
    out.conditions = query.conditions;
    out.conditions.insert(out.conditions.end(), ties.begin(), ties.end());

    std::map<std::string, std::string> renaming;
    std::size_t next = 0;
    for (const auto &a : out.atoms) {
        for (const auto &t : a.args) {
            const auto &name = as_variable(t).name;
            if (free.contains(name) || renaming.contains(name))
                continue;
            std::string candidate;
            do
                candidate = "v" + std::to_string(++next);
            while (free.contains(candidate));
            renaming.emplace(name, candidate);
            out.bound_variables.push_back(candidate);
        }
    }
    auto rename = [&](Term &t) {
        if (!is_variable(t))
            return;
        if (auto it = renaming.find(as_variable(t).name); it != renaming.end())
            t = var(it->second);
    };
    for (auto &a : out.atoms)
        for (auto &t : a.args)
            rename(t);
    for (auto &c : out.conditions) {
        rename(c.lhs);
        rename(c.rhs);
    }
    return out;
}

void validate(const Query &query, const Schema &schema)
{
    if (const auto *g = std::get_if<GroundQuery>(&query)) {
        if (!g->formula->ground())
            throw InvalidArgument("ground query contains variables or quantifiers: " + g->to_string());
        std::vector<Atom> atoms;
        std::vector<Comparison> comparisons;
        std::function<void(const Formula &)> walk = [&](const Formula &f) {
            if (f.kind == Kind::Atom)
                atoms.push_back(f.atom);
            else if (f.kind == Kind::Compare)
                comparisons.push_back(f.comparison);
            for (const auto &c : f.children)
                walk(*c);
        };
        walk(*g->formula);
        infer_variable_sorts(atoms, schema);
        check_conditions(comparisons, {});
        return;
    }
    const auto &cq = std::get<ConjunctiveQuery>(query);
    if (cq.atoms.empty())
        throw SchemaError("conjunctive query needs at least one relational atom");
    auto sorts = infer_variable_sorts(cq.atoms, schema);
    check_conditions(cq.conditions, sorts);
    std::set<std::string> bound(cq.bound_variables.begin(), cq.bound_variables.end());
    for (const auto &v : cq.free_variables) {
        if (!sorts.contains(v))
            throw SchemaError("free variable " + v + " occurs in no relational atom");
        if (bound.contains(v))
            throw SchemaError("variable " + v + " is both free and quantified");
    }
    for (const auto &v : cq.bound_variables)
        if (!sorts.contains(v))
            throw SchemaError("quantified variable " + v + " occurs in no relational atom");
    std::set<std::string> declared(cq.free_variables.begin(), cq.free_variables.end());
    declared.insert(bound.begin(), bound.end());
    for (const auto &[v, _] : sorts)
        if (!declared.contains(v))
            throw SchemaError("variable " + v + " is neither free nor quantified");
}

ConjunctiveQuery bind_free(const ConjunctiveQuery &query, const std::vector<Value> &values)
{
    if (values.size() != query.free_variables.size())
        throw InvalidArgument("bind_free: expected " + std::to_string(query.free_variables.size()) + " values");
    std::map<std::string, Value> subst;
    for (std::size_t i = 0; i < values.size(); ++i)
        subst.emplace(query.free_variables[i], values[i]);
    auto apply = [&](Term &t) {
        if (!is_variable(t))
            return;
        if (auto it = subst.find(as_variable(t).name); it != subst.end())
            t = it->second;
    };
    ConjunctiveQuery out = query;
    out.free_variables.clear();
    for (auto &a : out.atoms)
        for (auto &t : a.args)
            apply(t);
    for (auto &c : out.conditions) {
        apply(c.lhs);
        apply(c.rhs);
    }
    return out;
}

std::optional<GroundQuery> as_ground(const ConjunctiveQuery &query)
{
    if (!query.closed())
        return std::nullopt;
    std::map<std::string, std::string> parent;
    std::map<std::string, Value> constant;
    std::function<std::string(const std::string &)> find = [&](const std::string &v) -> std::string {
        auto it = parent.find(v);
        if (it == parent.end() || it->second == v)
            return v;
        return it->second = find(it->second);
    };
    bool contradiction = false;
    auto attach = [&](const std::string &root, const Value &c) {
        auto [it, inserted] = constant.try_emplace(root, c);
        if (!inserted && !(it->second == c))
            contradiction = true;
    };
    for (const auto &c : query.conditions) {
        if (c.op != CmpOp::Eq)
            continue;
        if (is_variable(c.lhs) && is_variable(c.rhs)) {
            auto a = find(as_variable(c.lhs).name), b = find(as_variable(c.rhs).name);
            if (a == b)
                continue;
            parent[a] = b;
            if (auto it = constant.find(a); it != constant.end()) {
                Value moved = it->second;
                constant.erase(it);
                attach(b, moved);
            }
        } else if (is_variable(c.lhs)) {
            attach(find(as_variable(c.lhs).name), as_value(c.rhs));
        } else if (is_variable(c.rhs)) {
            attach(find(as_variable(c.rhs).name), as_value(c.lhs));
        }
    }
    auto ground = [&](const Term &t) -> std::optional<Value> {
        if (!is_variable(t))
            return as_value(t);
        auto it = constant.find(find(as_variable(t).name));
        if (it == constant.end())
            return std::nullopt;
        return it->second;
    };
    std::vector<FormulaPtr> parts;
    for (const auto &a : query.atoms) {
        Atom g{a.relation, {}};
        for (const auto &t : a.args) {
            auto v = ground(t);
            if (!v)
                return std::nullopt;
            g.args.push_back(*v);
        }
        parts.push_back(make_atom(std::move(g)));
    }
    if (contradiction)
        return GroundQuery{make_false()};
    for (const auto &c : query.conditions) {
        auto l = ground(c.lhs), r = ground(c.rhs);
        if (!l || !r)
            return std::nullopt;
        if (!compare(c.op, *l, *r))
            return GroundQuery{make_false()};
    }
    return GroundQuery{make_and(std::move(parts))};
}

namespace {

bool match_extend(const Atom &atom, const Fact &fact, Binding &binding, std::vector<std::string> &added,
                  const std::set<std::string> *allowed)
{
    if (atom.relation != fact.relation || atom.args.size() != fact.values.size())
        return false;
    std::size_t mark = added.size();
    auto undo = [&] {
        for (std::size_t i = mark; i < added.size(); ++i)
            binding.erase(added[i]);
        added.resize(mark);
    };
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        const auto &t = atom.args[i];
        if (!is_variable(t)) {
            if (!(as_value(t) == fact.values[i])) {
                undo();
                return false;
            }
            continue;
        }
        const auto &name = as_variable(t).name;
        auto it = binding.find(name);
        if (it != binding.end()) {
            if (!(it->second == fact.values[i])) {
                undo();
                return false;
            }
            continue;
        }
        if (allowed && !allowed->contains(name)) {
            undo();
            throw InvalidArgument("unguarded variable " + name + " in atom " + atom.to_string());
        }
        binding.emplace(name, fact.values[i]);
        added.push_back(name);
    }
    return true;
}

void flatten_and(const FormulaPtr &f, std::vector<FormulaPtr> &out)
{
    if (f->kind == Kind::And) {
        for (const auto &c : f->children)
            flatten_and(c, out);
    } else {
        out.push_back(f);
    }
}

/// Enumerates bindings of `variables` produced by joining the atom conjuncts; `leaf` returns true to stop.
bool join(const std::vector<const Atom *> &generators, std::size_t index, const Instance &instance, Binding &binding,
          const std::set<std::string> &allowed, const std::function<bool()> &leaf)
{
    if (index == generators.size())
        return leaf();
    const Atom &atom = *generators[index];
    std::vector<std::string> added;
    for (const auto &fact : instance.relation(atom.relation)) {
        if (!match_extend(atom, fact, binding, added, &allowed))
            continue;
        bool stop = join(generators, index + 1, instance, binding, allowed, leaf);
        for (const auto &name : added)
            binding.erase(name);
        added.clear();
        if (stop)
            return true;
    }
    return false;
}

/// Runs `leaf` for each binding of `variables` satisfying the conjunction `conjuncts`.
bool guarded_search(const std::vector<std::string> &variables, const std::vector<FormulaPtr> &conjuncts,
                    const Instance &instance, Binding &binding, const std::function<bool()> &leaf)
{
    std::set<std::string> allowed(variables.begin(), variables.end());
    std::vector<const Atom *> generators;
    std::vector<FormulaPtr> filters;
    std::set<std::string> covered;
    for (const auto &c : conjuncts) {
        if (c->kind == Kind::Atom) {
            generators.push_back(&c->atom);
            for (const auto &t : c->atom.args)
                if (is_variable(t))
                    covered.insert(as_variable(t).name);
        } else {
            filters.push_back(c);
        }
    }
    for (const auto &v : variables)
        if (!covered.contains(v))
            throw InvalidArgument("unguarded variable " + v + ": no positive atom binds it");

    // Shadow outer bindings of the quantified variables for the duration of the search.
    std::vector<std::pair<std::string, Value>> saved;
    for (const auto &v : variables)
        if (auto it = binding.find(v); it != binding.end()) {
            saved.emplace_back(it->first, it->second);
            binding.erase(it);
        }
    bool stopped = join(generators, 0, instance, binding, allowed, [&] {
        for (const auto &f : filters)
            if (!evaluate(*f, instance, binding))
                return false;
        return leaf();
    });
    for (auto &[k, v] : saved)
        binding[k] = std::move(v);
    return stopped;
}

}

bool match(const Atom &atom, const Fact &fact, Binding &binding)
{
    std::vector<std::string> added;
    return match_extend(atom, fact, binding, added, nullptr);
}

const Value &resolve(const Term &term, const Binding &binding)
{
    if (!is_variable(term))
        return as_value(term);
    auto it = binding.find(as_variable(term).name);
    if (it == binding.end())
        throw InvalidArgument("unguarded variable " + as_variable(term).name);
    return it->second;
}

bool holds(const Comparison &comparison, const Binding &binding)
{
    return compare(comparison.op, resolve(comparison.lhs, binding), resolve(comparison.rhs, binding));
}

bool evaluate(const Formula &formula, const Instance &instance, Binding &binding)
{
    switch (formula.kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::Atom: {
            Fact fact{formula.atom.relation, {}};
            for (const auto &t : formula.atom.args)
                fact.values.push_back(resolve(t, binding));
            return instance.contains(fact);
        }
        case Kind::Compare: return holds(formula.comparison, binding);
        case Kind::Not: return !evaluate(*formula.children[0], instance, binding);
        case Kind::And:
            return std::all_of(formula.children.begin(), formula.children.end(),
                               [&](const FormulaPtr &c) { return evaluate(*c, instance, binding); });
        case Kind::Or:
            return std::any_of(formula.children.begin(), formula.children.end(),
                               [&](const FormulaPtr &c) { return evaluate(*c, instance, binding); });
        case Kind::Implies:
            return !evaluate(*formula.children[0], instance, binding) ||
                   evaluate(*formula.children[1], instance, binding);
        case Kind::Exists: {
            std::vector<FormulaPtr> conjuncts;
            flatten_and(formula.children[0], conjuncts);
            return guarded_search(formula.variables, conjuncts, instance, binding, [] { return true; });
        }
        case Kind::Forall: {
            const auto &body = formula.children[0];
            if (body->kind != Kind::Implies) {
                if (!formula.variables.empty())
                    throw InvalidArgument("universal quantifier without a guarding implication: " +
                                          formula.to_string());
                return evaluate(*body, instance, binding);
            }
            std::vector<FormulaPtr> antecedent;
            flatten_and(body->children[0], antecedent);
            const auto &consequent = body->children[1];
            bool counterexample = guarded_search(formula.variables, antecedent, instance, binding,
                                                 [&] { return !evaluate(*consequent, instance, binding); });
            return !counterexample;
        }
    }
    return false;
}

bool evaluate(const Formula &formula, const Instance &instance)
{
    Binding binding;
    return evaluate(formula, instance, binding);
}

bool evaluate(const Query &query, const Instance &instance)
{
    if (const auto *g = std::get_if<GroundQuery>(&query))
        return evaluate(*g->formula, instance);
    const auto &cq = std::get<ConjunctiveQuery>(query);
    if (!cq.closed())
        throw InvalidArgument("cannot evaluate an open query to a truth value: " + cq.to_string());
    return evaluate(*cq.to_formula(), instance);
}

std::vector<std::vector<Value>> answers(const ConjunctiveQuery &query, const Instance &instance)
{
    std::vector<std::string> variables = query.free_variables;
    variables.insert(variables.end(), query.bound_variables.begin(), query.bound_variables.end());
    std::vector<FormulaPtr> conjuncts;
    for (const auto &a : query.atoms)
        conjuncts.push_back(make_atom(a));
    for (const auto &c : query.conditions)
        conjuncts.push_back(make_compare(c));
    std::set<std::vector<Value>> found;
    Binding binding;
    guarded_search(variables, conjuncts, instance, binding, [&] {
        std::vector<Value> tuple;
        for (const auto &v : query.free_variables)
            tuple.push_back(binding.at(v));
        found.insert(std::move(tuple));
        return false;
    });
    return {found.begin(), found.end()};
}

}
