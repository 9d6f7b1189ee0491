#include "repairlab/cqa/cqa.hpp"

#include "repairlab/error.hpp"
#include "repairlab/hypergraph/hypergraph.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace repairlab::cqa {

namespace {

using Kind = Formula::Kind;
using hypergraph::ConflictHypergraph;
using hypergraph::VertexId;
using hypergraph::VertexSet;

/// Negation normal form with comparisons evaluated. Constants are propagated, so True/False only survive at the
/// root.
FormulaPtr nnf(const Formula &f, bool negated)
{
    switch (f.kind) {
        case Kind::True: return negated ? make_false() : make_true();
        case Kind::False: return negated ? make_true() : make_false();
        case Kind::Atom: {
            auto a = make_atom(f.atom);
            return negated ? make_not(a) : a;
        }
        case Kind::Compare: {
            const auto &c = f.comparison;
            if (is_variable(c.lhs) || is_variable(c.rhs))
                throw InvalidArgument("ground query contains a variable: " + c.to_string());
            bool value = compare(c.op, as_value(c.lhs), as_value(c.rhs));
            return value != negated ? make_true() : make_false();
        }
        case Kind::Not: return nnf(*f.children[0], !negated);
        case Kind::And:
        case Kind::Or: {
            bool conjunction = (f.kind == Kind::And) != negated;
            std::vector<FormulaPtr> parts;
            for (const auto &c : f.children) {
                auto p = nnf(*c, negated);
                if (p->kind == (conjunction ? Kind::True : Kind::False))
                    continue;
                if (p->kind == (conjunction ? Kind::False : Kind::True))
                    return p;
                parts.push_back(std::move(p));
            }
            return conjunction ? make_and(std::move(parts)) : make_or(std::move(parts));
        }
        case Kind::Implies: return nnf(*make_or({make_not(f.children[0]), f.children[1]}), negated);
        default: throw InvalidArgument("not a quantifier-free ground formula: " + f.to_string());
    }
}

bool tautology(const Clause &clause)
{
    for (std::size_t i = 0; i + 1 < clause.size(); ++i)
        if (clause[i].fact == clause[i + 1].fact && clause[i].positive != clause[i + 1].positive)
            return true;
    return false;
}

void tidy(Clause &clause)
{
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
}

std::vector<Clause> cnf_of(const Formula &f)
{
    switch (f.kind) {
        case Kind::True: return {};
        case Kind::False: return {Clause{}};
        case Kind::Atom: return {Clause{Literal{Fact{f.atom.relation, {}}, true}}};
        case Kind::Not: return {Clause{Literal{Fact{f.children[0]->atom.relation, {}}, false}}};
        case Kind::And: {
            std::vector<Clause> out;
            for (const auto &c : f.children) {
                auto part = cnf_of(*c);
                out.insert(out.end(), part.begin(), part.end());
            }
            return out;
        }
        case Kind::Or: {
            std::vector<Clause> out{Clause{}};
            for (const auto &c : f.children) {
                auto part = cnf_of(*c);
                std::vector<Clause> next;
                for (const auto &a : out)
                    for (const auto &b : part) {
                        Clause merged = a;
                        merged.insert(merged.end(), b.begin(), b.end());
                        tidy(merged);
                        if (!tautology(merged))
                            next.push_back(std::move(merged));
                    }
                out = std::move(next);
            }
            return out;
        }
        default: throw InvalidArgument("unexpected formula in CNF conversion");
    }
}

Fact ground_fact(const Atom &atom)
{
    Fact fact{atom.relation, {}};
    for (const auto &t : atom.args) {
        if (is_variable(t))
            throw InvalidArgument("ground query contains a variable in " + atom.to_string());
        fact.values.push_back(as_value(t));
    }
    return fact;
}

/// Rebuilds literal facts after `cnf_of`, which only carries relation names through the distribution step.
std::vector<Clause> cnf_with_facts(const Formula &f)
{
    // Number the atoms so that literals can be mapped back to their facts.
    std::vector<Fact> facts;
    std::function<FormulaPtr(const Formula &)> tag = [&](const Formula &g) -> FormulaPtr {
        auto copy = std::make_shared<Formula>(g);
        if (g.kind == Kind::Atom) {
            copy->atom.relation = std::to_string(facts.size());
            facts.push_back(ground_fact(g.atom));
            return copy;
        }
        copy->children.clear();
        for (const auto &c : g.children)
            copy->children.push_back(tag(*c));
        return copy;
    };
    auto tagged = tag(f);
    auto clauses = cnf_of(*tagged);
    for (auto &clause : clauses) {
        for (auto &lit : clause)
            lit.fact = facts[std::stoul(lit.fact.relation)];
        tidy(clause);
    }
    std::erase_if(clauses, tautology);
    std::sort(clauses.begin(), clauses.end());
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
    return clauses;
}

/// Searches a repair falsifying `clause`: every negated fact present, every plain fact absent.
class ClauseWitness
{
  public:
    ClauseWitness(const ConflictHypergraph &h, const Clause &clause) : h_(h), members_(h.vertex_count(), false)
    {
        for (const auto &lit : clause) {
            auto id = h.id_of(lit.fact);
            if (!lit.positive) {
                if (!id || h.in_singleton_edge(*id))
                    feasible_ = false;
                else
                    present_.push_back(*id);
            } else if (id) {
                absent_.push_back(*id);
            }
        }
    }

    std::optional<VertexSet> find()
    {
        if (!feasible_)
            return std::nullopt;
        for (auto v : present_)
            members_[v] = true;
        for (auto v : present_)
            if (!independent_at(v))
                return std::nullopt;
        if (!choose(0))
            return std::nullopt;
        std::vector<VertexId> order(h_.vertex_count());
        for (VertexId v = 0; v < order.size(); ++v)
            order[v] = v;
        return h_.greedy_extend(members_, order);
    }

  private:
    /// No edge through `v` lies inside the current set.
    bool independent_at(VertexId v) const
    {
        for (auto ei : h_.incident(v)) {
            const auto &e = h_.edges()[ei];
            if (std::all_of(e.begin(), e.end(), [&](VertexId u) { return members_[u]; }))
                return false;
        }
        return true;
    }

    bool choose(std::size_t j)
    {
        if (j == absent_.size())
            return true;
        VertexId t = absent_[j];
        if (members_[t])
            return false;
        for (auto ei : h_.incident(t)) {
            const auto &e = h_.edges()[ei];
            std::vector<VertexId> added;
            bool ok = true;
            for (auto u : e) {
                if (u == t || members_[u])
                    continue;
                members_[u] = true;
                added.push_back(u);
            }
            for (auto u : added)
                if (!independent_at(u)) {
                    ok = false;
                    break;
                }
            // The absent facts chosen so far must stay out.
            for (std::size_t k = 0; ok && k <= j; ++k)
                if (members_[absent_[k]])
                    ok = false;
            if (ok && choose(j + 1))
                return true;
            for (auto u : added)
                members_[u] = false;
        }
        return false;
    }

    const ConflictHypergraph &h_;
    VertexSet members_;
    std::vector<VertexId> present_;
    std::vector<VertexId> absent_;
    bool feasible_ = true;
};

}

std::vector<Clause> to_cnf(const Formula &formula)
{
    return cnf_with_facts(*nnf(formula, false));
}

CqaVerdict cqa_ground_qf(const Instance &r, const std::vector<DenialConstraint> &constraints,
                         const GroundQuery &query)
{
    if (!query.formula->ground())
        throw InvalidArgument("cqa_ground_qf needs a ground query: " + query.to_string());
    auto clauses = to_cnf(*query.formula);
    auto h = hypergraph::build(r, constraints);
    CqaVerdict verdict{true, std::nullopt, "ground-qf", {}};
    for (const auto &clause : clauses) {
        if (auto repair = ClauseWitness(h, clause).find()) {
            verdict.consistent = false;
            verdict.witness = h.to_instance(*repair);
            return verdict;
        }
    }
    return verdict;
}

}
