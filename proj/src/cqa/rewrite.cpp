#include "repairlab/cqa/cqa.hpp"

#include "repairlab/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace repairlab::cqa {

namespace {

/// Per-relation split of positions into determinant, dependent and remaining attributes.
struct Partition
{
    std::vector<bool> key;
    std::vector<bool> dependent;
};

Partition partition_for(const std::string &relation, const ConstraintSet &fds)
{
    const auto &rel = fds.schema().at(relation);
    std::optional<std::vector<std::size_t>> lhs;
    std::set<std::size_t> rhs;
    for (const auto &fd : fds.fds()) {
        if (fd.relation != relation)
            continue;
        if (lhs && *lhs != fd.lhs)
            throw UnsupportedError("relation " + relation +
                                   " has FDs with different left-hand sides; the rewriting needs at most one FD per "
                                   "relation");
        lhs = fd.lhs;
        rhs.insert(fd.rhs.begin(), fd.rhs.end());
    }
    Partition p{std::vector<bool>(rel.arity(), !lhs.has_value()), std::vector<bool>(rel.arity(), false)};
    if (lhs) {
        for (auto i : *lhs)
            p.key[i] = true;
        for (auto i : rhs)
            p.dependent[i] = true;
    }
    return p;
}

}

RewrittenSentence rewrite_simple_conjunctive(const ConjunctiveQuery &query, const ConstraintSet &fds)
{
    if (!query.closed())
        throw UnsupportedError("the rewriting applies to closed queries only");
    if (!query.simple())
        throw UnsupportedError("the rewriting applies to simple conjunctive queries (no repeated relation); "
                               "consistent answers to non-simple queries are coNP-hard already for one key FD");
    if (!fds.inds().empty() || !fds.denials().empty())
        throw UnsupportedError("the rewriting handles functional dependencies only");

    auto q = normalize(query);
    std::set<std::string> taken(q.bound_variables.begin(), q.bound_variables.end());
    auto fresh = [&](const std::string &stem) {
        for (std::size_t i = 1;; ++i) {
            auto name = stem + std::to_string(i);
            if (taken.insert(name).second)
                return name;
        }
    };

    std::vector<FormulaPtr> originals, primed, double_primed;
    std::vector<std::string> universal, inner;
    std::map<std::string, Term> shifted;
    for (const auto &atom : q.atoms) {
        auto part = partition_for(atom.relation, fds);
        Atom p{atom.relation, {}}, pp{atom.relation, {}};
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            const auto &name = as_variable(atom.args[i]).name;
            if (part.key[i]) {
                p.args.push_back(atom.args[i]);
                pp.args.push_back(atom.args[i]);
            } else if (part.dependent[i]) {
                auto z = fresh("zp");
                universal.push_back(z);
                p.args.push_back(var(z));
                pp.args.push_back(var(z));
                shifted.emplace(name, var(z));
            } else {
                auto w = fresh("wp");
                auto w2 = fresh("wpp");
                universal.push_back(w);
                inner.push_back(w2);
                p.args.push_back(var(w));
                pp.args.push_back(var(w2));
                shifted.emplace(name, var(w2));
            }
        }
        originals.push_back(make_atom(atom));
        primed.push_back(make_atom(std::move(p)));
        double_primed.push_back(make_atom(std::move(pp)));
    }
    auto shift = [&](const Term &t) {
        if (!is_variable(t))
            return t;
        auto it = shifted.find(as_variable(t).name);
        return it == shifted.end() ? t : it->second;
    };
    std::vector<FormulaPtr> body = originals;
    std::vector<FormulaPtr> consequent = double_primed;
    for (const auto &c : q.conditions) {
        body.push_back(make_compare(c));
        consequent.push_back(make_compare(Comparison{c.op, shift(c.lhs), shift(c.rhs)}));
    }
    auto check = make_forall(universal, make_implies(make_and(primed), make_exists(inner, make_and(consequent))));
    body.push_back(check);
    return {make_exists(q.bound_variables, make_and(std::move(body)))};
}

bool eval_fo(const Instance &r, const RewrittenSentence &sentence)
{
    return evaluate(*sentence.formula, r);
}

}
