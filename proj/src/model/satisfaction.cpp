#include "repairlab/model/satisfaction.hpp"

#include "repairlab/model/query.hpp"

#include <map>
#include <set>

namespace repairlab {

namespace {

bool ground_rest(const DenialConstraint &denial, std::size_t index, const Instance &instance, Binding &binding,
                 std::vector<const Fact *> &chosen,
                 const std::function<bool(const std::vector<const Fact *> &)> &visit)
{
    if (index == denial.atoms.size()) {
        for (const auto &c : denial.conditions)
            if (!holds(c, binding))
                return false;
        return visit(chosen);
    }
    const Atom &atom = denial.atoms[index];
    for (const auto &fact : instance.relation(atom.relation)) {
        Binding extended = binding;
        if (!match(atom, fact, extended))
            continue;
        chosen.push_back(&fact);
        bool stop = ground_rest(denial, index + 1, instance, extended, chosen, visit);
        chosen.pop_back();
        if (stop)
            return true;
    }
    return false;
}

}

std::vector<Value> project(const Fact &fact, const std::vector<std::size_t> &positions)
{
    std::vector<Value> out;
    out.reserve(positions.size());
    for (auto p : positions)
        out.push_back(fact.values.at(p));
    return out;
}

void for_each_grounding(const DenialConstraint &denial, const Instance &instance,
                        const std::function<bool(const std::vector<const Fact *> &)> &visit)
{
    Binding binding;
    std::vector<const Fact *> chosen;
    ground_rest(denial, 0, instance, binding, chosen, visit);
}

std::optional<Violation> find_violation(const Instance &instance, const DenialConstraint &denial)
{
    std::optional<Violation> found;
    for_each_grounding(denial, instance, [&](const std::vector<const Fact *> &facts) {
        std::set<Fact> distinct;
        for (const auto *f : facts)
            distinct.insert(*f);
        found = Violation{"denial " + denial.to_string(), {distinct.begin(), distinct.end()}};
        return true;
    });
    return found;
}

std::optional<Violation> find_violation(const Instance &instance, const FunctionalDependency &fd,
                                        const Schema &schema)
{
    std::map<std::vector<Value>, const Fact *> seen;
    for (const auto &fact : instance.relation(fd.relation)) {
        auto [it, inserted] = seen.try_emplace(project(fact, fd.lhs), &fact);
        if (!inserted && project(*it->second, fd.rhs) != project(fact, fd.rhs))
            return Violation{"fd " + to_string(fd, schema), {*it->second, fact}};
    }
    return std::nullopt;
}

std::optional<Violation> find_violation(const Instance &instance, const InclusionDependency &ind,
                                        const Schema &schema)
{
    std::set<std::vector<Value>> targets;
    for (const auto &fact : instance.relation(ind.target))
        targets.insert(project(fact, ind.target_positions));
    for (const auto &fact : instance.relation(ind.source))
        if (!targets.contains(project(fact, ind.source_positions)))
            return Violation{"ind " + to_string(ind, schema), {fact}};
    return std::nullopt;
}

std::optional<Violation> find_violation(const Instance &instance, const ConstraintSet &ics)
{
    for (const auto &fd : ics.fds())
        if (auto v = find_violation(instance, fd, ics.schema()))
            return v;
    for (const auto &ind : ics.inds())
        if (auto v = find_violation(instance, ind, ics.schema()))
            return v;
    for (const auto &d : ics.denials())
        if (auto v = find_violation(instance, d))
            return v;
    return std::nullopt;
}

bool satisfies(const Instance &instance, const ConstraintSet &ics)
{
    return !find_violation(instance, ics).has_value();
}

}
