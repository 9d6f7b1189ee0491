#include "repairlab/model/instance.hpp"

#include "repairlab/error.hpp"

#include <algorithm>

namespace repairlab {

std::string Fact::to_string() const
{
    std::string out = relation + "(";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        out += values[i].to_literal();
    }
    return out + ")";
}

std::strong_ordering operator<=>(const Fact &lhs, const Fact &rhs)
{
    if (auto c = lhs.relation.compare(rhs.relation) <=> 0; c != 0)
        return c;
    return std::lexicographical_compare_three_way(lhs.values.begin(), lhs.values.end(), rhs.values.begin(),
                                                  rhs.values.end());
}

std::ranges::subrange<Instance::const_iterator> Instance::relation(std::string_view name) const
{
    auto lo = facts_.lower_bound(Fact{std::string(name), {}});
    auto hi = lo;
    while (hi != facts_.end() && hi->relation == name)
        ++hi;
    return {lo, hi};
}

std::size_t Instance::relation_size(std::string_view name) const
{
    auto r = relation(name);
    return static_cast<std::size_t>(std::ranges::distance(r));
}

bool Instance::subset_of(const Instance &other) const
{
    return std::includes(other.facts_.begin(), other.facts_.end(), facts_.begin(), facts_.end());
}

Instance Instance::minus(const Instance &other) const
{
    Instance out;
    std::set_difference(facts_.begin(), facts_.end(), other.facts_.begin(), other.facts_.end(),
                        std::inserter(out.facts_, out.facts_.end()));
    return out;
}

void typecheck(const Fact &fact, const Schema &schema)
{
    const auto *rel = schema.find(fact.relation);
    if (!rel)
        throw TypeError("fact " + fact.to_string() + " names unknown relation " + fact.relation);
    if (rel->arity() != fact.values.size())
        throw TypeError("fact " + fact.to_string() + " has arity " + std::to_string(fact.values.size()) +
                        ", relation " + rel->name() + " expects " + std::to_string(rel->arity()));
    for (std::size_t i = 0; i < fact.values.size(); ++i) {
        if (fact.values[i].sort() != rel->attribute(i).sort)
            throw TypeError("fact " + fact.to_string() + ": attribute " + rel->attribute(i).name + " expects " +
                            std::string(to_string(rel->attribute(i).sort)) + " value");
    }
}

void typecheck(const Instance &instance, const Schema &schema)
{
    for (const auto &f : instance)
        typecheck(f, schema);
}

}
