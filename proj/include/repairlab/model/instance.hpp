#pragma once

#include "repairlab/model/schema.hpp"
#include "repairlab/model/value.hpp"

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ranges>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace repairlab {

/// A ground atom P(a1, ..., ak).
struct Fact
{
    std::string relation;
    std::vector<Value> values;

    /// `P('a', 3)`
    std::string to_string() const;

    friend bool operator==(const Fact &, const Fact &) = default;
    friend std::strong_ordering operator<=>(const Fact &lhs, const Fact &rhs);
};

/// A finite set of facts. Iteration order is canonical: by relation name, then lexicographically by tuple.
class Instance
{
    using Set = std::set<Fact>;

  public:
    using const_iterator = Set::const_iterator;
    using value_type = Fact;

    Instance() = default;
    Instance(std::initializer_list<Fact> facts) : facts_(facts) { }
    template<std::input_iterator It>
    Instance(It first, It last) : facts_(first, last)
    { }

    bool insert(Fact fact) { return facts_.insert(std::move(fact)).second; }
    bool erase(const Fact &fact) { return facts_.erase(fact) > 0; }
    bool contains(const Fact &fact) const { return facts_.contains(fact); }

    std::size_t size() const noexcept { return facts_.size(); }
    bool empty() const noexcept { return facts_.empty(); }
    const_iterator begin() const noexcept { return facts_.begin(); }
    const_iterator end() const noexcept { return facts_.end(); }

    /// The facts of one relation, in canonical order.
    std::ranges::subrange<const_iterator> relation(std::string_view name) const;
    std::size_t relation_size(std::string_view name) const;

    bool subset_of(const Instance &other) const;
    /// Facts of `*this` that are not in `other`.
    Instance minus(const Instance &other) const;
    std::vector<Fact> to_vector() const { return {facts_.begin(), facts_.end()}; }

    friend bool operator==(const Instance &, const Instance &) = default;

  private:
    Set facts_;
};

/// Throws `TypeError` if some fact names an unknown relation or has the wrong arity or sorts.
void typecheck(const Fact &fact, const Schema &schema);
void typecheck(const Instance &instance, const Schema &schema);

}
