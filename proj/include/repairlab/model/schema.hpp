#pragma once

#include "repairlab/model/value.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repairlab {

struct Attribute
{
    std::string name;
    Sort sort = Sort::Symbolic;

    friend bool operator==(const Attribute &, const Attribute &) = default;
};

/// A declared key: a set of attribute positions, stored sorted and duplicate-free.
struct Key
{
    std::vector<std::size_t> positions;
    bool primary = false;

    friend bool operator==(const Key &, const Key &) = default;
};

class RelationSchema
{
  public:
    RelationSchema(std::string name, std::vector<Attribute> attributes);

    const std::string &name() const noexcept { return name_; }
    const std::vector<Attribute> &attributes() const noexcept { return attributes_; }
    const Attribute &attribute(std::size_t position) const { return attributes_.at(position); }
    std::size_t arity() const noexcept { return attributes_.size(); }
    std::optional<std::size_t> position_of(std::string_view attribute) const;
    /// Like `position_of` but throws `SchemaError` when the attribute does not exist.
    std::size_t require_position(std::string_view attribute) const;

    const std::vector<Key> &keys() const noexcept { return keys_; }
    const Key *primary_key() const;
    /// Adds a key. Throws `SchemaError` on out-of-range positions, a second primary key, or a duplicate key.
    void add_key(Key key);

    friend bool operator==(const RelationSchema &, const RelationSchema &) = default;

  private:
    std::string name_;
    std::vector<Attribute> attributes_;
    std::vector<Key> keys_;
};

/// Ordered list of relations with unique names.
class Schema
{
  public:
    Schema() = default;

    void add_relation(RelationSchema relation);
    const RelationSchema *find(std::string_view name) const;
    RelationSchema *find(std::string_view name);
    const RelationSchema &at(std::string_view name) const;
    std::optional<std::size_t> index_of(std::string_view name) const;

    const std::vector<RelationSchema> &relations() const noexcept { return relations_; }
    std::size_t size() const noexcept { return relations_.size(); }
    bool empty() const noexcept { return relations_.empty(); }

    friend bool operator==(const Schema &, const Schema &) = default;

  private:
    std::vector<RelationSchema> relations_;
};

}
