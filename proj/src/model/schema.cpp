#include "repairlab/model/schema.hpp"

#include "repairlab/error.hpp"

#include <algorithm>
#include <set>

namespace repairlab {

RelationSchema::RelationSchema(std::string name, std::vector<Attribute> attributes)
    : name_(std::move(name))
    , attributes_(std::move(attributes))
{
    if (name_.empty())
        throw SchemaError("relation name must not be empty");
    std::set<std::string_view> seen;
    for (const auto &attr : attributes_) {
        if (!seen.insert(attr.name).second)
            throw SchemaError("duplicate attribute '" + attr.name + "' in relation " + name_);
    }
}

std::optional<std::size_t> RelationSchema::position_of(std::string_view attribute) const
{
    for (std::size_t i = 0; i < attributes_.size(); ++i)
        if (attributes_[i].name == attribute)
            return i;
    return std::nullopt;
}

std::size_t RelationSchema::require_position(std::string_view attribute) const
{
    if (auto pos = position_of(attribute))
        return *pos;
    throw SchemaError("relation " + name_ + " has no attribute '" + std::string(attribute) + "'");
}

const Key *RelationSchema::primary_key() const
{
    auto it = std::find_if(keys_.begin(), keys_.end(), [](const Key &k) { return k.primary; });
    return it == keys_.end() ? nullptr : &*it;
}

void RelationSchema::add_key(Key key)
{
    std::sort(key.positions.begin(), key.positions.end());
    key.positions.erase(std::unique(key.positions.begin(), key.positions.end()), key.positions.end());
    if (key.positions.empty())
        throw SchemaError("key of relation " + name_ + " must name at least one attribute");
    for (auto p : key.positions)
        if (p >= arity())
            throw SchemaError("key of relation " + name_ + " is not a subset of its attributes");
    if (key.primary && primary_key())
        throw SchemaError("relation " + name_ + " already has a primary key");
    for (auto &existing : keys_) {
        if (existing.positions == key.positions) {
            if (key.primary && !existing.primary) {
                existing.primary = true;
                return;
            }
            throw SchemaError("duplicate key on relation " + name_);
        }
    }
    keys_.push_back(std::move(key));
}

void Schema::add_relation(RelationSchema relation)
{
    if (find(relation.name()))
        throw SchemaError("duplicate relation " + relation.name());
    relations_.push_back(std::move(relation));
}

const RelationSchema *Schema::find(std::string_view name) const
{
    for (const auto &r : relations_)
        if (r.name() == name)
            return &r;
    return nullptr;
}

RelationSchema *Schema::find(std::string_view name)
{
    for (auto &r : relations_)
        if (r.name() == name)
            return &r;
    return nullptr;
}

const RelationSchema &Schema::at(std::string_view name) const
{
    if (auto *r = find(name))
        return *r;
    throw SchemaError("unknown relation " + std::string(name));
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < relations_.size(); ++i)
        if (relations_[i].name() == name)
            return i;
    return std::nullopt;
}

}
