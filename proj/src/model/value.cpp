#include "repairlab/model/value.hpp"

#include <functional>

namespace repairlab {

std::string_view to_string(Sort sort)
{
    return sort == Sort::Symbolic ? "sym" : "num";
}

std::string Value::to_literal() const
{
    if (is_number())
        return std::to_string(as_number());
    std::string out = "'";
    for (char c : as_symbol()) {
        if (c == '\'')
            out += '\'';
        out += c;
    }
    out += '\'';
    return out;
}

std::string Value::to_plain() const
{
    return is_number() ? std::to_string(as_number()) : as_symbol();
}

std::size_t Value::hash() const noexcept
{
    if (is_number())
        return std::hash<std::int64_t>{}(as_number()) * 31u + 1u;
    return std::hash<std::string>{}(as_symbol());
}

std::strong_ordering operator<=>(const Value &lhs, const Value &rhs)
{
    if (lhs.repr_.index() != rhs.repr_.index())
        return lhs.repr_.index() <=> rhs.repr_.index();
    if (lhs.is_number())
        return lhs.as_number() <=> rhs.as_number();
    return lhs.as_symbol().compare(rhs.as_symbol()) <=> 0;
}

}
