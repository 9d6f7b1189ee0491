#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace repairlab {

/// Attribute domain. Symbolic constants are uninterpreted; numeric constants are 64-bit signed integers.
enum class Sort : std::uint8_t { Symbolic, Numeric };

std::string_view to_string(Sort sort);

/// A constant of either domain. The two domains are disjoint; ordering between a symbol and a number is only
/// used for canonical sorting, never for evaluating comparisons.
class Value
{
  public:
    Value() : repr_(std::string{}) { }

    static Value symbol(std::string text) { return Value(Repr(std::in_place_index<0>, std::move(text))); }
    static Value number(std::int64_t n) { return Value(Repr(std::in_place_index<1>, n)); }

    Sort sort() const noexcept { return repr_.index() == 0 ? Sort::Symbolic : Sort::Numeric; }
    bool is_symbol() const noexcept { return repr_.index() == 0; }
    bool is_number() const noexcept { return repr_.index() == 1; }

    const std::string &as_symbol() const { return std::get<0>(repr_); }
    std::int64_t as_number() const { return std::get<1>(repr_); }

    /// Literal form used by the text formats: `'text'` with doubled quotes, or a decimal integer.
    std::string to_literal() const;
    /// Bare form used in CSV cells and human-readable output.
    std::string to_plain() const;

    std::size_t hash() const noexcept;

    friend bool operator==(const Value &, const Value &) = default;
    friend std::strong_ordering operator<=>(const Value &lhs, const Value &rhs);

  private:
    using Repr = std::variant<std::string, std::int64_t>;
    explicit Value(Repr repr) : repr_(std::move(repr)) { }

    Repr repr_;
};

inline Value sym(std::string text) { return Value::symbol(std::move(text)); }
inline Value num(std::int64_t n) { return Value::number(n); }

struct ValueHash
{
    std::size_t operator()(const Value &v) const noexcept { return v.hash(); }
};

}
