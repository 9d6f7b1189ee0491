#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace repairlab {

/// Location of a token or record inside an input file. Lines and columns are 1-based; `column_end` is exclusive.
struct SourceSpan
{
    std::string file;
    std::size_t line = 0;
    std::size_t column_begin = 0;
    std::size_t column_end = 0;

    std::string to_string() const;
};

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Always carries the offending span.
class ParseError : public Error
{
  public:
    ParseError(SourceSpan span, const std::string &message);

    const SourceSpan &span() const noexcept { return span_; }
    const std::string &detail() const noexcept { return detail_; }

  private:
    SourceSpan span_;
    std::string detail_;
};

/// Schema-level inconsistency: duplicate names, unknown relations or attributes, bad keys.
class SchemaError : public Error
{
  public:
    using Error::Error;
};

/// Ill-typed fact, term, or comparison.
class TypeError : public Error
{
  public:
    using Error::Error;
};

/// The requested engine does not cover the constraint class or query shape. `reason` names the blocking result.
class UnsupportedError : public Error
{
  public:
    using Error::Error;
};

/// Exhaustive search refused because the instance exceeds the configured fact cap.
class CapExceededError : public Error
{
  public:
    CapExceededError(std::size_t facts, std::size_t cap);

    std::size_t facts() const noexcept { return facts_; }
    std::size_t cap() const noexcept { return cap_; }

  private:
    std::size_t facts_;
    std::size_t cap_;
};

/// A file could not be read or written.
class IoError : public Error
{
  public:
    using Error::Error;
};

/// Precondition of an operation violated by its arguments (unknown vertex, malformed generator input, ...).
class InvalidArgument : public Error
{
  public:
    using Error::Error;
};

}
