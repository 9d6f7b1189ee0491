#include "repairlab/error.hpp"

#include <sstream>

namespace repairlab {

std::string SourceSpan::to_string() const
{
    std::ostringstream os;
    os << (file.empty() ? "<input>" : file) << ':' << line << ':' << column_begin;
    if (column_end > column_begin + 1)
        os << '-' << column_end;
    return os.str();
}

ParseError::ParseError(SourceSpan span, const std::string &message)
    : Error(span.to_string() + ": " + message)
    , span_(std::move(span))
    , detail_(message)
{ }

CapExceededError::CapExceededError(std::size_t facts, std::size_t cap)
    : Error("instance has " + std::to_string(facts) + " facts, exceeding the exhaustive-search cap of " +
            std::to_string(cap))
    , facts_(facts)
    , cap_(cap)
{ }

}
