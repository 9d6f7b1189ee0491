#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace repairlab {

/// Engine selector shared by repair checking and query answering.
enum class Engine : std::uint8_t { Auto, Denial, Acyclic, SingleKey, Oracle };

std::string_view to_string(Engine engine);
std::optional<Engine> parse_engine(std::string_view text);

struct EngineOptions
{
    Engine engine = Engine::Auto;
    /// Permits the exhaustive oracle when no polynomial engine applies.
    bool allow_oracle = false;
    std::size_t oracle_cap = 18;
};

}
