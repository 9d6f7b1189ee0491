#include "repairlab/engine.hpp"

namespace repairlab {

std::string_view to_string(Engine engine)
{
    switch (engine) {
        case Engine::Auto: return "auto";
        case Engine::Denial: return "denial";
        case Engine::Acyclic: return "acyclic";
        case Engine::SingleKey: return "single-key";
        case Engine::Oracle: return "oracle";
    }
    return "?";
}

std::optional<Engine> parse_engine(std::string_view text)
{
    for (auto e : {Engine::Auto, Engine::Denial, Engine::Acyclic, Engine::SingleKey, Engine::Oracle})
        if (to_string(e) == text)
            return e;
    return std::nullopt;
}

}
