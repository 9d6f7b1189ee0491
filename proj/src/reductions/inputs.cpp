#include "repairlab/error.hpp"
#include "repairlab/reductions/reductions.hpp"

#include <charconv>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace repairlab::reductions {

bool CnfFormula::monotone_partitioned() const
{
    for (const auto &clause : clauses) {
        bool pos = false, neg = false;
        for (int lit : clause)
            (lit > 0 ? pos : neg) = true;
        if (pos && neg)
            return false;
    }
    return true;
}

bool CnfFormula::restricted() const
{
    if (variables != clauses.size())
        return false;
    std::map<int, int> occurrences;
    for (const auto &clause : clauses) {
        if (clause.size() > 3)
            return false;
        for (int lit : clause)
            if (++occurrences[std::abs(lit)] > 3)
                return false;
    }
    return true;
}

std::string CnfFormula::to_string() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        if (i)
            os << " & ";
        os << '(';
        for (std::size_t k = 0; k < clauses[i].size(); ++k) {
            int lit = clauses[i][k];
            os << (k ? " | " : "") << (lit < 0 ? "~p" : "p") << std::abs(lit);
        }
        os << ')';
    }
    return os.str();
}

CnfFormula make_cnf(std::size_t variables, std::vector<std::vector<int>> clauses)
{
    for (const auto &clause : clauses)
        for (int lit : clause)
            if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > variables)
                throw InvalidArgument("literal " + std::to_string(lit) + " out of range for " +
                                      std::to_string(variables) + " variables");
    return CnfFormula{variables, std::move(clauses)};
}

CnfFormula parse_cnf(std::string_view text)
{
    std::vector<std::vector<int>> clauses;
    std::vector<int> current;
    bool open = false;
    std::size_t variables = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r' || text[i] == ',') {
            ++i;
            continue;
        }
        int lit = 0;
        auto [end, ec] = std::from_chars(text.data() + i, text.data() + text.size(), lit);
        if (ec != std::errc{})
            throw InvalidArgument("malformed CNF near offset " + std::to_string(i) + ": expected an integer literal");
        i = static_cast<std::size_t>(end - text.data());
        if (lit == 0) {
            clauses.push_back(std::move(current));
            current.clear();
            open = false;
        } else {
            current.push_back(lit);
            variables = std::max(variables, static_cast<std::size_t>(std::abs(lit)));
            open = true;
        }
    }
    if (open)
        throw InvalidArgument("malformed CNF: last clause is not terminated by 0");
    return make_cnf(variables, std::move(clauses));
}

Graph parse_graph(std::string_view text)
{
    auto fail = [&](const std::string &msg) -> InvalidArgument {
        return InvalidArgument("malformed graph '" + std::string(text) + "': " + msg);
    };
    auto number = [&](std::string_view s) {
        std::size_t n = 0;
        auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec != std::errc{} || end != s.data() + s.size() || s.empty())
            throw fail("expected a node number, found '" + std::string(s) + "'");
        return n;
    };
    Graph g;
    auto colon = text.find(':');
    g.nodes = number(text.substr(0, colon));
    if (colon == std::string_view::npos)
        return g;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.empty())
            continue;
        auto dash = item.find('-');
        if (dash == std::string_view::npos)
            throw fail("edge '" + std::string(item) + "' is not of the form u-v");
        std::size_t u = number(item.substr(0, dash)), v = number(item.substr(dash + 1));
        if (u >= g.nodes || v >= g.nodes)
            throw fail("edge '" + std::string(item) + "' names a node outside the " + std::to_string(g.nodes) +
                       " declared");
        if (u == v)
            throw fail("self-loop at node " + std::to_string(u));
        if (!seen.insert(std::minmax(u, v)).second)
            throw fail("duplicate edge " + std::string(item));
        g.edges.emplace_back(u, v);
    }
    return g;
}

}
