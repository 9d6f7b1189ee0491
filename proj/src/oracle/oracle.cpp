#include "repairlab/oracle/oracle.hpp"

#include "repairlab/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

namespace repairlab::oracle {

namespace {

using FactId = std::size_t;

/// A fact of an IND source relation together with the facts that can supply its target tuple. Demands a fact
/// satisfies by itself are dropped: they hold whenever the fact is present.
struct Demand
{
    FactId fact;
    std::vector<FactId> supports;
};

/// Violation structure computed by brute force, independently of the hypergraph module.
struct Problem
{
    std::vector<Fact> facts;
    std::vector<std::vector<FactId>> edges;
    std::vector<std::vector<std::size_t>> incident;
    std::vector<Demand> demands;
    std::vector<std::vector<std::size_t>> demands_of;
    std::vector<std::vector<std::size_t>> supported_by;
};

std::vector<Value> projection(const Fact &f, const std::vector<std::size_t> &positions)
{
    std::vector<Value> out;
    for (auto p : positions)
        out.push_back(f.values[p]);
    return out;
}

bool unify(const Atom &atom, const Fact &fact, std::map<std::string, Value> &env)
{
    if (atom.relation != fact.relation || atom.args.size() != fact.values.size())
        return false;
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        const auto &t = atom.args[i];
        if (std::holds_alternative<Value>(t)) {
            if (!(std::get<Value>(t) == fact.values[i]))
                return false;
            continue;
        }
        auto [it, inserted] = env.try_emplace(std::get<Variable>(t).name, fact.values[i]);
        if (!inserted && !(it->second == fact.values[i]))
            return false;
    }
    return true;
}

const Value &term_value(const Term &t, const std::map<std::string, Value> &env)
{
    if (std::holds_alternative<Value>(t))
        return std::get<Value>(t);
    return env.at(std::get<Variable>(t).name);
}

void ground_denial(const Problem &p, const DenialConstraint &d, std::size_t index,
                   std::vector<FactId> &chosen, std::set<std::vector<FactId>> &out)
{
    if (index == d.atoms.size()) {
        std::map<std::string, Value> env;
        for (std::size_t i = 0; i < chosen.size(); ++i)
            if (!unify(d.atoms[i], p.facts[chosen[i]], env))
                return;
        for (const auto &c : d.conditions)
            if (!compare(c.op, term_value(c.lhs, env), term_value(c.rhs, env)))
                return;
        std::vector<FactId> e = chosen;
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        out.insert(std::move(e));
        return;
    }
    for (FactId f = 0; f < p.facts.size(); ++f) {
        if (p.facts[f].relation != d.atoms[index].relation)
            continue;
        chosen.push_back(f);
        ground_denial(p, d, index + 1, chosen, out);
        chosen.pop_back();
    }
}

Problem make_problem(const Instance &r, const ConstraintSet &ics)
{
    Problem p;
    p.facts = r.to_vector();
    std::set<std::vector<FactId>> edges;
    for (const auto &fd : ics.fds())
        for (FactId i = 0; i < p.facts.size(); ++i)
            for (FactId j = i + 1; j < p.facts.size(); ++j) {
                const auto &a = p.facts[i], &b = p.facts[j];
                if (a.relation == fd.relation && b.relation == fd.relation &&
                    projection(a, fd.lhs) == projection(b, fd.lhs) && projection(a, fd.rhs) != projection(b, fd.rhs))
                    edges.insert({i, j});
            }
    for (const auto &d : ics.denials()) {
        std::vector<FactId> chosen;
        ground_denial(p, d, 0, chosen, edges);
    }
    p.edges.assign(edges.begin(), edges.end());
    p.incident.assign(p.facts.size(), {});
    for (std::size_t e = 0; e < p.edges.size(); ++e)
        for (auto f : p.edges[e])
            p.incident[f].push_back(e);

    p.demands_of.assign(p.facts.size(), {});
    p.supported_by.assign(p.facts.size(), {});
    for (const auto &ind : ics.inds()) {
        for (FactId f = 0; f < p.facts.size(); ++f) {
            if (p.facts[f].relation != ind.source)
                continue;
            auto wanted = projection(p.facts[f], ind.source_positions);
            Demand d{f, {}};
            bool self = false;
            for (FactId g = 0; g < p.facts.size(); ++g) {
                if (p.facts[g].relation != ind.target || projection(p.facts[g], ind.target_positions) != wanted)
                    continue;
                if (g == f)
                    self = true;
                d.supports.push_back(g);
            }
            if (self)
                continue;
            std::size_t id = p.demands.size();
            p.demands_of[f].push_back(id);
            for (auto g : d.supports)
                p.supported_by[g].push_back(id);
            p.demands.push_back(std::move(d));
        }
    }
    return p;
}

enum class State : std::uint8_t { Undecided, In, Out };

/// Is there a nonempty set X of facts outside `in` (all marked Out) such that in + X is consistent?
class ExtensionSearch
{
  public:
    ExtensionSearch(const Problem &p, const std::vector<State> &state) : p_(p), state_(state) { }

    bool exists()
    {
        std::size_t n = p_.facts.size();
        candidate_.assign(n, false);
        for (FactId f = 0; f < n; ++f)
            candidate_[f] = state_[f] == State::Out && !edge_blocked_by_in(f);
        // Greatest fixpoint: a candidate needs every demand supportable by facts in the base set or candidates.
        for (bool changed = true; changed;) {
            changed = false;
            for (FactId f = 0; f < n; ++f) {
                if (!candidate_[f])
                    continue;
                for (auto d : p_.demands_of[f]) {
                    const auto &sup = p_.demands[d].supports;
                    bool ok = std::any_of(sup.begin(), sup.end(),
                                          [&](FactId g) { return state_[g] == State::In || candidate_[g]; });
                    if (!ok) {
                        candidate_[f] = false;
                        changed = true;
                        break;
                    }
                }
            }
        }
        chosen_.assign(n, false);
        excluded_.assign(n, false);
        for (FactId seed = 0; seed < n; ++seed) {
            if (!candidate_[seed])
                continue;
            if (try_add(seed)) {
                if (complete())
                    return true;
                chosen_[seed] = false;
            }
            // Sets containing this seed have been explored.
            excluded_[seed] = true;
        }
        return false;
    }

    /// The facts added by the last successful `exists`.
    const std::vector<bool> &chosen() const noexcept { return chosen_; }

  private:
    bool present(FactId f) const { return state_[f] == State::In || chosen_[f]; }

    bool edge_blocked_by_in(FactId f) const
    {
        for (auto e : p_.incident[f]) {
            const auto &edge = p_.edges[e];
            if (std::all_of(edge.begin(), edge.end(), [&](FactId g) { return g == f || state_[g] == State::In; }))
                return true;
        }
        return false;
    }

    bool try_add(FactId f)
    {
        chosen_[f] = true;
        for (auto e : p_.incident[f]) {
            const auto &edge = p_.edges[e];
            if (std::all_of(edge.begin(), edge.end(), [&](FactId g) { return present(g); })) {
                chosen_[f] = false;
                return false;
            }
        }
        return true;
    }

    /// Satisfies the first open demand of a chosen fact by branching over its available supports.
    bool complete()
    {
        for (FactId f = 0; f < p_.facts.size(); ++f) {
            if (!chosen_[f])
                continue;
            for (auto d : p_.demands_of[f]) {
                const auto &sup = p_.demands[d].supports;
                if (std::any_of(sup.begin(), sup.end(), [&](FactId g) { return present(g); }))
                    continue;
                for (auto g : sup) {
                    if (!candidate_[g] || excluded_[g] || chosen_[g])
                        continue;
                    if (!try_add(g))
                        continue;
                    if (complete())
                        return true;
                    chosen_[g] = false;
                }
                return false;
            }
        }
        return true;
    }

    const Problem &p_;
    const std::vector<State> &state_;
    std::vector<bool> candidate_;
    std::vector<bool> chosen_;
    std::vector<bool> excluded_;
};

/// Depth-first search over in/out decisions, fact by fact. Partial assignments are pruned when the in-set
/// contains an edge, an in-fact loses all possible supports, or an out-fact can no longer be blocked.
class RepairSearch
{
  public:
    RepairSearch(const Problem &p, const RepairVisitor &visit, const PrunePredicate &prune)
        : p_(p)
        , visit_(visit)
        , prune_(prune)
        , state_(p.facts.size(), State::Undecided)
    { }

    void run() { descend(0); }

  private:
    bool blockable(FactId u) const
    {
        for (auto e : p_.incident[u]) {
            const auto &edge = p_.edges[e];
            if (std::all_of(edge.begin(), edge.end(), [&](FactId g) { return g == u || state_[g] != State::Out; }))
                return true;
        }
        for (auto d : p_.demands_of[u]) {
            const auto &sup = p_.demands[d].supports;
            if (std::none_of(sup.begin(), sup.end(), [&](FactId g) { return state_[g] == State::In; }))
                return true;
        }
        return false;
    }

    bool supportable(std::size_t demand) const
    {
        const auto &sup = p_.demands[demand].supports;
        return std::any_of(sup.begin(), sup.end(), [&](FactId g) { return state_[g] != State::Out; });
    }

    bool admits_in(FactId f) const
    {
        for (auto e : p_.incident[f]) {
            const auto &edge = p_.edges[e];
            if (std::all_of(edge.begin(), edge.end(), [&](FactId g) { return state_[g] == State::In; }))
                return false;
        }
        for (auto d : p_.demands_of[f])
            if (!supportable(d))
                return false;
        for (auto d : p_.supported_by[f]) {
            FactId u = p_.demands[d].fact;
            if (state_[u] == State::Out && !blockable(u))
                return false;
        }
        return true;
    }

    bool admits_out(FactId f) const
    {
        if (!blockable(f))
            return false;
        for (auto d : p_.supported_by[f]) {
            FactId u = p_.demands[d].fact;
            if (state_[u] == State::In && !supportable(d))
                return false;
        }
        for (auto e : p_.incident[f])
            for (auto u : p_.edges[e])
                if (u != f && state_[u] == State::Out && !blockable(u))
                    return false;
        return true;
    }

    bool descend(FactId f)
    {
        if (f == p_.facts.size())
            return leaf();
        state_[f] = State::In;
        if (admits_in(f)) {
            in_.insert(p_.facts[f]);
            bool skip = prune_ && prune_(in_);
            bool stop = !skip && descend(f + 1);
            in_.erase(p_.facts[f]);
            if (stop) {
                state_[f] = State::Undecided;
                return true;
            }
        }
        state_[f] = State::Out;
        bool stop = admits_out(f) && descend(f + 1);
        state_[f] = State::Undecided;
        return stop;
    }

    /// Returns true to stop the whole search.
    bool leaf()
    {
        if (!p_.demands.empty() && ExtensionSearch(p_, state_).exists())
            return false;
        return !visit_(in_);
    }

    const Problem &p_;
    const RepairVisitor &visit_;
    const PrunePredicate &prune_;
    std::vector<State> state_;
    Instance in_;
};

void check_cap(const Instance &r, std::size_t cap)
{
    if (r.size() > cap)
        throw CapExceededError(r.size(), cap);
}

bool consistent(const Problem &p, const std::vector<State> &state)
{
    for (const auto &edge : p.edges)
        if (std::all_of(edge.begin(), edge.end(), [&](FactId g) { return state[g] == State::In; }))
            return false;
    for (const auto &d : p.demands)
        if (state[d.fact] == State::In &&
            std::none_of(d.supports.begin(), d.supports.end(), [&](FactId g) { return state[g] == State::In; }))
            return false;
    return true;
}

}

std::size_t cap_from_environment(std::size_t fallback)
{
    const char *env = std::getenv("REPAIRLAB_ORACLE_CAP");
    if (!env)
        return fallback;
    std::string text(env);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0)
        return fallback;
    return value;
}

void for_each_repair(const Instance &r, const ConstraintSet &ics, std::size_t cap, const RepairVisitor &visit,
                     const PrunePredicate &prune)
{
    check_cap(r, cap);
    auto problem = make_problem(r, ics);
    RepairSearch(problem, visit, prune).run();
}

RepairSet enumerate_repairs(const Instance &r, const ConstraintSet &ics, std::size_t cap, std::size_t limit)
{
    RepairSet out;
    out.cap = cap;
    for_each_repair(r, ics, cap, [&](const Instance &repair) {
        if (limit != 0 && out.repairs.size() == limit) {
            out.exhaustive = false;
            return false;
        }
        out.repairs.push_back(repair);
        return true;
    });
    return out;
}

RepairSet enumerate_repairs_lattice(const Instance &r, const ConstraintSet &ics)
{
    if (r.size() > 24)
        throw CapExceededError(r.size(), 24);
    auto p = make_problem(r, ics);
    const std::size_t n = p.facts.size();
    using Mask = std::uint32_t;
    auto has = [](Mask m, FactId f) { return (m >> f) & 1u; };

    std::set<Mask> visited;
    std::set<Mask> consistent_sets;
    std::vector<Mask> stack{n == 0 ? Mask{0} : static_cast<Mask>((std::uint64_t{1} << n) - 1)};
    while (!stack.empty()) {
        Mask m = stack.back();
        stack.pop_back();
        if (!visited.insert(m).second)
            continue;
        const std::vector<FactId> *violated = nullptr;
        for (const auto &edge : p.edges)
            if (std::all_of(edge.begin(), edge.end(), [&](FactId f) { return has(m, f); })) {
                violated = &edge;
                break;
            }
        if (violated) {
            for (auto f : *violated)
                stack.push_back(m & ~(Mask{1} << f));
            continue;
        }
        bool ok = true;
        for (const auto &d : p.demands) {
            if (!has(m, d.fact))
                continue;
            if (std::none_of(d.supports.begin(), d.supports.end(), [&](FactId g) { return has(m, g); })) {
                stack.push_back(m & ~(Mask{1} << d.fact));
                ok = false;
                break;
            }
        }
        if (ok)
            consistent_sets.insert(m);
    }
    RepairSet out;
    out.cap = 24;
    for (Mask m : consistent_sets) {
        bool maximal = std::none_of(consistent_sets.begin(), consistent_sets.end(),
                                    [&](Mask other) { return other != m && (other & m) == m; });
        if (!maximal)
            continue;
        Instance repair;
        for (FactId f = 0; f < n; ++f)
            if (has(m, f))
                repair.insert(p.facts[f]);
        out.repairs.push_back(std::move(repair));
    }
    std::sort(out.repairs.begin(), out.repairs.end(),
              [](const Instance &a, const Instance &b) { return a.to_vector() < b.to_vector(); });
    return out;
}

bool oracle_repair_check(const Instance &r, const Instance &r2, const ConstraintSet &ics, std::size_t cap)
{
    check_cap(r, cap);
    if (!r2.subset_of(r))
        return false;
    auto p = make_problem(r, ics);
    std::vector<State> state(p.facts.size());
    for (FactId f = 0; f < p.facts.size(); ++f)
        state[f] = r2.contains(p.facts[f]) ? State::In : State::Out;
    if (!consistent(p, state))
        return false;
    return !ExtensionSearch(p, state).exists();
}

std::optional<Instance> oracle_extension(const Instance &r, const Instance &r2, const ConstraintSet &ics,
                                         std::size_t cap)
{
    check_cap(r, cap);
    if (!r2.subset_of(r))
        throw InvalidArgument("oracle_extension needs a sub-instance of r");
    auto p = make_problem(r, ics);
    std::vector<State> state(p.facts.size());
    for (FactId f = 0; f < p.facts.size(); ++f)
        state[f] = r2.contains(p.facts[f]) ? State::In : State::Out;
    if (!consistent(p, state))
        throw InvalidArgument("oracle_extension needs a consistent sub-instance");
    ExtensionSearch search(p, state);
    if (!search.exists())
        return std::nullopt;
    Instance added;
    for (FactId f = 0; f < p.facts.size(); ++f)
        if (search.chosen()[f])
            added.insert(p.facts[f]);
    return added;
}

OracleAnswer oracle_cqa(const Instance &r, const ConstraintSet &ics, const Query &query, std::size_t cap)
{
    if (!is_closed(query))
        throw InvalidArgument("oracle_cqa needs a closed query; use oracle_consistent_answers for open queries");
    OracleAnswer answer;
    PrunePredicate prune;
    // Once a monotone query holds on the committed facts it holds in every repair below this node.
    if (is_monotone(query))
        prune = [&](const Instance &committed) { return evaluate(query, committed); };
    for_each_repair(
        r, ics, cap,
        [&](const Instance &repair) {
            if (evaluate(query, repair))
                return true;
            answer.consistent = false;
            answer.witness = repair;
            return false;
        },
        prune);
    return answer;
}

std::vector<std::vector<Value>> oracle_consistent_answers(const Instance &r, const ConstraintSet &ics,
                                                          const ConjunctiveQuery &query, std::size_t cap)
{
    std::optional<std::set<std::vector<Value>>> common;
    for_each_repair(r, ics, cap, [&](const Instance &repair) {
        auto found = answers(query, repair);
        std::set<std::vector<Value>> here(found.begin(), found.end());
        if (!common) {
            common = std::move(here);
        } else {
            std::set<std::vector<Value>> kept;
            std::set_intersection(common->begin(), common->end(), here.begin(), here.end(),
                                  std::inserter(kept, kept.end()));
            common = std::move(kept);
        }
        return true;
    });
    if (!common)
        return {};
    return {common->begin(), common->end()};
}

}
