#include "repairlab/cqa/cqa.hpp"

#include "repairlab/error.hpp"
#include "repairlab/hypergraph/hypergraph.hpp"
#include "repairlab/model/satisfaction.hpp"
#include "repairlab/oracle/oracle.hpp"
#include "repairlab/repair/repair.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace repairlab::cqa {

namespace {

using hypergraph::VertexId;

/// Exact search for a repair avoiding every match of a simple conjunctive query when each relation carries at
/// most one FD left-hand side. Restricted to one relation, such a repair keeps exactly one group of facts agreeing
/// on the dependent attributes inside each block of facts agreeing on the determinant.
class BlockSearch
{
  public:
    BlockSearch(const Instance &r, const ConstraintSet &fds, const ConjunctiveQuery &query)
        : r_(r)
        , fds_(fds)
        , query_(normalize(query))
    { }

    std::optional<Instance> find()
    {
        build_blocks();
        collect_matches();
        choice_.assign(blocks_.size(), kUnset);
        if (!assign(0))
            return std::nullopt;
        Instance chosen;
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            for (const auto &f : blocks_[b].options[choice_[b]])
                chosen.insert(f);
        auto h = hypergraph::build(r_, fds_.as_denials());
        std::vector<VertexId> order(h.vertex_count());
        for (VertexId v = 0; v < order.size(); ++v)
            order[v] = v;
        return h.to_instance(h.greedy_extend(h.membership(chosen), order));
    }

  private:
    static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

    struct Block
    {
        std::vector<std::vector<Fact>> options;
    };

    void build_blocks()
    {
        std::set<std::string> relations;
        for (const auto &a : query_.atoms)
            relations.insert(a.relation);
        for (const auto &rel : relations) {
            std::optional<FunctionalDependency> fd;
            for (const auto &f : fds_.fds())
                if (f.relation == rel) {
                    if (!fd) {
                        fd = f;
                    } else {
                        fd->rhs.insert(fd->rhs.end(), f.rhs.begin(), f.rhs.end());
                    }
                }
            std::map<std::vector<Value>, std::map<std::vector<Value>, std::vector<Fact>>> grouped;
            for (const auto &f : r_.relation(rel)) {
                if (fd)
                    grouped[project(f, fd->lhs)][project(f, fd->rhs)].push_back(f);
                else
                    grouped[f.values][{}].push_back(f);
            }
            for (auto &[key, classes] : grouped) {
                Block b;
                for (auto &[dep, facts] : classes) {
                    for (const auto &f : facts)
                        location_[f] = {blocks_.size(), b.options.size()};
                    b.options.push_back(std::move(facts));
                }
                blocks_.push_back(std::move(b));
            }
        }
        nogoods_of_.assign(blocks_.size(), {});
    }

    void collect_matches()
    {
        Binding binding;
        std::vector<const Fact *> chosen;
        join(0, binding, chosen);
    }

    void join(std::size_t i, Binding &binding, std::vector<const Fact *> &chosen)
    {
        if (i == query_.atoms.size()) {
            for (const auto &c : query_.conditions)
                if (!holds(c, binding))
                    return;
            std::vector<std::pair<std::size_t, std::size_t>> nogood;
            for (const auto *f : chosen)
                nogood.push_back(location_.at(*f));
            std::sort(nogood.begin(), nogood.end());
            nogood.erase(std::unique(nogood.begin(), nogood.end()), nogood.end());
            std::size_t id = nogoods_.size();
            for (const auto &[b, _] : nogood)
                nogoods_of_[b].push_back(id);
            nogoods_.push_back(std::move(nogood));
            return;
        }
        const auto &atom = query_.atoms[i];
        for (const auto &f : r_.relation(atom.relation)) {
            Binding extended = binding;
            if (!match(atom, f, extended))
                continue;
            chosen.push_back(&f);
            join(i + 1, extended, chosen);
            chosen.pop_back();
        }
    }

    bool violated(std::size_t nogood) const
    {
        return std::all_of(nogoods_[nogood].begin(), nogoods_[nogood].end(),
                           [&](const auto &bo) { return choice_[bo.first] == bo.second; });
    }

    bool assign(std::size_t b)
    {
        if (b == blocks_.size())
            return true;
        for (std::size_t o = 0; o < blocks_[b].options.size(); ++o) {
            choice_[b] = o;
            bool ok = std::none_of(nogoods_of_[b].begin(), nogoods_of_[b].end(),
                                   [&](std::size_t n) { return violated(n); });
            if (ok && assign(b + 1))
                return true;
        }
        choice_[b] = kUnset;
        return false;
    }

    const Instance &r_;
    const ConstraintSet &fds_;
    ConjunctiveQuery query_;
    std::vector<Block> blocks_;
    std::map<Fact, std::pair<std::size_t, std::size_t>> location_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> nogoods_;
    std::vector<std::vector<std::size_t>> nogoods_of_;
    std::vector<std::size_t> choice_;
};

bool rewritable(const ConjunctiveQuery &q, const ConstraintSet &fds)
{
    if (!q.simple() || !fds.inds().empty() || !fds.denials().empty())
        return false;
    for (const auto &a : q.atoms) {
        std::optional<std::vector<std::size_t>> lhs;
        for (const auto &fd : fds.fds()) {
            if (fd.relation != a.relation)
                continue;
            if (lhs && *lhs != fd.lhs)
                return false;
            lhs = fd.lhs;
        }
    }
    return true;
}

/// Engines for constraint sets made of FDs only (or denial constraints, for ground queries).
std::optional<CqaVerdict> fd_engines(const Instance &r, const ConstraintSet &fds, const Query &query)
{
    if (const auto *g = std::get_if<GroundQuery>(&query)) {
        auto v = cqa_ground_qf(r, fds.as_denials(), *g);
        v.justification = "ground quantifier-free query under denial constraints: per-clause witness search over "
                          "the conflict hypergraph (polynomial)";
        return v;
    }
    const auto &cq = std::get<ConjunctiveQuery>(query);
    if (!fds.denials().empty() || !rewritable(cq, fds))
        return std::nullopt;
    auto sentence = rewrite_simple_conjunctive(cq, fds);
    if (eval_fo(r, sentence))
        return CqaVerdict{true, std::nullopt, "rewriting",
                          "simple conjunctive query with one FD per relation: first-order rewriting holds on the "
                          "instance"};
    // The rewriting is sound but can miss consistently true queries (see README); confirm with an exact search.
    auto witness = BlockSearch(r, fds, cq).find();
    CqaVerdict v{!witness.has_value(), witness, "rewriting+block-search",
                 "simple conjunctive query with one FD per relation: the rewriting failed, so a search over one "
                 "dependent-value group per determinant block decided the query"};
    return v;
}

CqaVerdict run_oracle(const Instance &r, const ConstraintSet &ics, const Query &query, std::size_t cap,
                      std::string justification)
{
    auto answer = oracle::oracle_cqa(r, ics, query, cap);
    return {answer.consistent, answer.witness, "oracle", std::move(justification)};
}

std::string blocking_reason(const ConstraintSet &ics, const Query &query)
{
    bool ground = std::holds_alternative<GroundQuery>(query);
    switch (ics.classification()) {
        case ConstraintClass::DenialOnly:
            return "conjunctive queries with variables under general denial constraints are coNP-hard";
        case ConstraintClass::FdsOnly:
        case ConstraintClass::SingleKeyFk:
            return ground ? "no polynomial engine applies"
                          : "the query is not simple or a relation has FDs with different left-hand sides; such "
                            "queries are coNP-hard already for one key FD";
        case ConstraintClass::AcyclicFdInd:
            return "consistent answers under FDs with acyclic INDs are coNP-hard even for an atomic ground query";
        case ConstraintClass::General:
            return "consistent answers under FDs with arbitrary INDs are Pi2p-complete";
        case ConstraintClass::IndsOnly: break;
    }
    return "no polynomial engine applies";
}

Query simplify(const Query &query)
{
    if (const auto *cq = std::get_if<ConjunctiveQuery>(&query))
        if (auto g = as_ground(*cq))
            return *g;
    return query;
}

}

CqaVerdict cqa_dispatch(const Instance &r, const ConstraintSet &ics, const Query &raw, const EngineOptions &options)
{
    if (!is_closed(raw))
        throw InvalidArgument("cqa_dispatch needs a closed query; open queries go through consistent_answers_open");
    validate(raw, ics.schema());
    Query query = simplify(raw);
    auto cls = ics.classification();

    switch (options.engine) {
        case Engine::Oracle:
            return run_oracle(r, ics, query, options.oracle_cap, "exhaustive repair enumeration requested");
        case Engine::Acyclic:
            throw UnsupportedError("the acyclic engine only checks repairs; " +
                                   blocking_reason(ics, query));
        case Engine::Denial: {
            if (!ics.inds().empty())
                throw UnsupportedError("the denial engine does not handle inclusion dependencies (class " +
                                       std::string(to_string(cls)) + ")");
            if (auto v = fd_engines(r, ics, query))
                return *v;
            throw UnsupportedError(blocking_reason(ics, query));
        }
        case Engine::SingleKey: {
            if (!satisfies_single_key_conditions(ics))
                throw UnsupportedError("the single-key engine needs key FDs and foreign keys with one declared key "
                                       "per relation (class " +
                                       std::string(to_string(cls)) + ")");
            auto r1 = repair::unique_ind_repair(r, ics.inds());
            if (auto v = fd_engines(r1, ics.fd_part(), query)) {
                v->engine = "single-key/" + v->engine;
                return *v;
            }
            throw UnsupportedError(blocking_reason(ics, query));
        }
        case Engine::Auto: break;
    }

    if (satisfies(r, ics)) {
        bool holds_now = evaluate(query, r);
        return {holds_now, holds_now ? std::nullopt : std::optional<Instance>(r), "consistent-instance",
                "the instance satisfies every constraint, so it is its own unique repair"};
    }
    std::optional<CqaVerdict> verdict;
    switch (cls) {
        case ConstraintClass::DenialOnly:
        case ConstraintClass::FdsOnly: verdict = fd_engines(r, ics, query); break;
        case ConstraintClass::IndsOnly: {
            auto unique = repair::unique_ind_repair(r, ics.inds());
            bool holds_now = evaluate(query, unique);
            return {holds_now, holds_now ? std::nullopt : std::optional<Instance>(unique), "ind-cascade",
                    "INDs alone admit exactly one repair: delete the facts without support until stable"};
        }
        case ConstraintClass::SingleKeyFk: {
            auto r1 = repair::unique_ind_repair(r, ics.inds());
            verdict = fd_engines(r1, ics.fd_part(), query);
            if (verdict) {
                verdict->engine = "single-key/" + verdict->engine;
                verdict->justification = "single key per relation with foreign keys: the foreign-key cascade is "
                                         "applied first, then " +
                                         verdict->justification;
            }
            break;
        }
        case ConstraintClass::AcyclicFdInd:
        case ConstraintClass::General: break;
    }
    if (verdict)
        return *verdict;
    auto reason = blocking_reason(ics, query);
    if (!options.allow_oracle)
        throw UnsupportedError(reason + "; rerun with the oracle allowed (instances up to " +
                               std::to_string(options.oracle_cap) + " facts)");
    return run_oracle(r, ics, query, options.oracle_cap, reason + "; fell back to exhaustive repair enumeration");
}

std::vector<std::vector<Value>> consistent_answers_open(const Instance &r, const ConstraintSet &ics,
                                                        const ConjunctiveQuery &query, const EngineOptions &options)
{
    validate(Query{query}, ics.schema());
    std::vector<std::vector<Value>> out;
    for (const auto &tuple : answers(query, r))
        if (cqa_dispatch(r, ics, Query{bind_free(query, tuple)}, options).consistent)
            out.push_back(tuple);
    return out;
}

}
