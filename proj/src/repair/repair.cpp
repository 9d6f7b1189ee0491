#include "repairlab/repair/repair.hpp"

#include "repairlab/error.hpp"
#include "repairlab/hypergraph/hypergraph.hpp"
#include "repairlab/model/satisfaction.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace repairlab::repair {

namespace {

RepairVerdict not_subset(const Instance &r, const Instance &r2, std::string engine)
{
    auto extra = r2.minus(r);
    return {false, Certificate{Certificate::Kind::NotSubset, extra.to_vector(), {}, {}}, std::move(engine), {}};
}

RepairVerdict violation(const Violation &v, std::string engine)
{
    return {false, Certificate{Certificate::Kind::Violation, v.facts, v.constraint, {}}, std::move(engine), {}};
}

void require_no_denials(const ConstraintSet &ics, std::string_view what)
{
    if (!ics.denials().empty())
        throw UnsupportedError(std::string(what) + " handles FDs and INDs only; the set contains denial constraints");
}

using Projections = std::set<std::vector<Value>>;

Projections target_projections(const Instance &inst, const InclusionDependency &ind)
{
    Projections out;
    for (const auto &f : inst.relation(ind.target))
        out.insert(project(f, ind.target_positions));
    return out;
}

}

std::string_view to_string(Certificate::Kind kind)
{
    switch (kind) {
        case Certificate::Kind::NotSubset: return "not-subset";
        case Certificate::Kind::Violation: return "violation";
        case Certificate::Kind::Addable: return "addable";
    }
    return "?";
}

RepairVerdict check_denial(const Instance &r, const Instance &r2, const std::vector<DenialConstraint> &constraints)
{
    const std::string engine = "denial";
    if (!r2.subset_of(r))
        return not_subset(r, r2, engine);
    auto h = hypergraph::build(r, constraints);
    auto members = h.membership(r2);
    for (std::size_t i = 0; i < h.edges().size(); ++i) {
        const auto &e = h.edges()[i];
        if (std::all_of(e.begin(), e.end(), [&](auto v) { return members[v]; })) {
            Certificate c{Certificate::Kind::Violation, {}, "denial " + constraints[h.edge_constraints()[i]].to_string(),
                          {}};
            for (auto v : e)
                c.facts.push_back(h.vertex(v));
            return {false, std::move(c), engine, {}};
        }
    }
    if (auto v = h.addable(members))
        return {false, Certificate{Certificate::Kind::Addable, {h.vertex(*v)}, {}, "maximality"}, engine, {}};
    return {true, std::nullopt, engine, {}};
}

RepairVerdict check_denial(const Instance &r, const Instance &r2, const ConstraintSet &ics)
{
    if (!ics.inds().empty())
        throw UnsupportedError("the denial checker does not handle inclusion dependencies");
    return check_denial(r, r2, ics.as_denials());
}

Instance unique_ind_repair(const Instance &r, const std::vector<InclusionDependency> &inds)
{
    Instance current = r;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto &ind : inds) {
            auto targets = target_projections(current, ind);
            std::vector<Fact> unsupported;
            for (const auto &f : current.relation(ind.source))
                if (!targets.contains(project(f, ind.source_positions)))
                    unsupported.push_back(f);
            for (const auto &f : unsupported)
                current.erase(f);
            changed = changed || !unsupported.empty();
        }
    }
    return current;
}

Instance unique_ind_repair(const Instance &r, const ConstraintSet &ics)
{
    return unique_ind_repair(r, ics.inds());
}

RepairVerdict check_single_key(const Instance &r, const Instance &r2, const ConstraintSet &ics)
{
    if (!satisfies_single_key_conditions(ics))
        throw UnsupportedError("the single-key checker needs key FDs, foreign keys into declared keys and at most "
                               "one declared key per relation; this constraint set is " +
                               std::string(to_string(ics.classification())));
    const std::string engine = "single-key";
    if (!r2.subset_of(r))
        return not_subset(r, r2, engine);
    for (const auto &ind : ics.inds())
        if (auto v = find_violation(r2, ind, ics.schema()))
            return violation(*v, engine);
    // Every IND-consistent subset of r lies inside r1.
    auto r1 = unique_ind_repair(r, ics.inds());
    auto verdict = check_denial(r1, r2, ics.fd_part().as_denials());
    verdict.engine = engine;
    if (verdict.certificate && verdict.certificate->kind == Certificate::Kind::Addable) {
        // The addable fact may reference a key value absent from r2; any r1 fact carrying that key can join it
        // without breaking a key, so follow the foreign keys until nothing dangles.
        auto &facts = verdict.certificate->facts;
        Instance grown = r2;
        grown.insert(facts.front());
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto &ind : ics.inds()) {
                auto v = find_violation(grown, ind, ics.schema());
                if (!v)
                    continue;
                auto wanted = project(v->facts.front(), ind.source_positions);
                for (const auto &t : r1.relation(ind.target))
                    if (project(t, ind.target_positions) == wanted) {
                        grown.insert(t);
                        facts.push_back(t);
                        changed = true;
                        break;
                    }
            }
        }
        verdict.certificate->stage = "maximality after foreign-key cascade";
    }
    return verdict;
}

RepairVerdict check_acyclic(const Instance &r, const Instance &r2, const ConstraintSet &ics)
{
    require_no_denials(ics, "the acyclic checker");
    auto graph = ind_graph(ics);
    if (!graph.acyclic)
        throw UnsupportedError("the acyclic checker needs an acyclic IND graph");
    const std::string engine = "acyclic";
    if (!r2.subset_of(r))
        return not_subset(r, r2, engine);
    if (auto v = find_violation(r2, ics))
        return violation(*v, engine);

    for (std::size_t stage = 0; stage < graph.order.size(); ++stage) {
        const auto &rel = graph.order[stage];
        std::vector<const FunctionalDependency *> fds;
        for (const auto &fd : ics.fds())
            if (fd.relation == rel)
                fds.push_back(&fd);
        std::vector<std::pair<const InclusionDependency *, Projections>> outgoing;
        for (const auto &ind : ics.inds())
            if (ind.source == rel)
                outgoing.emplace_back(&ind, target_projections(r2, ind));
        std::vector<std::map<std::vector<Value>, std::set<std::vector<Value>>>> kept(fds.size());
        for (std::size_t i = 0; i < fds.size(); ++i)
            for (const auto &f : r2.relation(rel))
                kept[i][project(f, fds[i]->lhs)].insert(project(f, fds[i]->rhs));

        for (const auto &t : r.relation(rel)) {
            if (r2.contains(t))
                continue;
            bool blocked = false;
            for (std::size_t i = 0; i < fds.size() && !blocked; ++i) {
                auto it = kept[i].find(project(t, fds[i]->lhs));
                if (it == kept[i].end())
                    continue;
                auto rhs = project(t, fds[i]->rhs);
                blocked = std::any_of(it->second.begin(), it->second.end(), [&](const auto &v) { return v != rhs; });
            }
            for (const auto &[ind, targets] : outgoing) {
                if (blocked)
                    break;
                blocked = !targets.contains(project(t, ind->source_positions));
            }
            if (!blocked)
                return {false,
                        Certificate{Certificate::Kind::Addable, {t}, {},
                                    "stage " + std::to_string(stage + 1) + " of " + std::to_string(graph.order.size()) +
                                        ": relation " + rel},
                        engine, {}};
        }
    }
    return {true, std::nullopt, engine, {}};
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed)
{
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        auto j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

namespace {

Instance greedy_denial(const Instance &r, const std::vector<DenialConstraint> &constraints, std::uint64_t seed)
{
    auto h = hypergraph::build(r, constraints);
    auto order = shuffled_order(h.vertex_count(), seed);
    return h.to_instance(h.greedy_extend(hypergraph::VertexSet(h.vertex_count(), false), order));
}

Instance greedy_acyclic(const Instance &r, const ConstraintSet &ics, std::uint64_t seed)
{
    auto graph = ind_graph(ics);
    auto facts = r.to_vector();
    auto order = shuffled_order(facts.size(), seed);
    Instance chosen;
    for (const auto &rel : graph.order) {
        for (auto i : order) {
            const auto &t = facts[i];
            if (t.relation != rel)
                continue;
            bool ok = true;
            for (const auto &fd : ics.fds()) {
                if (fd.relation != rel || !ok)
                    continue;
                auto lhs = project(t, fd.lhs);
                auto rhs = project(t, fd.rhs);
                for (const auto &s : chosen.relation(rel))
                    if (project(s, fd.lhs) == lhs && project(s, fd.rhs) != rhs) {
                        ok = false;
                        break;
                    }
            }
            for (const auto &ind : ics.inds()) {
                if (ind.source != rel || !ok)
                    continue;
                ok = target_projections(chosen, ind).contains(project(t, ind.source_positions));
            }
            if (ok)
                chosen.insert(t);
        }
    }
    return chosen;
}

}

Instance sample_repair(const Instance &r, const ConstraintSet &ics, std::uint64_t seed)
{
    switch (ics.classification()) {
        case ConstraintClass::DenialOnly:
        case ConstraintClass::FdsOnly: return greedy_denial(r, ics.as_denials(), seed);
        case ConstraintClass::IndsOnly: return unique_ind_repair(r, ics.inds());
        case ConstraintClass::SingleKeyFk:
            return greedy_denial(unique_ind_repair(r, ics.inds()), ics.fd_part().as_denials(), seed);
        case ConstraintClass::AcyclicFdInd: return greedy_acyclic(r, ics, seed);
        case ConstraintClass::General: break;
    }
    throw UnsupportedError("no polynomial repair construction for the general class (cyclic INDs combined with "
                           "FDs, or denial constraints with INDs); use the exhaustive oracle");
}

}
