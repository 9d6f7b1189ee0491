#pragma once

#include "repairlab/engine.hpp"
#include "repairlab/model/constraint.hpp"
#include "repairlab/model/instance.hpp"
#include "repairlab/model/query.hpp"

#include <optional>
#include <string>
#include <vector>

namespace repairlab::cqa {

struct CqaVerdict
{
    /// True when the query holds in every repair.
    bool consistent = true;
    /// A repair in which the query is false.
    std::optional<Instance> witness;
    std::string engine;
    std::string justification;
};

struct Literal
{
    Fact fact;
    bool positive = true;

    friend auto operator<=>(const Literal &, const Literal &) = default;
    friend bool operator==(const Literal &, const Literal &) = default;
};

using Clause = std::vector<Literal>;

/// CNF of a ground formula with comparisons folded to constants. Literals and clauses are sorted and
/// deduplicated and tautological clauses are dropped: an empty result means true, an empty clause means false.
std::vector<Clause> to_cnf(const Formula &formula);

/// Consistent answer to a ground quantifier-free query under denial constraints. Every clause of the CNF is
/// checked separately: a repair falsifying it exists iff some choice of one conflict edge per fact that must be
/// absent, together with the facts that must be present, forms an independent set.
CqaVerdict cqa_ground_qf(const Instance &r, const std::vector<DenialConstraint> &constraints,
                         const GroundQuery &query);

/// Guarded sentence with quantifier prefix exists-forall-exists built from a closed simple conjunctive query and
/// at most one FD left-hand side per relation.
struct RewrittenSentence
{
    FormulaPtr formula;

    std::string to_string() const { return formula->to_string(); }
};

/// Throws `UnsupportedError` for non-simple or open queries, constraint sets with INDs or denial constraints, and
/// relations with FDs on different left-hand sides. FDs sharing a left-hand side are merged; a relation without
/// FDs is treated as keyed on all its attributes.
RewrittenSentence rewrite_simple_conjunctive(const ConjunctiveQuery &query, const ConstraintSet &fds);

bool eval_fo(const Instance &r, const RewrittenSentence &sentence);

/// Consistent answer to a closed query, choosing an engine from the constraint class and query shape.
/// Throws `UnsupportedError` when no engine applies and the oracle is not allowed.
CqaVerdict cqa_dispatch(const Instance &r, const ConstraintSet &ics, const Query &query,
                        const EngineOptions &options = {});

/// Consistent answers of an open conjunctive query: the answers on `r` whose instantiation is consistently true.
std::vector<std::vector<Value>> consistent_answers_open(const Instance &r, const ConstraintSet &ics,
                                                        const ConjunctiveQuery &query,
                                                        const EngineOptions &options = {});

}
