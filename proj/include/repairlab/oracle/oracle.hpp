#pragma once

#include "repairlab/model/constraint.hpp"
#include "repairlab/model/instance.hpp"
#include "repairlab/model/query.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace repairlab::oracle {

inline constexpr std::size_t default_cap = 18;

/// `REPAIRLAB_ORACLE_CAP` when set to a positive integer, else `fallback`.
std::size_t cap_from_environment(std::size_t fallback = default_cap);

struct RepairSet
{
    std::vector<Instance> repairs;
    /// False when enumeration stopped at the requested limit.
    bool exhaustive = true;
    std::size_t cap = default_cap;
};

/// Called for each repair; return false to stop.
using RepairVisitor = std::function<bool(const Instance &)>;
/// Called with the facts already committed to the repair under construction; return true to skip every repair
/// that contains them.
using PrunePredicate = std::function<bool(const Instance &)>;

/// Visits every repair (maximal consistent subset) of `r` exactly once, in a deterministic order. Works for any
/// mix of denial constraints, FDs and INDs. Throws `CapExceededError` when `r` has more than `cap` facts.
void for_each_repair(const Instance &r, const ConstraintSet &ics, std::size_t cap, const RepairVisitor &visit,
                     const PrunePredicate &prune = {});

/// All repairs, or the first `limit` of them when `limit` is nonzero.
RepairSet enumerate_repairs(const Instance &r, const ConstraintSet &ics, std::size_t cap = default_cap,
                            std::size_t limit = 0);

/// Independent cross-check for small instances (at most 24 facts): walks the subset lattice down from `r`,
/// removing one fact of one violation at a time, and keeps the maximal consistent sets reached.
RepairSet enumerate_repairs_lattice(const Instance &r, const ConstraintSet &ics);

/// `r2` is a subset of `r`, consistent, and has no consistent proper superset inside `r`.
bool oracle_repair_check(const Instance &r, const Instance &r2, const ConstraintSet &ics,
                         std::size_t cap = default_cap);

/// Facts of `r - r2` whose addition keeps the consistent sub-instance `r2` consistent, or nothing when `r2` is
/// maximal. Throws `InvalidArgument` when `r2` is not a consistent sub-instance of `r`.
std::optional<Instance> oracle_extension(const Instance &r, const Instance &r2, const ConstraintSet &ics,
                                         std::size_t cap = default_cap);

struct OracleAnswer
{
    bool consistent = true;
    /// A repair in which the query is false.
    std::optional<Instance> witness;
};

/// Whether a closed query holds in every repair.
OracleAnswer oracle_cqa(const Instance &r, const ConstraintSet &ics, const Query &query,
                        std::size_t cap = default_cap);

/// Tuples that answer an open conjunctive query in every repair.
std::vector<std::vector<Value>> oracle_consistent_answers(const Instance &r, const ConstraintSet &ics,
                                                          const ConjunctiveQuery &query,
                                                          std::size_t cap = default_cap);

}
