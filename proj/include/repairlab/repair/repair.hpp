#pragma once

#include "repairlab/engine.hpp"
#include "repairlab/model/constraint.hpp"
#include "repairlab/model/instance.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repairlab::repair {

/// Why a candidate is not a repair.
struct Certificate
{
    enum class Kind : std::uint8_t {
        /// `facts` are candidate facts missing from the original instance.
        NotSubset,
        /// `facts` jointly violate `constraint` inside the candidate.
        Violation,
        /// `facts` are facts of the original that can be added back together (usually one); `stage` says where
        /// they were found.
        Addable
    };

    Kind kind = Kind::Violation;
    std::vector<Fact> facts;
    std::string constraint;
    std::string stage;
};

std::string_view to_string(Certificate::Kind kind);

struct RepairVerdict
{
    bool ok = true;
    std::optional<Certificate> certificate;
    std::string engine;
    /// Why the engine is complete for the constraint class; set by `check_dispatch`.
    std::string justification;
};

/// Repair check against plain denial constraints: the candidate is a maximal independent set of the conflict
/// hypergraph.
RepairVerdict check_denial(const Instance &r, const Instance &r2, const std::vector<DenialConstraint> &constraints);
/// Same, for a constraint set without INDs (FDs are converted to denial constraints).
RepairVerdict check_denial(const Instance &r, const Instance &r2, const ConstraintSet &ics);

/// Greatest sub-instance satisfying the INDs: facts without a matching target tuple are deleted until stable.
Instance unique_ind_repair(const Instance &r, const std::vector<InclusionDependency> &inds);
Instance unique_ind_repair(const Instance &r, const ConstraintSet &ics);

/// Key FDs and foreign keys: cascade the foreign keys, then check the FD part on what remains.
/// Throws `UnsupportedError` unless the single-key conditions hold.
RepairVerdict check_single_key(const Instance &r, const Instance &r2, const ConstraintSet &ics);

/// FDs and an acyclic IND set: global satisfaction, then a sinks-first scan in which every deleted fact must be
/// blocked by an FD of its relation or an IND leaving it. Throws `UnsupportedError` for denials or cyclic INDs.
RepairVerdict check_acyclic(const Instance &r, const Instance &r2, const ConstraintSet &ics);

/// Repair check choosing an engine from the constraint class, or the engine named in `options`. INDs alone are
/// checked against their unique repair. Throws `UnsupportedError` when the engine does not cover the class, or
/// when no polynomial engine applies and the oracle is not allowed.
RepairVerdict check_dispatch(const Instance &r, const Instance &r2, const ConstraintSet &ics,
                             const EngineOptions &options = {});

/// One repair, chosen by a greedy pass over the facts in a seeded shuffle of canonical order.
/// Throws `UnsupportedError` for the general class.
Instance sample_repair(const Instance &r, const ConstraintSet &ics, std::uint64_t seed);

/// Canonical order permuted by a Fisher-Yates shuffle driven by mt19937_64, identical on every platform.
std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed);

}
