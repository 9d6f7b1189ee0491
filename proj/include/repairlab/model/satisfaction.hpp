#pragma once

#include "repairlab/model/constraint.hpp"
#include "repairlab/model/instance.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace repairlab {

/// A constraint together with facts that witness its violation. For an IND the single fact lacks a matching
/// target tuple.
struct Violation
{
    std::string constraint;
    std::vector<Fact> facts;
};

/// Calls `visit` with the facts chosen per atom for every substitution that makes the body of `denial` true on
/// `instance`. A fact may be chosen for several atoms. Stops early when `visit` returns true.
void for_each_grounding(const DenialConstraint &denial, const Instance &instance,
                        const std::function<bool(const std::vector<const Fact *> &)> &visit);

std::optional<Violation> find_violation(const Instance &instance, const DenialConstraint &denial);
std::optional<Violation> find_violation(const Instance &instance, const FunctionalDependency &fd,
                                        const Schema &schema);
std::optional<Violation> find_violation(const Instance &instance, const InclusionDependency &ind,
                                        const Schema &schema);
/// First violation in the order FDs, INDs, denial constraints.
std::optional<Violation> find_violation(const Instance &instance, const ConstraintSet &ics);

bool satisfies(const Instance &instance, const ConstraintSet &ics);

/// Projection of a tuple onto the given positions.
std::vector<Value> project(const Fact &fact, const std::vector<std::size_t> &positions);

}
