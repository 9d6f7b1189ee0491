#include "repairlab/error.hpp"
#include "repairlab/model/satisfaction.hpp"
#include "repairlab/oracle/oracle.hpp"
#include "repairlab/repair/repair.hpp"

namespace repairlab::repair {

namespace {

RepairVerdict check_inds_only(const Instance &r, const Instance &r2, const ConstraintSet &ics)
{
    const std::string engine = "ind-cascade";
    if (!r2.subset_of(r))
        return {false, Certificate{Certificate::Kind::NotSubset, r2.minus(r).to_vector(), {}, {}}, engine, {}};
    auto unique = unique_ind_repair(r, ics);
    if (r2 == unique)
        return {true, std::nullopt, engine, {}};
    if (auto v = find_violation(r2, ics))
        return {false, Certificate{Certificate::Kind::Violation, v->facts, v->constraint, {}}, engine, {}};
    // A consistent candidate is contained in the unique repair, so some fact of it is missing.
    auto missing = unique.minus(r2);
    return {false, Certificate{Certificate::Kind::Addable, {*missing.begin()}, {}, "unique repair under INDs"}, engine, {}};
}

RepairVerdict check_oracle(const Instance &r, const Instance &r2, const ConstraintSet &ics, std::size_t cap)
{
    const std::string engine = "oracle";
    if (r.size() > cap)
        throw CapExceededError(r.size(), cap);
    if (!r2.subset_of(r))
        return {false, Certificate{Certificate::Kind::NotSubset, r2.minus(r).to_vector(), {}, {}}, engine, {}};
    if (auto v = find_violation(r2, ics))
        return {false, Certificate{Certificate::Kind::Violation, v->facts, v->constraint, {}}, engine, {}};
    if (auto added = oracle::oracle_extension(r, r2, ics, cap))
        return {false, Certificate{Certificate::Kind::Addable, added->to_vector(), {}, "exhaustive extension search"},
                engine, {}};
    return {true, std::nullopt, engine, {}};
}

std::string reason_for(ConstraintClass c)
{
    switch (c) {
        case ConstraintClass::DenialOnly:
        case ConstraintClass::FdsOnly:
            return "denial constraints: a repair is a maximal independent set of the conflict hypergraph";
        case ConstraintClass::IndsOnly: return "INDs only: the repair is unique and computed by cascading deletions";
        case ConstraintClass::SingleKeyFk:
            return "single key per relation with foreign keys: cascade the foreign keys, then check the FDs";
        case ConstraintClass::AcyclicFdInd:
            return "FDs with acyclic INDs: single-fact additions checked relation by relation, sinks first";
        case ConstraintClass::General: return "FDs with cyclic INDs or INDs with denial constraints: exhaustive search";
    }
    return {};
}

}

RepairVerdict check_dispatch(const Instance &r, const Instance &r2, const ConstraintSet &ics,
                             const EngineOptions &options)
{
    RepairVerdict verdict;
    auto cls = ics.classification();
    switch (options.engine) {
        case Engine::Denial: verdict = check_denial(r, r2, ics); break;
        case Engine::Acyclic: verdict = check_acyclic(r, r2, ics); break;
        case Engine::SingleKey: verdict = check_single_key(r, r2, ics); break;
        case Engine::Oracle: verdict = check_oracle(r, r2, ics, options.oracle_cap); break;
        case Engine::Auto:
            switch (cls) {
                case ConstraintClass::DenialOnly:
                case ConstraintClass::FdsOnly: verdict = check_denial(r, r2, ics); break;
                case ConstraintClass::IndsOnly: verdict = check_inds_only(r, r2, ics); break;
                case ConstraintClass::SingleKeyFk: verdict = check_single_key(r, r2, ics); break;
                case ConstraintClass::AcyclicFdInd: verdict = check_acyclic(r, r2, ics); break;
                case ConstraintClass::General:
                    if (!options.allow_oracle)
                        throw UnsupportedError(
                            "repair checking for class general is co-NP-complete (cyclic INDs with FDs, or INDs with "
                            "denial constraints); rerun with the oracle allowed (instances up to " +
                            std::to_string(options.oracle_cap) + " facts)");
                    verdict = check_oracle(r, r2, ics, options.oracle_cap);
                    break;
            }
            break;
    }
    verdict.justification = options.engine == Engine::Oracle
                                ? "exhaustive search over subsets (explicitly requested)"
                                : "class " + std::string(to_string(cls)) + "; " + reason_for(cls);
    return verdict;
}

}
