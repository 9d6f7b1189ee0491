#pragma once

#include "support.hpp"

#include <optional>
#include <string>
#include <vector>

namespace support {

/// Outcome of checking one generator's stated property on a list of inputs.
struct FamilyReport
{
    std::string family;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::size_t largest_instance = 0;
    double seconds = 0;
    std::string first_failure;

    bool ok() const { return failures == 0 && cases > 0; }
    std::string summary() const;
};

/// Oracle cap used for generated instances; the searches below prune on the query, so they scale past the
/// default cap.
inline constexpr std::size_t generated_cap = 200;

/// True when the closed monotone query holds in every repair. Searches for a repair avoiding it, pruning every
/// branch whose committed facts already satisfy it.
bool consistently_true_monotone(const Instance &r, const ConstraintSet &ics, const Query &query,
                                std::size_t cap = generated_cap);

/// CNFs over exactly `variables` variables for each count in 1..max_variables, with 1..max_clauses clauses.
std::vector<reductions::CnfFormula> cnf_envelope(std::size_t max_variables, std::size_t max_clauses);
/// Every split of `cnf_envelope(max_variables, max_clauses)` formulas into k universals and the rest
/// existentials.
std::vector<reductions::Qbf2> qbf_envelope(std::size_t max_variables, std::size_t max_clauses);
/// Every simple graph with 0..max_nodes nodes.
std::vector<reductions::Graph> graph_envelope(std::size_t max_nodes);
/// Restricted formulas with exactly `variables` variables and as many clauses.
std::vector<reductions::CnfFormula> restricted_envelope(std::size_t variables);

/// Keeps every `stride`-th element, starting with the first.
template<class T>
std::vector<T> every_nth(const std::vector<T> &all, std::size_t stride)
{
    std::vector<T> out;
    for (std::size_t i = 0; i < all.size(); i += stride)
        out.push_back(all[i]);
    return out;
}

FamilyReport check_monotone3sat(const std::vector<reductions::CnfFormula> &inputs);
FamilyReport check_one_denial(const std::vector<reductions::CnfFormula> &inputs);
FamilyReport check_fd_ind(const std::vector<reductions::CnfFormula> &inputs);
FamilyReport check_keyfk(const std::vector<reductions::CnfFormula> &inputs);
FamilyReport check_qbf(const std::vector<reductions::Qbf2> &inputs);
FamilyReport check_two_key(const std::vector<reductions::Graph> &inputs);
FamilyReport check_acyclic_cqa(const std::vector<reductions::Graph> &inputs);
/// reduce_rc_to_cqa on the person fixture with both repairs and two consistent non-repairs.
FamilyReport check_rc_to_cqa();

}
