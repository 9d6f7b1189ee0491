#pragma once

#include "repairlab/model/schema.hpp"
#include "repairlab/model/value.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace repairlab {

struct Variable
{
    std::string name;

    friend bool operator==(const Variable &, const Variable &) = default;
    friend auto operator<=>(const Variable &, const Variable &) = default;
};

/// A variable or a constant.
using Term = std::variant<Variable, Value>;

inline bool is_variable(const Term &t) { return std::holds_alternative<Variable>(t); }
inline const Variable &as_variable(const Term &t) { return std::get<Variable>(t); }
inline const Value &as_value(const Term &t) { return std::get<Value>(t); }
inline Term var(std::string name) { return Variable{std::move(name)}; }
std::string to_string(const Term &t);

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Gt, Le, Ge };

std::string_view to_string(CmpOp op);
bool is_order(CmpOp op);
CmpOp negate(CmpOp op);
/// Evaluates a ground comparison. Order operators on non-numeric operands throw `TypeError`.
bool compare(CmpOp op, const Value &lhs, const Value &rhs);

/// A relational atom P(t1, ..., tk).
struct Atom
{
    std::string relation;
    std::vector<Term> args;

    std::string to_string() const;
    friend bool operator==(const Atom &, const Atom &) = default;
};

/// A built-in comparison between two terms.
struct Comparison
{
    CmpOp op = CmpOp::Eq;
    Term lhs;
    Term rhs;

    std::string to_string() const;
    friend bool operator==(const Comparison &, const Comparison &) = default;
};

/// not [ P1(x1) and ... and Pm(xm) and phi ], all variables universally quantified.
struct DenialConstraint
{
    std::vector<Atom> atoms;
    std::vector<Comparison> conditions;

    /// `not [ P(x1, x2), P(x1, x3), x2 != x3 ]`
    std::string to_string() const;
    friend bool operator==(const DenialConstraint &, const DenialConstraint &) = default;
};

/// X -> Y over one relation. Positions are sorted, duplicate-free, and disjoint once added to a ConstraintSet.
struct FunctionalDependency
{
    std::string relation;
    std::vector<std::size_t> lhs;
    std::vector<std::size_t> rhs;

    friend bool operator==(const FunctionalDependency &, const FunctionalDependency &) = default;
};

/// source[source_positions] <= target[target_positions], matched position by position.
struct InclusionDependency
{
    std::string source;
    std::vector<std::size_t> source_positions;
    std::string target;
    std::vector<std::size_t> target_positions;
    /// Set when the target positions cover every attribute of the target relation.
    bool full = false;

    friend bool operator==(const InclusionDependency &, const InclusionDependency &) = default;
};

std::string to_string(const FunctionalDependency &fd, const Schema &schema);
std::string to_string(const InclusionDependency &ind, const Schema &schema);

/// Renames the variables of a denial constraint to x1, x2, ... in order of first occurrence.
DenialConstraint canonicalize(const DenialConstraint &constraint);

/// Infers the sort of every variable from the attribute positions it occupies. Throws `TypeError` when a variable
/// is used at positions of different sorts, or `SchemaError` for unknown relations and arity mismatches.
std::map<std::string, Sort> infer_variable_sorts(const std::vector<Atom> &atoms, const Schema &schema);

/// Checks that each comparison is safe (its variables occur in `bound`) and well-sorted.
void check_conditions(const std::vector<Comparison> &conditions, const std::map<std::string, Sort> &bound);

/// One binary denial constraint per dependent attribute. Vacuous dependencies yield nothing.
std::vector<DenialConstraint> fd_to_denial(const FunctionalDependency &fd, const Schema &schema);

enum class ConstraintClass : std::uint8_t { DenialOnly, FdsOnly, IndsOnly, SingleKeyFk, AcyclicFdInd, General };

std::string_view to_string(ConstraintClass c);

/// Directed graph with an edge source -> target per inclusion dependency.
struct IndGraph
{
    std::vector<std::string> relations;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    bool acyclic = true;
    /// Sinks-first order over all relations (every IND target precedes its source); empty when cyclic.
    std::vector<std::string> order;
};

class ConstraintSet
{
  public:
    ConstraintSet() = default;
    explicit ConstraintSet(Schema schema);

    const Schema &schema() const noexcept { return schema_; }

    /// Validates relations, arity, sorts and safety.
    void add(DenialConstraint constraint);
    /// Normalizes rhs := rhs - lhs. Returns false (and stores nothing) when the result is vacuous.
    bool add(FunctionalDependency fd);
    void add(InclusionDependency ind);

    const std::vector<DenialConstraint> &denials() const noexcept { return denials_; }
    const std::vector<FunctionalDependency> &fds() const noexcept { return fds_; }
    const std::vector<InclusionDependency> &inds() const noexcept { return inds_; }
    bool empty() const noexcept { return denials_.empty() && fds_.empty() && inds_.empty(); }

    ConstraintClass classification() const noexcept { return class_; }

    /// Denial constraints plus the denial form of every FD.
    std::vector<DenialConstraint> as_denials() const;
    /// Copy restricted to the FDs (respectively INDs) of this set, same schema.
    ConstraintSet fd_part() const;
    ConstraintSet ind_part() const;

    /// Every constraint in text form, one per entry.
    std::vector<std::string> describe() const;

  private:
    void reclassify();

    Schema schema_;
    std::vector<DenialConstraint> denials_;
    std::vector<FunctionalDependency> fds_;
    std::vector<InclusionDependency> inds_;
    ConstraintClass class_ = ConstraintClass::FdsOnly;
};

IndGraph ind_graph(const ConstraintSet &ics);

/// The most specific tag: an empty set is fds-only; denials without INDs are denial-only; FDs and INDs together are
/// single-key-fk when every FD has a declared key as its left-hand side, every IND targets a declared key, and no
/// relation declares more than one key; otherwise acyclic-fd-ind when the IND graph is acyclic, else general.
ConstraintClass classify(const ConstraintSet &ics);

/// The single-key conditions alone (no denials, key FDs, foreign keys, at most one declared key per relation).
bool satisfies_single_key_conditions(const ConstraintSet &ics);

}
