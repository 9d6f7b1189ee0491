#pragma once

#include "repairlab/model/constraint.hpp"
#include "repairlab/model/instance.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace repairlab {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// First-order formula over relational atoms and comparisons. Quantifiers must be guarded for evaluation:
/// an `Exists` body is a conjunction whose positive atoms bind every quantified variable, a `Forall` body is an
/// implication whose antecedent atoms bind them.
struct Formula
{
    enum class Kind : std::uint8_t { True, False, Atom, Compare, Not, And, Or, Implies, Exists, Forall };

    Kind kind = Kind::True;
    repairlab::Atom atom;
    Comparison comparison;
    std::vector<FormulaPtr> children;
    std::vector<std::string> variables;

    std::string to_string() const;
    /// No variables and no quantifiers.
    bool ground() const;
};

bool operator==(const Formula &lhs, const Formula &rhs);

FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_atom(Atom atom);
FormulaPtr make_compare(Comparison comparison);
FormulaPtr make_not(FormulaPtr body);
FormulaPtr make_and(std::vector<FormulaPtr> children);
FormulaPtr make_or(std::vector<FormulaPtr> children);
FormulaPtr make_implies(FormulaPtr antecedent, FormulaPtr consequent);
FormulaPtr make_exists(std::vector<std::string> variables, FormulaPtr body);
FormulaPtr make_forall(std::vector<std::string> variables, FormulaPtr body);

/// Boolean combination of ground atoms and ground comparisons.
struct GroundQuery
{
    FormulaPtr formula;

    std::string to_string() const;
    bool negation_free() const;
};

/// [exists bound:] A1 and ... and Am and conditions. Variables not listed as bound are free, in order of first
/// occurrence.
struct ConjunctiveQuery
{
    std::vector<std::string> free_variables;
    std::vector<std::string> bound_variables;
    std::vector<Atom> atoms;
    std::vector<Comparison> conditions;

    bool closed() const { return free_variables.empty(); }
    /// No relation symbol occurs twice.
    bool simple() const;
    FormulaPtr to_formula() const;
    std::string to_string() const;

    friend bool operator==(const ConjunctiveQuery &, const ConjunctiveQuery &) = default;
};

using Query = std::variant<GroundQuery, ConjunctiveQuery>;

std::string to_string(const Query &query);
bool is_closed(const Query &query);
/// True when adding facts can never turn the query from true to false.
bool is_monotone(const Query &query);

/// Gives every atom position its own variable. The first occurrence of a variable keeps it; later occurrences and
/// constants become fresh variables tied back by equalities appended to the conditions. Bound variables are then
/// renamed v1, v2, ... by first occurrence. Idempotent.
ConjunctiveQuery normalize(const ConjunctiveQuery &query);

/// Checks relations, arities, sorts and safety against the schema.
void validate(const Query &query, const Schema &schema);

/// Replaces the free variables, in order, by the given constants. The result is closed.
ConjunctiveQuery bind_free(const ConjunctiveQuery &query, const std::vector<Value> &values);

/// When equalities pin every variable of a closed query to a constant, the equivalent ground query.
std::optional<GroundQuery> as_ground(const ConjunctiveQuery &query);

using Binding = std::map<std::string, Value>;

/// Unifies an atom with a fact, extending `binding`. On failure `binding` is left unchanged.
bool match(const Atom &atom, const Fact &fact, Binding &binding);
/// Value of a term under a binding; throws `InvalidArgument` for an unbound variable.
const Value &resolve(const Term &term, const Binding &binding);
bool holds(const Comparison &comparison, const Binding &binding);

/// Evaluates a formula on an instance with guarded quantifiers. Throws `InvalidArgument` on an unguarded variable.
bool evaluate(const Formula &formula, const Instance &instance, Binding &binding);
bool evaluate(const Formula &formula, const Instance &instance);
/// Evaluates a closed query.
bool evaluate(const Query &query, const Instance &instance);
/// Answers of a conjunctive query as tuples over its free variables, sorted and duplicate-free.
std::vector<std::vector<Value>> answers(const ConjunctiveQuery &query, const Instance &instance);

}
