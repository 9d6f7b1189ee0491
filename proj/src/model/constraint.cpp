#include "repairlab/model/constraint.hpp"

#include "repairlab/error.hpp"

#include <algorithm>
#include <set>

namespace repairlab {

std::string to_string(const Term &t)
{
    return is_variable(t) ? as_variable(t).name : as_value(t).to_literal();
}

std::string_view to_string(CmpOp op)
{
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Gt: return ">";
        case CmpOp::Le: return "<=";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

bool is_order(CmpOp op)
{
    return op != CmpOp::Eq && op != CmpOp::Ne;
}

CmpOp negate(CmpOp op)
{
    switch (op) {
        case CmpOp::Eq: return CmpOp::Ne;
        case CmpOp::Ne: return CmpOp::Eq;
        case CmpOp::Lt: return CmpOp::Ge;
        case CmpOp::Gt: return CmpOp::Le;
        case CmpOp::Le: return CmpOp::Gt;
        case CmpOp::Ge: return CmpOp::Lt;
    }
    return op;
}

bool compare(CmpOp op, const Value &lhs, const Value &rhs)
{
    switch (op) {
        case CmpOp::Eq: return lhs == rhs;
        case CmpOp::Ne: return lhs != rhs;
        default: break;
    }
    if (!lhs.is_number() || !rhs.is_number())
        throw TypeError("order comparison " + lhs.to_literal() + " " + std::string(to_string(op)) + " " +
                        rhs.to_literal() + " on non-numeric values");
    auto a = lhs.as_number(), b = rhs.as_number();
    switch (op) {
        case CmpOp::Lt: return a < b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Ge: return a >= b;
        default: return false;
    }
}

std::string Atom::to_string() const
{
    std::string out = relation + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i)
            out += ", ";
        out += repairlab::to_string(args[i]);
    }
    return out + ")";
}

std::string Comparison::to_string() const
{
    return repairlab::to_string(lhs) + " " + std::string(repairlab::to_string(op)) + " " + repairlab::to_string(rhs);
}

std::string DenialConstraint::to_string() const
{
    std::string out = "not [ ";
    bool first = true;
    for (const auto &a : atoms) {
        out += (first ? "" : ", ") + a.to_string();
        first = false;
    }
    for (const auto &c : conditions) {
        out += (first ? "" : ", ") + c.to_string();
        first = false;
    }
    return out + " ]";
}

namespace {

std::string join_attributes(const RelationSchema &rel, const std::vector<std::size_t> &positions)
{
    std::string out;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i)
            out += ", ";
        out += rel.attribute(positions[i]).name;
    }
    return out;
}

void normalize_positions(std::vector<std::size_t> &positions)
{
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
}

}

std::string to_string(const FunctionalDependency &fd, const Schema &schema)
{
    const auto &rel = schema.at(fd.relation);
    std::string lhs = fd.lhs.empty() ? "" : join_attributes(rel, fd.lhs) + " ";
    return fd.relation + ": " + lhs + "-> " + join_attributes(rel, fd.rhs);
}

std::string to_string(const InclusionDependency &ind, const Schema &schema)
{
    return ind.source + "[" + join_attributes(schema.at(ind.source), ind.source_positions) + "] <= " + ind.target +
           "[" + join_attributes(schema.at(ind.target), ind.target_positions) + "]";
}

DenialConstraint canonicalize(const DenialConstraint &constraint)
{
    std::map<std::string, std::string> renaming;
    auto rename = [&](const Term &t) -> Term {
        if (!is_variable(t))
            return t;
        auto [it, inserted] = renaming.try_emplace(as_variable(t).name, "");
        if (inserted)
            it->second = "x" + std::to_string(renaming.size());
        return Variable{it->second};
    };
    DenialConstraint out;
    for (const auto &a : constraint.atoms) {
        Atom atom{a.relation, {}};
        for (const auto &t : a.args)
            atom.args.push_back(rename(t));
        out.atoms.push_back(std::move(atom));
    }
    for (const auto &c : constraint.conditions)
        out.conditions.push_back({c.op, rename(c.lhs), rename(c.rhs)});
    return out;
}

std::map<std::string, Sort> infer_variable_sorts(const std::vector<Atom> &atoms, const Schema &schema)
{
    std::map<std::string, Sort> sorts;
    for (const auto &atom : atoms) {
        const auto *rel = schema.find(atom.relation);
        if (!rel)
            throw SchemaError("unknown relation " + atom.relation);
        if (rel->arity() != atom.args.size())
            throw SchemaError("atom " + atom.to_string() + " has arity " + std::to_string(atom.args.size()) +
                              ", relation " + rel->name() + " expects " + std::to_string(rel->arity()));
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            Sort expected = rel->attribute(i).sort;
            const auto &t = atom.args[i];
            if (!is_variable(t)) {
                if (as_value(t).sort() != expected)
                    throw TypeError("atom " + atom.to_string() + ": constant " + as_value(t).to_literal() +
                                    " does not fit attribute " + rel->attribute(i).name);
                continue;
            }
            auto [it, inserted] = sorts.try_emplace(as_variable(t).name, expected);
            if (!inserted && it->second != expected)
                throw TypeError("variable " + it->first + " is used at both symbolic and numeric positions");
        }
    }
    return sorts;
}

void check_conditions(const std::vector<Comparison> &conditions, const std::map<std::string, Sort> &bound)
{
    for (const auto &c : conditions) {
        auto sort_of = [&](const Term &t) {
            if (!is_variable(t))
                return as_value(t).sort();
            auto it = bound.find(as_variable(t).name);
            if (it == bound.end())
                throw SchemaError("unsafe variable " + as_variable(t).name + " in comparison " + c.to_string() +
                                  ": it occurs in no relational atom");
            return it->second;
        };
        Sort l = sort_of(c.lhs), r = sort_of(c.rhs);
        if (is_order(c.op) && (l != Sort::Numeric || r != Sort::Numeric))
            throw TypeError("order comparison " + c.to_string() + " requires numeric operands");
    }
}

std::vector<DenialConstraint> fd_to_denial(const FunctionalDependency &fd, const Schema &schema)
{
    const auto &rel = schema.at(fd.relation);
    std::vector<DenialConstraint> out;
    for (auto dep : fd.rhs) {
        if (std::find(fd.lhs.begin(), fd.lhs.end(), dep) != fd.lhs.end())
            continue;
        Atom first{fd.relation, {}}, second{fd.relation, {}};
        std::size_t next = 0;
        for (std::size_t i = 0; i < rel.arity(); ++i) {
            bool shared = std::find(fd.lhs.begin(), fd.lhs.end(), i) != fd.lhs.end();
            first.args.push_back(var("x" + std::to_string(++next)));
            second.args.push_back(shared ? first.args.back() : var("x" + std::to_string(++next)));
        }
        DenialConstraint d;
        d.conditions.push_back({CmpOp::Ne, first.args[dep], second.args[dep]});
        d.atoms = {std::move(first), std::move(second)};
        out.push_back(canonicalize(d));
    }
    return out;
}

std::string_view to_string(ConstraintClass c)
{
    switch (c) {
        case ConstraintClass::DenialOnly: return "denial-only";
        case ConstraintClass::FdsOnly: return "fds-only";
        case ConstraintClass::IndsOnly: return "inds-only";
        case ConstraintClass::SingleKeyFk: return "single-key-fk";
        case ConstraintClass::AcyclicFdInd: return "acyclic-fd-ind";
        case ConstraintClass::General: return "general";
    }
    return "?";
}

ConstraintSet::ConstraintSet(Schema schema) : schema_(std::move(schema)) { }

void ConstraintSet::add(DenialConstraint constraint)
{
    if (constraint.atoms.empty())
        throw SchemaError("denial constraint needs at least one relational atom");
    auto sorts = infer_variable_sorts(constraint.atoms, schema_);
    check_conditions(constraint.conditions, sorts);
    denials_.push_back(std::move(constraint));
    reclassify();
}

bool ConstraintSet::add(FunctionalDependency fd)
{
    const auto &rel = schema_.at(fd.relation);
    normalize_positions(fd.lhs);
    normalize_positions(fd.rhs);
    for (auto p : fd.lhs)
        if (p >= rel.arity())
            throw SchemaError("functional dependency on " + fd.relation + " names a position out of range");
    for (auto p : fd.rhs)
        if (p >= rel.arity())
            throw SchemaError("functional dependency on " + fd.relation + " names a position out of range");
    std::erase_if(fd.rhs, [&](std::size_t p) { return std::binary_search(fd.lhs.begin(), fd.lhs.end(), p); });
    if (fd.rhs.empty())
        return false;
    fds_.push_back(std::move(fd));
    reclassify();
    return true;
}

void ConstraintSet::add(InclusionDependency ind)
{
    const auto &src = schema_.at(ind.source);
    const auto &dst = schema_.at(ind.target);
    if (ind.source_positions.empty() || ind.source_positions.size() != ind.target_positions.size())
        throw SchemaError("inclusion dependency " + ind.source + " <= " + ind.target +
                          " needs equally many attributes on both sides");
    for (std::size_t i = 0; i < ind.source_positions.size(); ++i) {
        auto sp = ind.source_positions[i], tp = ind.target_positions[i];
        if (sp >= src.arity() || tp >= dst.arity())
            throw SchemaError("inclusion dependency names a position out of range");
        if (src.attribute(sp).sort != dst.attribute(tp).sort)
            throw TypeError("inclusion dependency " + to_string(ind, schema_) + " pairs attributes of different sorts");
    }
    auto targets = ind.target_positions;
    normalize_positions(targets);
    if (targets.size() != ind.target_positions.size())
        throw SchemaError("inclusion dependency repeats a target attribute");
    ind.full = targets.size() == dst.arity();
    inds_.push_back(std::move(ind));
    reclassify();
}

std::vector<DenialConstraint> ConstraintSet::as_denials() const
{
    auto out = denials_;
    for (const auto &fd : fds_)
        for (auto &d : fd_to_denial(fd, schema_))
            out.push_back(std::move(d));
    return out;
}

ConstraintSet ConstraintSet::fd_part() const
{
    ConstraintSet out(schema_);
    for (const auto &fd : fds_)
        out.add(fd);
    return out;
}

ConstraintSet ConstraintSet::ind_part() const
{
    ConstraintSet out(schema_);
    for (const auto &ind : inds_)
        out.add(ind);
    return out;
}

std::vector<std::string> ConstraintSet::describe() const
{
    std::vector<std::string> out;
    for (const auto &fd : fds_)
        out.push_back("fd " + to_string(fd, schema_));
    for (const auto &ind : inds_)
        out.push_back("ind " + to_string(ind, schema_));
    for (const auto &d : denials_)
        out.push_back("denial " + d.to_string());
    return out;
}

void ConstraintSet::reclassify()
{
    class_ = classify(*this);
}

IndGraph ind_graph(const ConstraintSet &ics)
{
    IndGraph g;
    const auto &schema = ics.schema();
    for (const auto &r : schema.relations())
        g.relations.push_back(r.name());
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const auto &ind : ics.inds())
        edges.emplace(*schema.index_of(ind.source), *schema.index_of(ind.target));
    g.edges.assign(edges.begin(), edges.end());

    // Kahn's algorithm on out-degrees: a relation is ready once all its targets are placed.
    std::size_t n = g.relations.size();
    std::vector<std::size_t> pending(n, 0);
    std::vector<std::vector<std::size_t>> sources_of(n);
    for (auto [s, t] : g.edges) {
        ++pending[s];
        sources_of[t].push_back(s);
    }
    std::vector<bool> placed(n, false);
    std::vector<std::string> order;
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (placed[i] || pending[i] != 0)
                continue;
            placed[i] = true;
            progress = true;
            order.push_back(g.relations[i]);
            for (auto s : sources_of[i])
                --pending[s];
        }
    }
    g.acyclic = order.size() == n;
    if (g.acyclic)
        g.order = std::move(order);
    return g;
}

namespace {

bool is_declared_key(const RelationSchema &rel, std::vector<std::size_t> positions)
{
    normalize_positions(positions);
    return std::any_of(rel.keys().begin(), rel.keys().end(),
                       [&](const Key &k) { return k.positions == positions; });
}

}

bool satisfies_single_key_conditions(const ConstraintSet &ics)
{
    if (!ics.denials().empty())
        return false;
    const auto &schema = ics.schema();
    for (const auto &rel : schema.relations())
        if (rel.keys().size() > 1)
            return false;
    for (const auto &fd : ics.fds())
        if (!is_declared_key(schema.at(fd.relation), fd.lhs))
            return false;
    for (const auto &ind : ics.inds())
        if (!is_declared_key(schema.at(ind.target), ind.target_positions))
            return false;
    return true;
}

ConstraintClass classify(const ConstraintSet &ics)
{
    bool has_denials = !ics.denials().empty();
    bool has_fds = !ics.fds().empty();
    bool has_inds = !ics.inds().empty();
    if (has_denials)
        return has_inds ? ConstraintClass::General : ConstraintClass::DenialOnly;
    if (!has_inds)
        return ConstraintClass::FdsOnly;
    if (!has_fds)
        return ConstraintClass::IndsOnly;
    if (satisfies_single_key_conditions(ics))
        return ConstraintClass::SingleKeyFk;
    if (ind_graph(ics).acyclic)
        return ConstraintClass::AcyclicFdInd;
    return ConstraintClass::General;
}

}
