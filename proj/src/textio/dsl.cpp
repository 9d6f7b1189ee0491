#include "lexer.hpp"
#include "repairlab/error.hpp"
#include "repairlab/textio/textio.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

namespace repairlab::textio {

using detail::Cursor;
using detail::Tok;
using detail::Token;

namespace {

/// Re-raises model errors found while processing a declaration as parse errors located at its first token.
template<typename F>
auto located(const Cursor &cur, const Token &start, F &&body)
{
    try {
        return body();
    } catch (const ParseError &) {
        throw;
    } catch (const Error &e) {
        throw ParseError(cur.span(start), e.what());
    }
}

Term parse_term(Cursor &cur)
{
    const Token &t = cur.peek();
    switch (t.kind) {
        case Tok::Ident: return var(cur.next().text);
        case Tok::Int: return num(cur.next().number);
        case Tok::String: return sym(cur.next().text);
        default: cur.fail(t, "expected a variable or constant");
    }
}

std::vector<std::string> parse_names(Cursor &cur)
{
    std::vector<std::string> names{cur.expect(Tok::Ident, "a name").text};
    while (cur.accept(Tok::Comma))
        names.push_back(cur.expect(Tok::Ident, "a name").text);
    return names;
}

Atom parse_atom(Cursor &cur)
{
    Atom atom{cur.expect(Tok::Ident, "a relation name").text, {}};
    cur.expect(Tok::LParen, "'('");
    if (!cur.at(Tok::RParen)) {
        atom.args.push_back(parse_term(cur));
        while (cur.accept(Tok::Comma))
            atom.args.push_back(parse_term(cur));
    }
    cur.expect(Tok::RParen, "')'");
    return atom;
}

std::optional<CmpOp> comparison_op(Tok kind)
{
    switch (kind) {
        case Tok::Eq: return CmpOp::Eq;
        case Tok::Ne: return CmpOp::Ne;
        case Tok::Lt: return CmpOp::Lt;
        case Tok::Gt: return CmpOp::Gt;
        case Tok::Le: return CmpOp::Le;
        case Tok::Ge: return CmpOp::Ge;
        default: return std::nullopt;
    }
}

Comparison parse_comparison(Cursor &cur)
{
    Comparison c;
    c.lhs = parse_term(cur);
    auto op = comparison_op(cur.peek().kind);
    if (!op)
        cur.fail(cur.peek(), "expected a comparison operator");
    cur.next();
    c.op = *op;
    c.rhs = parse_term(cur);
    return c;
}

std::vector<std::size_t> positions_of(const RelationSchema &rel, const std::vector<std::string> &names)
{
    std::vector<std::size_t> out;
    for (const auto &n : names)
        out.push_back(rel.require_position(n));
    return out;
}

void parse_key(Cursor &cur, Schema &schema, const Token &start, bool primary)
{
    const Token &rel_tok = cur.expect(Tok::Ident, "a relation name");
    cur.expect(Tok::Colon, "':'");
    auto names = parse_names(cur);
    located(cur, start, [&] {
        auto *rel = schema.find(rel_tok.text);
        if (!rel)
            throw SchemaError("key on unknown relation " + rel_tok.text);
        Key key{positions_of(*rel, names), primary};
        std::sort(key.positions.begin(), key.positions.end());
        key.positions.erase(std::unique(key.positions.begin(), key.positions.end()), key.positions.end());
        rel->add_key(std::move(key));
        return 0;
    });
}

// Query formulas ----------------------------------------------------------------------------------------------

FormulaPtr parse_implies(Cursor &cur);

FormulaPtr parse_unary(Cursor &cur)
{
    if (cur.accept_word("not"))
        return make_not(parse_unary(cur));
    if (cur.accept(Tok::LParen)) {
        auto inner = parse_implies(cur);
        cur.expect(Tok::RParen, "')'");
        return inner;
    }
    const Token &t = cur.peek();
    if (t.kind == Tok::Ident && cur.peek(1).kind == Tok::LParen)
        return make_atom(parse_atom(cur));
    if (t.kind == Tok::Ident && (t.text == "true" || t.text == "false") && !comparison_op(cur.peek(1).kind)) {
        cur.next();
        return t.text == "true" ? make_true() : make_false();
    }
    return make_compare(parse_comparison(cur));
}

FormulaPtr parse_and(Cursor &cur)
{
    std::vector<FormulaPtr> parts{parse_unary(cur)};
    while (cur.accept_word("and"))
        parts.push_back(parse_unary(cur));
    return make_and(std::move(parts));
}

FormulaPtr parse_or(Cursor &cur)
{
    std::vector<FormulaPtr> parts{parse_and(cur)};
    while (cur.accept_word("or"))
        parts.push_back(parse_and(cur));
    return make_or(std::move(parts));
}

/// Implication binds weakest and does not chain: `a -> b -> c` needs parentheses.
FormulaPtr parse_implies(Cursor &cur)
{
    auto lhs = parse_or(cur);
    if (!cur.accept(Tok::Arrow))
        return lhs;
    return make_implies(std::move(lhs), parse_or(cur));
}

void collect_variables(const Formula &f, std::vector<std::string> &order, std::set<std::string> &seen)
{
    auto note = [&](const Term &t) {
        if (is_variable(t) && seen.insert(as_variable(t).name).second)
            order.push_back(as_variable(t).name);
    };
    if (f.kind == Formula::Kind::Atom)
        for (const auto &t : f.atom.args)
            note(t);
    if (f.kind == Formula::Kind::Compare) {
        note(f.comparison.lhs);
        note(f.comparison.rhs);
    }
    for (const auto &c : f.children)
        collect_variables(*c, order, seen);
}

}

Schema parse_schema(std::string_view text, const std::string &file)
{
    Cursor cur(detail::tokenize(text, file), file);
    Schema schema;
    while (!cur.at(Tok::End)) {
        const Token start = cur.peek();
        if (cur.accept_word("relation")) {
            const Token &name = cur.expect(Tok::Ident, "a relation name");
            cur.expect(Tok::LParen, "'('");
            std::vector<Attribute> attrs;
            do {
                Attribute a;
                a.name = cur.expect(Tok::Ident, "an attribute name").text;
                cur.expect(Tok::Colon, "':'");
                const Token &sort = cur.expect(Tok::Ident, "'sym' or 'num'");
                if (sort.text == "sym")
                    a.sort = Sort::Symbolic;
                else if (sort.text == "num")
                    a.sort = Sort::Numeric;
                else
                    cur.fail(sort, "expected 'sym' or 'num'");
                attrs.push_back(std::move(a));
            } while (cur.accept(Tok::Comma));
            cur.expect(Tok::RParen, "')'");
            located(cur, start, [&] {
                schema.add_relation(RelationSchema(name.text, std::move(attrs)));
                return 0;
            });
        } else if (cur.accept_word("primary")) {
            cur.expect_word("key");
            parse_key(cur, schema, start, true);
        } else if (cur.accept_word("key")) {
            parse_key(cur, schema, start, false);
        } else {
            cur.fail(start, "expected a 'relation' or 'key' declaration");
        }
    }
    return schema;
}

ConstraintSet parse_constraints(std::string_view text, const Schema &schema, const std::string &file)
{
    Cursor cur(detail::tokenize(text, file), file);
    ConstraintSet ics(schema);
    while (!cur.at(Tok::End)) {
        const Token start = cur.peek();
        if (cur.accept_word("fd")) {
            const Token &rel = cur.expect(Tok::Ident, "a relation name");
            cur.expect(Tok::Colon, "':'");
            // An empty left-hand side makes the right-hand side constant across the relation.
            auto lhs = cur.at(Tok::Arrow) ? std::vector<std::string>{} : parse_names(cur);
            cur.expect(Tok::Arrow, "'->'");
            auto rhs = parse_names(cur);
            located(cur, start, [&] {
                const auto &r = schema.at(rel.text);
                ics.add(FunctionalDependency{rel.text, positions_of(r, lhs), positions_of(r, rhs)});
                return 0;
            });
        } else if (cur.accept_word("ind")) {
            const Token &src = cur.expect(Tok::Ident, "a relation name");
            cur.expect(Tok::LBracket, "'['");
            auto src_names = parse_names(cur);
            cur.expect(Tok::RBracket, "']'");
            cur.expect(Tok::Le, "'<='");
            const Token &dst = cur.expect(Tok::Ident, "a relation name");
            cur.expect(Tok::LBracket, "'['");
            auto dst_names = parse_names(cur);
            cur.expect(Tok::RBracket, "']'");
            located(cur, start, [&] {
                InclusionDependency ind;
                ind.source = src.text;
                ind.source_positions = positions_of(schema.at(src.text), src_names);
                ind.target = dst.text;
                ind.target_positions = positions_of(schema.at(dst.text), dst_names);
                ics.add(std::move(ind));
                return 0;
            });
        } else if (cur.accept_word("denial")) {
            cur.expect_word("not");
            cur.expect(Tok::LBracket, "'['");
            DenialConstraint d;
            do {
                if (cur.at(Tok::Ident) && cur.peek(1).kind == Tok::LParen)
                    d.atoms.push_back(parse_atom(cur));
                else
                    d.conditions.push_back(parse_comparison(cur));
            } while (cur.accept(Tok::Comma));
            cur.expect(Tok::RBracket, "']'");
            located(cur, start, [&] {
                ics.add(canonicalize(d));
                return 0;
            });
        } else {
            cur.fail(start, "expected an 'fd', 'ind' or 'denial' declaration");
        }
    }
    return ics;
}

Query parse_query(std::string_view text, const Schema &schema, const std::string &file)
{
    Cursor cur(detail::tokenize(text, file), file);
    const Token start = cur.peek();
    if (cur.at_word("query") && cur.peek(1).kind != Tok::LParen)
        cur.next();
    std::vector<std::string> bound;
    if (cur.at_word("exists") && cur.peek(1).kind == Tok::Ident) {
        cur.next();
        bound = parse_names(cur);
        cur.expect(Tok::Colon, "':'");
    }
    auto formula = parse_implies(cur);
    if (!cur.at(Tok::End))
        cur.fail(cur.peek(), "expected end of query");

    std::vector<std::string> vars;
    std::set<std::string> seen;
    collect_variables(*formula, vars, seen);
    return located(cur, start, [&]() -> Query {
        if (bound.empty() && vars.empty()) {
            Query q = GroundQuery{formula};
            validate(q, schema);
            return q;
        }
        std::vector<FormulaPtr> conjuncts;
        if (formula->kind == Formula::Kind::And)
            conjuncts = formula->children;
        else
            conjuncts.push_back(formula);
        ConjunctiveQuery cq;
        for (const auto &c : conjuncts) {
            if (c->kind == Formula::Kind::Atom)
                cq.atoms.push_back(c->atom);
            else if (c->kind == Formula::Kind::Compare)
                cq.conditions.push_back(c->comparison);
            else
                throw InvalidArgument("a query with variables must be a conjunction of atoms and comparisons");
        }
        std::set<std::string> bound_set;
        for (const auto &v : bound) {
            if (!seen.contains(v))
                throw InvalidArgument("quantified variable " + v + " does not occur in the query");
            if (!bound_set.insert(v).second)
                throw InvalidArgument("variable " + v + " is quantified twice");
        }
        cq.bound_variables = bound;
        for (const auto &v : vars)
            if (!bound_set.contains(v))
                cq.free_variables.push_back(v);
        Query q = cq;
        validate(q, schema);
        return normalize(cq);
    });
}

std::string serialize_schema(const Schema &schema)
{
    std::string out;
    for (const auto &rel : schema.relations()) {
        out += "relation " + rel.name() + "(";
        for (std::size_t i = 0; i < rel.arity(); ++i) {
            if (i)
                out += ", ";
            out += rel.attribute(i).name + ": " + std::string(to_string(rel.attribute(i).sort));
        }
        out += ")\n";
    }
    for (const auto &rel : schema.relations()) {
        for (const auto &key : rel.keys()) {
            out += key.primary ? "primary key " : "key ";
            out += rel.name() + ": ";
            for (std::size_t i = 0; i < key.positions.size(); ++i)
                out += (i ? ", " : "") + rel.attribute(key.positions[i]).name;
            out += "\n";
        }
    }
    return out;
}

std::string serialize_constraints(const ConstraintSet &ics)
{
    std::string out;
    for (const auto &line : ics.describe())
        out += line + "\n";
    return out;
}

std::string serialize_query(const Query &query)
{
    return to_string(query) + "\n";
}

}
