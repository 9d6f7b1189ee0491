#include "repairlab/hypergraph/hypergraph.hpp"

#include "repairlab/error.hpp"
#include "repairlab/model/query.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace repairlab::hypergraph {

namespace {

using Key = std::vector<Value>;
using Index = std::map<Key, std::vector<VertexId>>;

/// Grounds one denial constraint with atoms joined left to right. Each atom probes an ordered index on
/// the positions that are constant or already bound when it is reached.
class Grounder
{
  public:
    Grounder(const std::vector<Fact> &vertices, const DenialConstraint &denial)
        : vertices_(vertices)
        , denial_(denial)
    {
        std::set<std::string> bound;
        for (const auto &atom : denial.atoms) {
            std::vector<std::size_t> probe;
            for (std::size_t i = 0; i < atom.args.size(); ++i) {
                const auto &t = atom.args[i];
                if (!is_variable(t) || bound.contains(as_variable(t).name))
                    probe.push_back(i);
            }
            for (const auto &t : atom.args)
                if (is_variable(t))
                    bound.insert(as_variable(t).name);
            probes_.push_back(std::move(probe));
            indexes_.push_back(build_index(atom.relation, probes_.back()));
            // Conditions are checked as soon as all their variables are bound.
            std::vector<const Comparison *> ready;
            for (const auto &c : denial.conditions) {
                if (scheduled_.contains(&c))
                    continue;
                auto known = [&](const Term &t) { return !is_variable(t) || bound.contains(as_variable(t).name); };
                if (known(c.lhs) && known(c.rhs)) {
                    ready.push_back(&c);
                    scheduled_.insert(&c);
                }
            }
            checks_.push_back(std::move(ready));
        }
    }

    template<typename Visit>
    void run(Visit &&visit)
    {
        Binding binding;
        std::vector<VertexId> chosen;
        step(0, binding, chosen, visit);
    }

  private:
    Index build_index(const std::string &relation, const std::vector<std::size_t> &positions) const
    {
        Index index;
        for (VertexId v = 0; v < vertices_.size(); ++v) {
            const auto &f = vertices_[v];
            if (f.relation != relation)
                continue;
            Key key;
            for (auto p : positions)
                key.push_back(f.values.at(p));
            index[key].push_back(v);
        }
        return index;
    }

    template<typename Visit>
    void step(std::size_t i, Binding &binding, std::vector<VertexId> &chosen, Visit &visit)
    {
        if (i == denial_.atoms.size()) {
            visit(chosen);
            return;
        }
        const Atom &atom = denial_.atoms[i];
        Key key;
        for (auto p : probes_[i])
            key.push_back(resolve(atom.args[p], binding));
        auto it = indexes_[i].find(key);
        if (it == indexes_[i].end())
            return;
        for (VertexId v : it->second) {
            if (vertices_[v].values.size() != atom.args.size())
                continue;
            Binding extended = binding;
            if (!match(atom, vertices_[v], extended))
                continue;
            bool ok = std::all_of(checks_[i].begin(), checks_[i].end(),
                                  [&](const Comparison *c) { return holds(*c, extended); });
            if (!ok)
                continue;
            chosen.push_back(v);
            step(i + 1, extended, chosen, visit);
            chosen.pop_back();
        }
    }

    const std::vector<Fact> &vertices_;
    const DenialConstraint &denial_;
    std::vector<std::vector<std::size_t>> probes_;
    std::vector<Index> indexes_;
    std::vector<std::vector<const Comparison *>> checks_;
    std::set<const Comparison *> scheduled_;
};

std::string dot_escape(const std::string &s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

}

ConflictHypergraph ConflictHypergraph::build(const Instance &instance, const std::vector<DenialConstraint> &constraints)
{
    ConflictHypergraph h;
    h.vertices_ = instance.to_vector();
    for (VertexId v = 0; v < h.vertices_.size(); ++v)
        h.ids_.emplace(h.vertices_[v], v);

    std::map<Edge, std::size_t> found;
    for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
        if (constraints[ci].atoms.empty())
            throw InvalidArgument("denial constraint without atoms");
        Grounder grounder(h.vertices_, constraints[ci]);
        grounder.run([&](const std::vector<VertexId> &chosen) {
            Edge e = chosen;
            std::sort(e.begin(), e.end());
            e.erase(std::unique(e.begin(), e.end()), e.end());
            found.try_emplace(std::move(e), ci);
        });
    }
    h.incident_.assign(h.vertices_.size(), {});
    h.singleton_.assign(h.vertices_.size(), false);
    for (auto &[edge, ci] : found) {
        std::size_t index = h.edges_.size();
        for (auto v : edge)
            h.incident_[v].push_back(index);
        if (edge.size() == 1)
            h.singleton_[edge.front()] = true;
        h.edges_.push_back(edge);
        h.edge_constraint_.push_back(ci);
    }
    return h;
}

std::optional<VertexId> ConflictHypergraph::id_of(const Fact &fact) const
{
    auto it = ids_.find(fact);
    if (it == ids_.end())
        return std::nullopt;
    return it->second;
}

VertexId ConflictHypergraph::require_id(const Fact &fact) const
{
    auto id = id_of(fact);
    if (!id)
        throw InvalidArgument("fact " + fact.to_string() + " is not a vertex of the conflict hypergraph");
    return *id;
}

std::vector<Edge> ConflictHypergraph::edges_containing(const Fact &fact) const
{
    std::vector<Edge> out;
    for (auto e : incident_[require_id(fact)])
        out.push_back(edges_[e]);
    return out;
}

VertexSet ConflictHypergraph::membership(const Instance &subset) const
{
    VertexSet members(vertices_.size(), false);
    for (const auto &f : subset)
        members[require_id(f)] = true;
    return members;
}

Instance ConflictHypergraph::to_instance(const VertexSet &members) const
{
    Instance out;
    for (VertexId v = 0; v < vertices_.size(); ++v)
        if (members[v])
            out.insert(vertices_[v]);
    return out;
}

bool ConflictHypergraph::is_independent(const VertexSet &members) const
{
    return std::none_of(edges_.begin(), edges_.end(), [&](const Edge &e) {
        return std::all_of(e.begin(), e.end(), [&](VertexId v) { return members[v]; });
    });
}

bool ConflictHypergraph::blocked(VertexId v, const VertexSet &members) const
{
    for (auto ei : incident_[v]) {
        const auto &e = edges_[ei];
        if (std::all_of(e.begin(), e.end(), [&](VertexId u) { return u == v || members[u]; }))
            return true;
    }
    return false;
}

std::optional<VertexId> ConflictHypergraph::addable(const VertexSet &members) const
{
    for (VertexId v = 0; v < vertices_.size(); ++v)
        if (!members[v] && !blocked(v, members))
            return v;
    return std::nullopt;
}

bool ConflictHypergraph::is_maximal_independent(const VertexSet &members) const
{
    return is_independent(members) && !addable(members);
}

VertexSet ConflictHypergraph::greedy_extend(VertexSet members, const std::vector<VertexId> &order) const
{
    for (auto v : order)
        if (!members[v] && !blocked(v, members))
            members[v] = true;
    return members;
}

std::string ConflictHypergraph::to_dot() const
{
    std::string out = "graph conflicts {\n";
    for (VertexId v = 0; v < vertices_.size(); ++v)
        out += "  v" + std::to_string(v) + " [label=\"" + dot_escape(vertices_[v].to_string()) + "\"];\n";
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto &e = edges_[i];
        if (e.size() == 2) {
            out += "  v" + std::to_string(e[0]) + " -- v" + std::to_string(e[1]) + ";\n";
            continue;
        }
        auto aux = "e" + std::to_string(i);
        out += "  " + aux + " [shape=point];\n";
        for (auto v : e)
            out += "  " + aux + " -- v" + std::to_string(v) + ";\n";
    }
    return out + "}\n";
}

std::string ConflictHypergraph::to_json() const
{
    nlohmann::ordered_json doc;
    auto vertices = nlohmann::ordered_json::array();
    for (const auto &f : vertices_) {
        nlohmann::ordered_json tuple = nlohmann::ordered_json::array();
        for (const auto &v : f.values) {
            if (v.is_number())
                tuple.push_back(v.as_number());
            else
                tuple.push_back(v.as_symbol());
        }
        vertices.push_back({{"relation", f.relation}, {"tuple", std::move(tuple)}});
    }
    doc["vertices"] = std::move(vertices);
    doc["edges"] = edges_;
    return doc.dump(2) + "\n";
}

ConflictHypergraph build(const Instance &instance, const std::vector<DenialConstraint> &constraints)
{
    return ConflictHypergraph::build(instance, constraints);
}

bool is_independent(const ConflictHypergraph &h, const Instance &subset)
{
    return h.is_independent(h.membership(subset));
}

bool is_maximal_independent(const ConflictHypergraph &h, const Instance &subset)
{
    return h.is_maximal_independent(h.membership(subset));
}

std::vector<Edge> edges_containing(const ConflictHypergraph &h, const Fact &fact)
{
    return h.edges_containing(fact);
}

}
