#pragma once

#include "repairlab/model/constraint.hpp"
#include "repairlab/model/instance.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace repairlab::hypergraph {

using VertexId = std::size_t;
/// Sorted, duplicate-free vertex ids.
using Edge = std::vector<VertexId>;
/// Membership flags indexed by vertex id.
using VertexSet = std::vector<bool>;

/// Vertices are the facts of an instance in canonical order; an edge is a set of facts that jointly violate one
/// denial constraint. Edges that are supersets of other edges are kept.
class ConflictHypergraph
{
  public:
    /// Grounds every constraint over the instance. The constraints must be plain denial constraints; convert FDs
    /// with `fd_to_denial` first.
    static ConflictHypergraph build(const Instance &instance, const std::vector<DenialConstraint> &constraints);

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    const std::vector<Fact> &vertices() const noexcept { return vertices_; }
    const Fact &vertex(VertexId id) const { return vertices_.at(id); }
    std::optional<VertexId> id_of(const Fact &fact) const;
    /// Throws `InvalidArgument` for a fact that is not a vertex.
    VertexId require_id(const Fact &fact) const;

    const std::vector<Edge> &edges() const noexcept { return edges_; }
    /// Index into the constraint list of the first constraint that produced each edge.
    const std::vector<std::size_t> &edge_constraints() const noexcept { return edge_constraint_; }
    /// Indices of the edges containing `v`, ascending.
    const std::vector<std::size_t> &incident(VertexId v) const { return incident_.at(v); }
    /// The edges containing `fact`, in ascending edge order. Throws `InvalidArgument` for an unknown fact.
    std::vector<Edge> edges_containing(const Fact &fact) const;
    /// True if `{v}` is itself an edge.
    bool in_singleton_edge(VertexId v) const { return singleton_.at(v); }

    /// Membership flags of a sub-instance; throws `InvalidArgument` if it is not a subset of the vertices.
    VertexSet membership(const Instance &subset) const;
    Instance to_instance(const VertexSet &members) const;

    bool is_independent(const VertexSet &members) const;
    /// True if adding `v` to the independent set `members` completes an edge.
    bool blocked(VertexId v, const VertexSet &members) const;
    /// First vertex outside `members` that can be added without completing an edge.
    std::optional<VertexId> addable(const VertexSet &members) const;
    bool is_maximal_independent(const VertexSet &members) const;
    /// Adds vertices in the given order whenever they complete no edge; the result is maximal when `order`
    /// covers every vertex.
    VertexSet greedy_extend(VertexSet members, const std::vector<VertexId> &order) const;

    /// Size-2 edges become graph edges; other edges become auxiliary point nodes joined to their members.
    std::string to_dot() const;
    /// `{"vertices": [{"relation": .., "tuple": [..]}], "edges": [[ids]]}`
    std::string to_json() const;

  private:
    std::vector<Fact> vertices_;
    std::map<Fact, VertexId> ids_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> edge_constraint_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<bool> singleton_;
};

ConflictHypergraph build(const Instance &instance, const std::vector<DenialConstraint> &constraints);
bool is_independent(const ConflictHypergraph &h, const Instance &subset);
bool is_maximal_independent(const ConflictHypergraph &h, const Instance &subset);
std::vector<Edge> edges_containing(const ConflictHypergraph &h, const Fact &fact);

}
