#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mirrorcurve/mobius.hpp"
#include "mirrorcurve/rational.hpp"

namespace mc {

using VertexId = int;
using EdgeId = int;

struct Edge {
    std::string name;
    VertexId ends[2];  // no loops, so ends[0] != ends[1]
    Rat area;          // A_e > 0
};

/// Combinatorial input: a connected trivalent graph without loops, with a
/// positive area per edge. Multi-edges are allowed (the theta graph).
class TrivalentGraph {
  public:
    TrivalentGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges);

    std::size_t num_vertices() const { return vertex_names_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const std::string& vertex_name(VertexId v) const { return vertex_names_[v]; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }

    VertexId vertex_index(const std::string& name) const;
    EdgeId edge_index(const std::string& name) const;

    /// Incident edges at v, ordered by edge index (three of them when valid).
    const std::vector<EdgeId>& incident(VertexId v) const { return incidence_[v]; }
    VertexId other_end(EdgeId e, VertexId v) const;
    bool is_incident(EdgeId e, VertexId v) const;

    long genus() const { return long(num_edges()) - long(num_vertices()) + 1; }
    Rat min_area() const;
    Rat max_area() const;

    /// Trivalence, no loops, connectivity, positive areas. Empty list = valid.
    std::vector<std::string> validate() const;

  private:
    std::vector<std::string> vertex_names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> incidence_;
};

enum class Marked : std::uint8_t { Zero = 0, One = 1, Inf = 2 };

std::string marked_name(Marked m);

/// Per-vertex assignment of the three marked points {0, 1, inf} to the three
/// incident half-edges, together with the standard coordinates
///   t_0 = z, t_1 = (z-1)/z, t_inf = 1/(1-z)
/// vanishing at the respective points. The default assignment follows the
/// order in which edges appear at the vertex.
class VertexChart {
  public:
    static VertexChart defaults(const TrivalentGraph& g);

    Marked marked_of(VertexId v, EdgeId e) const;
    void set_marked(const TrivalentGraph& g, VertexId v, EdgeId e, Marked m);

    /// The chart map t_{e/v} as a Mobius map in the z coordinate of the vertex sphere.
    MobiusQ chart(VertexId v, EdgeId e) const;

    /// Marked points listed as projective rational points [x : y].
    static std::array<Rat, 2> marked_point(Marked m);
    static MobiusQ standard_chart(Marked m);

    /// Validation: at each vertex the three half-edges carry the three distinct
    /// marked points, and each chart vanishes at its own marked point while
    /// taking values {1, inf} at the other two.
    std::vector<std::string> validate(const TrivalentGraph& g) const;

  private:
    std::vector<std::array<EdgeId, 3>> edge_at_slot_;  // per vertex, slot = Marked
    friend class TrivalentGraph;
};

struct HalfEdge {
    EdgeId e;
    VertexId v;
    friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
};

/// Alternating vertex/edge walk (v0, e1, v1, ..., en, vn) without immediate
/// backtracking (e_{i+1} != e_i as edges).
struct ReducedPath {
    VertexId start = 0;
    std::vector<EdgeId> edges;

    std::size_t length() const { return edges.size(); }
    bool empty() const { return edges.empty(); }

    VertexId end(const TrivalentGraph& g) const;
    std::vector<VertexId> vertices(const TrivalentGraph& g) const;
    /// Pruning weight (1/4) * sum of traversed areas.
    Rat weight(const TrivalentGraph& g) const;
    void check(const TrivalentGraph& g) const;  // throws NotReduced / IncompatibleEndpoints

    ReducedPath parent() const;  // drop the last edge
    std::string str(const TrivalentGraph& g) const;
};

/// All reduced paths from `from` with weight <= budget, ordered BFS by length
/// then lexicographically by edge index. Includes the empty path. Throws
/// CapExceeded if more than `cap` paths qualify.
std::vector<ReducedPath> enumerate_reduced_paths(const TrivalentGraph& g, VertexId from,
                                                 const Rat& budget, std::size_t cap);

/// One based reduced loop per non-tree edge of a BFS spanning tree; the free
/// generators of pi_1(G, base).
std::vector<ReducedPath> cycle_basis(const TrivalentGraph& g, VertexId base);

/// Concatenate and cancel backtracking in the middle. Paths must be composable.
ReducedPath concat_reduce(const TrivalentGraph& g, const ReducedPath& p, const ReducedPath& q);

}  // namespace mc
