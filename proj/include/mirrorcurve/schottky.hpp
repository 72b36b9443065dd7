#pragma once

#include "mirrorcurve/graph.hpp"
#include "mirrorcurve/mobius.hpp"

namespace mc {

/// Edge gluing and path transports of the Schottky groupoid: the maps
/// g_{e/v} : Y_v -> Y_{v'} characterized by t_{e/v'}(g_{e/v}(x)) = q_e / t_{e/v}(x)
/// with q_e = T^{A_e}, expressed in the spheres' z coordinates.
class SchottkyGroupoid {
  public:
    /// work_prec truncates matrix entries along compositions (the maps are
    /// projective, so entry truncation is sound for evaluations mod T^p).
    SchottkyGroupoid(const TrivalentGraph& g, const VertexChart& charts,
                     ExtRat work_prec = ExtRat::infinity())
        : g_(&g), charts_(&charts), prec_(std::move(work_prec)) {}

    const TrivalentGraph& graph() const { return *g_; }
    const VertexChart& charts() const { return *charts_; }
    const ExtRat& work_prec() const { return prec_; }

    /// g_{e/v} : Y_v -> Y_{v'} in z coordinates (exact entries).
    MobiusN generator(EdgeId e, VertexId v) const;

    /// gamma_P^{e0,e}: the Mobius map expressing t_{e0/v0} as a function of
    /// t_{e/vn} under the edge gluings and chart changes along the reduced path
    /// P. For the empty path this is the chart change t_{e0/v0} o t_{e/v0}^{-1}
    /// (e = e0 gives the identity map).
    MobiusN path_transport(const ReducedPath& p, EdgeId e0, EdgeId e) const;

    /// g_P = g_{en/v_{n-1}} o ... o g_{e1/v0} : Y_{v0} -> Y_{vn} in z coordinates.
    MobiusN loop_action(const ReducedPath& p) const;

    /// Incremental pieces of path_transport: a path core is
    /// C_{e0/v0} * g_{e1/v0}^{-1} * ... * g_{en/v_{n-1}}^{-1}; appending the
    /// inverse chart of a half-edge at the endpoint finishes the transport.
    MobiusN core_start(EdgeId e0, VertexId v0) const;
    MobiusN core_extend(const MobiusN& core, EdgeId e, VertexId from) const;
    MobiusN core_finish(const MobiusN& core, EdgeId e, VertexId end) const;

  private:
    const TrivalentGraph* g_;
    const VertexChart* charts_;
    ExtRat prec_;
    MobiusN clip(MobiusN m) const;
};

/// BFS over reduced paths from v0 within the weight budget, carrying the
/// transport cores. visit(path, core) is called for every path, including the
/// empty one. Throws CapExceeded when more than cap paths qualify.
template <class F>
void walk_reduced_paths(const SchottkyGroupoid& s, VertexId v0, EdgeId e0, const Rat& budget,
                        std::size_t cap, F&& visit) {
    const TrivalentGraph& g = s.graph();
    struct Item {
        ReducedPath path;
        MobiusN core;
    };
    std::vector<Item> frontier{{ReducedPath{v0, {}}, s.core_start(e0, v0)}};
    std::size_t count = 1;
    visit(frontier[0].path, frontier[0].core);
    while (!frontier.empty()) {
        std::vector<Item> next;
        for (const auto& item : frontier) {
            VertexId v = item.path.end(g);
            for (EdgeId e : g.incident(v)) {
                if (!item.path.edges.empty() && e == item.path.edges.back()) continue;
                ReducedPath q = item.path;
                q.edges.push_back(e);
                if (q.weight(g) > budget) continue;
                if (++count > cap) throw CapExceeded("path walk exceeded cap");
                Item it{std::move(q), s.core_extend(item.core, e, v)};
                visit(it.path, it.core);
                next.push_back(std::move(it));
            }
        }
        frontier = std::move(next);
    }
}

/// Left side of the Schottky-groupoid resummation identity: the iterated
/// series sum  C^{v0;e0,e1}_{k,k1} ... C^{vn;en,e}_{kn,0} q^{k1}...q^{kn}
/// over all k_i >= 0, truncated mod T^lambda. Equals gamma_P^{e0,e}(0)^{-k}.
Novikov propagation_series_sum(const SchottkyGroupoid& s, const ReducedPath& p, EdgeId e0, EdgeId e,
                               long k, const Rat& lambda);

}  // namespace mc
