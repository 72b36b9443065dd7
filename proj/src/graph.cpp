#include "mirrorcurve/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "mirrorcurve/errors.hpp"

namespace mc {

TrivalentGraph::TrivalentGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges)
    : vertex_names_(std::move(vertex_names)), edges_(std::move(edges)) {
    incidence_.assign(vertex_names_.size(), {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        for (int s = 0; s < 2; ++s) {
            if (e.ends[s] < 0 || e.ends[s] >= VertexId(vertex_names_.size()))
                throw SpecError("edge " + e.name + " references an unknown vertex");
        }
        incidence_[e.ends[0]].push_back(EdgeId(i));
        if (e.ends[1] != e.ends[0]) incidence_[e.ends[1]].push_back(EdgeId(i));
    }
}

VertexId TrivalentGraph::vertex_index(const std::string& name) const {
    for (std::size_t i = 0; i < vertex_names_.size(); ++i)
        if (vertex_names_[i] == name) return VertexId(i);
    throw SpecError("unknown vertex: " + name);
}

EdgeId TrivalentGraph::edge_index(const std::string& name) const {
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].name == name) return EdgeId(i);
    throw SpecError("unknown edge: " + name);
}

VertexId TrivalentGraph::other_end(EdgeId e, VertexId v) const {
    const Edge& ed = edges_[e];
    if (ed.ends[0] == v) return ed.ends[1];
    if (ed.ends[1] == v) return ed.ends[0];
    throw SpecError("edge " + ed.name + " not incident to vertex " + vertex_names_[v]);
}

bool TrivalentGraph::is_incident(EdgeId e, VertexId v) const {
    return edges_[e].ends[0] == v || edges_[e].ends[1] == v;
}

Rat TrivalentGraph::min_area() const {
    if (edges_.empty()) throw SpecError("graph has no edges");
    Rat m = edges_[0].area;
    for (const auto& e : edges_) m = rat_min(m, e.area);
    return m;
}

Rat TrivalentGraph::max_area() const {
    Rat m = edges_.empty() ? Rat(0) : edges_[0].area;
    for (const auto& e : edges_) m = rat_max(m, e.area);
    return m;
}

std::vector<std::string> TrivalentGraph::validate() const {
    std::vector<std::string> issues;
    for (const auto& e : edges_) {
        if (e.ends[0] == e.ends[1])
            issues.push_back("loop at vertex " + vertex_names_[e.ends[0]] + " (edge " + e.name + ")");
        if (e.area <= 0) issues.push_back("non-positive area on edge " + e.name);
    }
    for (std::size_t v = 0; v < vertex_names_.size(); ++v) {
        if (incidence_[v].size() != 3) {
            std::ostringstream os;
            os << "vertex " << vertex_names_[v] << " has degree " << incidence_[v].size()
               << " (expected 3)";
            issues.push_back(os.str());
        }
    }
    if (!vertex_names_.empty()) {
        std::vector<bool> seen(vertex_names_.size(), false);
        std::deque<VertexId> q{0};
        seen[0] = true;
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop_front();
            for (EdgeId e : incidence_[v]) {
                VertexId w = other_end(e, v);
                if (!seen[w]) {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
        if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
            issues.push_back("graph is not connected");
    }
    return issues;
}

std::string marked_name(Marked m) {
    switch (m) {
        case Marked::Zero: return "0";
        case Marked::One: return "1";
        case Marked::Inf: return "inf";
    }
    return "?";
}

VertexChart VertexChart::defaults(const TrivalentGraph& g) {
    VertexChart c;
    c.edge_at_slot_.assign(g.num_vertices(), {-1, -1, -1});
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const auto& inc = g.incident(VertexId(v));
        for (std::size_t s = 0; s < inc.size() && s < 3; ++s) c.edge_at_slot_[v][s] = inc[s];
    }
    return c;
}

Marked VertexChart::marked_of(VertexId v, EdgeId e) const {
    for (int s = 0; s < 3; ++s)
        if (edge_at_slot_[v][s] == e) return Marked(s);
    throw SpecError("no chart for the given half-edge");
}

void VertexChart::set_marked(const TrivalentGraph& g, VertexId v, EdgeId e, Marked m) {
    if (!g.is_incident(e, v)) throw SpecError("set_marked: half-edge does not exist");
    Marked old = marked_of(v, e);
    EdgeId displaced = edge_at_slot_[v][int(m)];
    edge_at_slot_[v][int(m)] = e;
    edge_at_slot_[v][int(old)] = displaced;
}

MobiusQ VertexChart::standard_chart(Marked m) {
    switch (m) {
        case Marked::Zero: return {Rat(1), Rat(0), Rat(0), Rat(1)};   // z
        case Marked::One: return {Rat(1), Rat(-1), Rat(1), Rat(0)};   // (z-1)/z
        case Marked::Inf: return {Rat(0), Rat(1), Rat(-1), Rat(1)};   // 1/(1-z)
    }
    throw SpecError("bad marked point");
}

std::array<Rat, 2> VertexChart::marked_point(Marked m) {
    switch (m) {
        case Marked::Zero: return {Rat(0), Rat(1)};
        case Marked::One: return {Rat(1), Rat(1)};
        case Marked::Inf: return {Rat(1), Rat(0)};
    }
    throw SpecError("bad marked point");
}

MobiusQ VertexChart::chart(VertexId v, EdgeId e) const { return standard_chart(marked_of(v, e)); }

std::vector<std::string> VertexChart::validate(const TrivalentGraph& g) const {
    std::vector<std::string> issues;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const auto& slots = edge_at_slot_[v];
        for (int s = 0; s < 3; ++s) {
            if (slots[s] < 0) {
                issues.push_back("vertex " + g.vertex_name(VertexId(v)) + ": unassigned chart slot");
                continue;
            }
            // chart vanishes at its own marked point, takes {1, inf} at the others
            MobiusQ t = standard_chart(Marked(s));
            auto own = marked_point(Marked(s));
            auto img = t.apply_proj(own[0], own[1]);
            if (img[0] != 0) issues.push_back("chart does not vanish at its marked point");
            for (int o = 0; o < 3; ++o) {
                if (o == s) continue;
                auto p = marked_point(Marked(o));
                auto q = t.apply_proj(p[0], p[1]);
                bool is_one = (q[1] != 0 && q[0] == q[1]);
                bool is_inf = (q[1] == 0 && q[0] != 0);
                if (!is_one && !is_inf)
                    issues.push_back("chart value at another marked point is not 1 or inf");
            }
        }
        for (int s = 0; s < 3; ++s)
            for (int t = s + 1; t < 3; ++t)
                if (slots[s] == slots[t])
                    issues.push_back("vertex " + g.vertex_name(VertexId(v)) +
                                     ": two slots share one half-edge");
    }
    return issues;
}

VertexId ReducedPath::end(const TrivalentGraph& g) const {
    VertexId v = start;
    for (EdgeId e : edges) v = g.other_end(e, v);
    return v;
}

std::vector<VertexId> ReducedPath::vertices(const TrivalentGraph& g) const {
    std::vector<VertexId> vs{start};
    VertexId v = start;
    for (EdgeId e : edges) {
        v = g.other_end(e, v);
        vs.push_back(v);
    }
    return vs;
}

Rat ReducedPath::weight(const TrivalentGraph& g) const {
    Rat w(0);
    for (EdgeId e : edges) w += g.edge(e).area;
    return w / 4;
}

void ReducedPath::check(const TrivalentGraph& g) const {
    VertexId v = start;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!g.is_incident(edges[i], v))
            throw IncompatibleEndpoints("path edge " + g.edge(edges[i]).name +
                                        " not incident to current vertex");
        if (i > 0 && edges[i] == edges[i - 1])
            throw NotReduced("immediate backtracking at edge " + g.edge(edges[i]).name);
        v = g.other_end(edges[i], v);
    }
}

ReducedPath ReducedPath::parent() const {
    ReducedPath p = *this;
    if (!p.edges.empty()) p.edges.pop_back();
    return p;
}

std::string ReducedPath::str(const TrivalentGraph& g) const {
    std::ostringstream os;
    os << g.vertex_name(start);
    VertexId v = start;
    for (EdgeId e : edges) {
        v = g.other_end(e, v);
        os << "-" << g.edge(e).name << "-" << g.vertex_name(v);
    }
    return os.str();
}

std::vector<ReducedPath> enumerate_reduced_paths(const TrivalentGraph& g, VertexId from,
                                                 const Rat& budget, std::size_t cap) {
    if (budget <= 0) throw SpecError("enumerate_reduced_paths: budget must be positive");
    std::vector<ReducedPath> out;
    std::deque<ReducedPath> frontier;
    ReducedPath root{from, {}};
    out.push_back(root);
    frontier.push_back(root);
    while (!frontier.empty()) {
        ReducedPath p = frontier.front();
        frontier.pop_front();
        VertexId v = p.end(g);
        for (EdgeId e : g.incident(v)) {
            if (!p.edges.empty() && e == p.edges.back()) continue;
            ReducedPath q = p;
            q.edges.push_back(e);
            if (q.weight(g) > budget) continue;
            out.push_back(q);
            if (out.size() > cap) throw CapExceeded("reduced-path enumeration exceeded cap");
            frontier.push_back(q);
        }
    }
    return out;
}

ReducedPath concat_reduce(const TrivalentGraph& g, const ReducedPath& p, const ReducedPath& q) {
    if (p.end(g) != q.start) throw IncompatibleEndpoints("concat of non-composable paths");
    ReducedPath r = p;
    for (EdgeId e : q.edges) {
        if (!r.edges.empty() && r.edges.back() == e)
            r.edges.pop_back();
        else
            r.edges.push_back(e);
    }
    r.check(g);
    return r;
}

std::vector<ReducedPath> cycle_basis(const TrivalentGraph& g, VertexId base) {
    // BFS spanning tree; deterministic by vertex/edge index.
    std::vector<EdgeId> tree_edge_to(g.num_vertices(), -1);
    std::vector<bool> seen(g.num_vertices(), false);
    std::deque<VertexId> q{base};
    seen[base] = true;
    std::vector<bool> in_tree(g.num_edges(), false);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        for (EdgeId e : g.incident(v)) {
            VertexId w = g.other_end(e, v);
            if (!seen[w]) {
                seen[w] = true;
                tree_edge_to[w] = e;
                in_tree[e] = true;
                q.push_back(w);
            }
        }
    }
    auto path_from_base = [&](VertexId v) {
        std::vector<EdgeId> rev;
        VertexId u = v;
        while (u != base) {
            EdgeId e = tree_edge_to[u];
            rev.push_back(e);
            u = g.other_end(e, u);
        }
        std::reverse(rev.begin(), rev.end());
        return ReducedPath{base, rev};
    };
    std::vector<ReducedPath> loops;
    for (std::size_t ei = 0; ei < g.num_edges(); ++ei) {
        if (in_tree[ei]) continue;
        const Edge& e = g.edge(EdgeId(ei));
        ReducedPath up = path_from_base(e.ends[0]);
        ReducedPath down = path_from_base(e.ends[1]);
        std::reverse(down.edges.begin(), down.edges.end());
        ReducedPath back{e.ends[1], down.edges};
        ReducedPath loop = up;
        loop.edges.push_back(EdgeId(ei));
        loop = concat_reduce(g, loop, back);
        loops.push_back(loop);
    }
    return loops;
}

}  // namespace mc
