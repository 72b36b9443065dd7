#pragma once

#include "mirrorcurve/bside.hpp"
#include "mirrorcurve/hpl.hpp"

namespace mc {

/// The two-step Cech model of the structure sheaf for the cover {U_v}:
///   C^0 = (+) over v of O(U_v),  C^1 = (+) over e of O(U_e),
/// with basis the constants and pole/Laurent monomials inside a window,
/// the restriction-difference differential, and the cup product. Weights carry
/// the sup norms; the generating subset holds the monomials the algebra is
/// generated by at the cutoff, while the window is deep enough for products
/// along transfer trees.
struct CechDG {
    GradedBasis basis;
    NovikovMatrix d;
    Mu2 cup;
    std::vector<int> generating;
    std::vector<int> unit;  // indices of the per-vertex constants (the cup unit)

    struct Key0 {  // degree-0 basis element: constant or pole at a vertex
        VertexId v;
        bool is_unit;
        EdgeId e;
        long j;
        friend auto operator<=>(const Key0&, const Key0&) = default;
    };
    struct Key1 {  // degree-1 basis element: monomial on an edge (canonical frame)
        EdgeId e;
        long m;
        friend auto operator<=>(const Key1&, const Key1&) = default;
    };
    std::map<Key0, int> index0;
    std::map<Key1, int> index1;
};

/// window_factor >= n_max + 1 keeps every product of generating monomials along
/// a transfer tree inside the basis window.
CechDG build_cech_dg(const BsideContext& ctx, long window_factor);

}  // namespace mc
