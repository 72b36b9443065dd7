#pragma once

#include <map>
#include <string>
#include <vector>

#include "mirrorcurve/novikov_linalg.hpp"

namespace mc {

/// Graded basis with optional norm weights (0 for Floer generators; function
/// monomials carry their sup-norm exponent). All valuation bookkeeping in this
/// module is weighted.
struct GradedBasis {
    std::vector<int> degree;
    std::vector<Rat> weight;
    std::vector<std::string> name;

    std::size_t size() const { return degree.size(); }
    void add(int deg, std::string nm, Rat w = Rat(0)) {
        degree.push_back(deg);
        weight.push_back(std::move(w));
        name.push_back(std::move(nm));
    }
};

using SparseVec = std::map<int, Novikov>;
using Mu2 = std::map<std::pair<int, int>, SparseVec>;

/// A contraction (i, p, h) of a complex (big, d_big) onto (small, d_small):
/// p i = 1, 1 - i p = d h + h d, h^2 = 0, p h = 0, h i = 0.
struct Contraction {
    GradedBasis big, small;
    NovikovMatrix d_big;    // big x big, degree +1
    NovikovMatrix d_small;  // small x small
    NovikovMatrix incl;     // big x small
    NovikovMatrix proj;     // small x big
    NovikovMatrix homotopy; // big x big, degree -1
    std::vector<std::size_t> small_to_big;  // surviving basis indices (labels)

    std::vector<Rat> big_weights() const { return big.weight; }
    /// Check the five side conditions and the chain-map property mod T^lambda;
    /// returns human-readable violations.
    std::vector<std::string> verify(const Rat& lambda) const;
};

/// Contract a complex onto (a complement of) its image/coimage by valuation
/// Gaussian elimination: repeatedly split off two-term acyclic pieces along
/// pivots of minimal weighted valuation below the cutoff.
Contraction contract_by_elimination(const GradedBasis& basis, const NovikovMatrix& d,
                                    const Rat& lambda);

struct PerturbedContraction {
    NovikovMatrix d_small, incl, proj, homotopy;
    Rat epsilon;  // certified valuation gain of h delta
};

/// The perturbation lemma: given delta with (d + delta)^2 = 0 mod T^lambda and
/// h delta strictly valuation-increasing (weighted), produce the perturbed
/// data by the Neumann series truncated at T^lambda.
PerturbedContraction perturb_contraction(const Contraction& c, const NovikovMatrix& delta,
                                         const Rat& lambda);

/// Shifted (bar) operations b^k of degree +1 on a graded basis. The A-infinity
/// relations in this convention read, for every arity n and basis tuple x,
///   sum over a + k + b = n of (Koszul prefix) b^{a+1+b}(1^a (x) b^k (x) 1^b) = 0
/// with prefix (-1)^{deg'(x_1) + ... + deg'(x_a)}, deg' = degree - 1.
class BarOps {
  public:
    explicit BarOps(const GradedBasis& basis) : basis_(&basis) {}

    const GradedBasis& basis() const { return *basis_; }
    int max_arity() const { return int(ops_.size()); }

    void add(const std::vector<int>& in, int out, const Novikov& c);
    const SparseVec* get(const std::vector<int>& in) const;
    /// All operations of one arity (empty map when none).
    const std::map<std::vector<int>, SparseVec>& ops_view(std::size_t arity) const;

    /// b^1 = -d, b^2(s a, s b) = (-1)^{deg a} s(ab); higher operations absent.
    static BarOps from_dg(const GradedBasis& basis, const NovikovMatrix& d, const Mu2& mu2);

    bool dg_only() const;  // no operations of arity >= 3

    /// Apply the coderivation extension of the b's to a sparse tensor.
    std::map<std::vector<int>, Novikov> coderivation(
        const std::map<std::vector<int>, Novikov>& tensor) const;

  private:
    const GradedBasis* basis_;
    std::vector<std::map<std::vector<int>, SparseVec>> ops_;  // ops_[k-1] = arity k
};

struct AInfinityDefect {
    ExtRat min_defect = ExtRat::infinity();  // weighted valuation of the worst relation defect
    std::size_t relations_checked = 0;
    std::vector<int> worst_tuple;
};

/// Evaluate every A-infinity relation up to arity n_max on all tuples drawn
/// from the given generating subset of the basis (the whole basis if empty).
AInfinityDefect verify_ainfinity(const BarOps& ops, int n_max,
                                 const std::vector<int>& generating = {});

struct TransferredStructure {
    BarOps small_ops;
    /// Linear components of the A-infinity quasi-isomorphism into the big
    /// complex: itilde_n maps small-basis tuples to big-basis vectors.
    std::map<std::vector<int>, SparseVec> itilde;
    TransferredStructure(const GradedBasis& b) : small_ops(b) {}
};

/// Tree-sum transfer of an A-infinity structure along a contraction, realized
/// as the perturbation lemma on the truncated tensor coalgebra. mu_big's
/// arity-1 part is the full differential; the contraction's d_big is its
/// low-area part.
TransferredStructure transfer_ainfinity(const Contraction& c, const BarOps& mu_big, int n_max,
                                        const Rat& lambda);

}  // namespace mc
