#pragma once

#include "ainfss/ainf.hpp"

namespace ainfss {

/* Bidegree of the order-j, arity-n component of a deformation of an s-type
 * algebra: (2-n)(s,-s+1) + (j,-j). */
inline Bidegree deformation_bidegree(int s_type, int arity, int order) {
    return structure_bidegree(s_type, arity) + Bidegree{order, -order};
}

/* Formal bigraded deformation over k[ħ], ħ of bidegree (-1,1): the base
 * algebra carries the ħ-order-0 structure maps, higher orders live here. */
class FormalBigradedDeformation {
  public:
    explicit FormalBigradedDeformation(AInfinityAlgebra base) : base_(std::move(base)) {}

    const AInfinityAlgebra& base() const { return base_; }
    AInfinityAlgebra& base() { return base_; }
    const SpacePtr& space() const { return base_.space(); }
    int s_type() const { return base_.s_type(); }

    /* Order-0 components are owned by the base; j >= 1 are stored here. */
    void set_component(int order, MultiMap m);
    const MultiMap& component(int arity, int order) const;
    bool has_component(int arity, int order) const;
    const std::map<std::pair<int, int>, MultiMap>& higher() const { return higher_; }

    int max_arity() const;
    int max_order() const;

    /* Present when the deformation lives over k[ħ]/(ħ^{N+1}); identities at
     * ħ-orders beyond N are then vacuous. */
    const std::optional<int>& truncation() const { return truncation_; }
    void set_truncation(std::optional<int> n) { truncation_ = n; }

    /* m̃_n applied to base elements with attached ħ-powers; the result is the
     * list of (order, value) pairs of Σ_j m_n^j ħ^{j + Σ flags}. */
    std::vector<std::pair<int, LinComb>> evaluate_total(int arity,
                                                        const std::vector<std::pair<LinComb, int>>& args) const;

    bool operator==(const FormalBigradedDeformation& o) const;

  private:
    AInfinityAlgebra base_;
    std::map<std::pair<int, int>, MultiMap> higher_;  // (arity, order>=1)
    std::optional<int> truncation_;
    mutable std::map<std::pair<int, int>, MultiMap> zero_cache_;
};

/* Filtered A∞-algebra in split presentation: X^{p,q} pieces with structure
 * maps stored by filtration shift; F^p is the span of pieces with first
 * index >= p.  Shares the component layout of a 0-type deformation. */
class FilteredAInfinity {
  public:
    explicit FilteredAInfinity(FormalBigradedDeformation rep);

    const FormalBigradedDeformation& rep() const { return rep_; }
    const SpacePtr& space() const { return rep_.space(); }
    const std::optional<std::size_t>& unit() const { return rep_.base().unit(); }

    /* Filtration-shift-j component of the arity-n structure map. */
    const MultiMap& component(int arity, int shift) const { return rep_.component(arity, shift); }
    int max_arity() const { return rep_.max_arity(); }
    int max_shift() const { return rep_.max_order(); }

    bool operator==(const FilteredAInfinity& o) const { return rep_ == o.rep_; }

  private:
    FormalBigradedDeformation rep_;
};

/* Verifies component bidegrees and the Stasheff identities of the
 * k[ħ]-structure at every ħ-order. */
Report check_deformation(const FormalBigradedDeformation& d, int n_max = 0);

/* SI(n) of the k[ħ]-structure at one ħ-order:
 * Σ_{(r,s,t)} Σ_{j0+j1=order} (-1)^{r+st} m_{r+1+t}^{j0} ∘ (id^r ⊗ m_s^{j1} ⊗ id^t). */
MultiMap deformation_si_defect(const FormalBigradedDeformation& d, int n, int order);

/* Drops components of ħ-order greater than n; the deformation reduction
 * to k[ħ]/(ħ^{N+1}). */
FormalBigradedDeformation reduce_mod(const FormalBigradedDeformation& d, int order);

/* Filtered algebra validity: the eq. of filtered compatibility holds by the
 * shift-component layout (shifts >= 0); SI of the total maps is checked via
 * the per-order identities. */
Report check_filtered(const FilteredAInfinity& f);

/* Rees construction: the shift-j component becomes the ħ^j component of a
 * deformation of the associated graded algebra. */
FormalBigradedDeformation rees(const FilteredAInfinity& f);

/* Keeps only the shift-0 components; equals reduce_mod(rees(f), 0). */
AInfinityAlgebra associated_graded(const FilteredAInfinity& f);

/* ħ = 1 specialization: the deformation components reread as filtration
 * shifts of the total maps.  Requires a 0-type base. */
FilteredAInfinity specialize_hbar_one(const FormalBigradedDeformation& d);

/* rees(specialize_hbar_one(d)) equals d component by component. */
bool rees_roundtrip_check(const FormalBigradedDeformation& d);

/* Morphism of deformations: components f_n^j over a morphism of the bases. */
class DeformedMorphism {
  public:
    DeformedMorphism(const FormalBigradedDeformation* source, const FormalBigradedDeformation* target);

    const FormalBigradedDeformation& source() const { return *source_; }
    const FormalBigradedDeformation& target() const { return *target_; }

    void set_component(int order, MultiMap f);
    const MultiMap& component(int arity, int order) const;
    const std::map<std::pair<int, int>, MultiMap>& components() const { return comps_; }
    int max_arity() const;
    int max_order() const;

  private:
    const FormalBigradedDeformation* source_;
    const FormalBigradedDeformation* target_;
    std::map<std::pair<int, int>, MultiMap> comps_;
    mutable std::map<std::pair<int, int>, MultiMap> zero_cache_;
};

/* MI(n) of the k[ħ]-morphism at one ħ-order, as LHS - RHS. */
MultiMap deformed_mi_defect(const DeformedMorphism& f, int n, int order);
Report check_deformed_morphism(const DeformedMorphism& f, int n_max = 0, int order_max = -1);

}  // namespace ainfss
